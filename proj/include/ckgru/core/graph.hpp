// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <deque>
#include <vector>

#include "ckgru/core/tensor.hpp"

namespace ckgru {

class Graph;

/// Handle to a node recorded on a Graph. Cheap to copy; only valid while the
/// owning graph is alive and has not been cleared.
struct Var {
  Graph *graph = nullptr;
  std::size_t id = 0;

  const Tensor &value() const;
  const Shape &shape() const;
  std::span<const double> grad() const;
};

/// Reverse-mode tape. Nodes are appended in evaluation order, so a reverse
/// sweep over the node list is a valid topological order for backprop.
class Graph {
public:
  using BackwardFn = std::function<void(Graph &, std::size_t self)>;

  Graph() = default;
  Graph(const Graph &) = delete;
  Graph &operator=(const Graph &) = delete;

  /// Leaf that does not receive gradients.
  Var constant(Tensor value);
  /// Leaf that accumulates gradients.
  Var variable(Tensor value);

  /// Records an op result. `parents` decides whether gradients flow: if none
  /// of them require gradients the backward closure is dropped.
  /// The closure is only materialised when some parent needs gradients.
  template <class F>
  Var record(Tensor value, std::initializer_list<Var> parents, F &&backward) {
    return record(std::move(value),
                  std::span<const Var>(parents.begin(), parents.size()),
                  std::forward<F>(backward));
  }
  template <class F>
  Var record(Tensor value, std::span<const Var> parents, F &&backward) {
    const bool needs = needs_grad(parents);
    return push(std::move(value),
                needs ? BackwardFn(std::forward<F>(backward)) : BackwardFn(),
                needs);
  }

  const Tensor &value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  /// Gradient buffer of a node; allocated lazily, zero-filled.
  std::vector<double> &grad_buffer(std::size_t id);
  std::span<const double> grad(std::size_t id) const;

  /// Seeds d(output)/d(output) = 1 and sweeps the tape backwards. The output
  /// must hold exactly one value.
  void backward(Var output);
  void zero_grad();
  void clear();

  std::size_t size() const { return nodes_.size(); }

private:
  bool needs_grad(std::span<const Var> parents) const;
  Var push(Tensor value, BackwardFn backward, bool requires_grad);

  struct Node {
    Tensor value;
    std::vector<double> grad;
    BackwardFn backward;
    bool requires_grad = false;
  };
  std::deque<Node> nodes_;
};

} // namespace ckgru
