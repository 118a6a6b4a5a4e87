// SPDX-License-Identifier: Apache-2.0

#include "ckgru/core/graph.hpp"

#include <stdexcept>

namespace ckgru {

const Tensor &Var::value() const { return graph->value(id); }
const Shape &Var::shape() const { return graph->value(id).shape; }
std::span<const double> Var::grad() const { return graph->grad(id); }

Var Graph::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, nullptr, false});
  return Var{this, nodes_.size() - 1};
}

Var Graph::variable(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, nullptr, true});
  return Var{this, nodes_.size() - 1};
}

bool Graph::needs_grad(std::span<const Var> parents) const {
  bool needs = false;
  for (const Var &p : parents) {
    if (p.graph != this)
      throw std::logic_error("graph: operand recorded on a different graph");
    needs = needs || nodes_[p.id].requires_grad;
  }
  return needs;
}

Var Graph::push(Tensor value, BackwardFn backward, bool requires_grad) {
  nodes_.push_back(
    Node{std::move(value), {}, std::move(backward), requires_grad});
  return Var{this, nodes_.size() - 1};
}

std::vector<double> &Graph::grad_buffer(std::size_t id) {
  Node &n = nodes_[id];
  if (n.grad.size() != n.value.size())
    n.grad.assign(n.value.size(), 0.0);
  return n.grad;
}

std::span<const double> Graph::grad(std::size_t id) const {
  return nodes_[id].grad;
}

void Graph::backward(Var output) {
  if (output.graph != this)
    throw std::logic_error("graph: backward on a foreign variable");
  if (nodes_[output.id].value.size() != 1)
    throw ShapeError("backward: output must be scalar, got " +
                     shape_string(nodes_[output.id].value.shape));
  grad_buffer(output.id)[0] += 1.0;
  for (std::size_t i = output.id + 1; i-- > 0;) {
    Node &n = nodes_[i];
    if (!n.backward || n.grad.empty())
      continue;
    // The closure may grow parents' buffers but never this node's.
    n.backward(*this, i);
  }
}

void Graph::zero_grad() {
  for (Node &n : nodes_)
    n.grad.clear();
}

void Graph::clear() { nodes_.clear(); }

} // namespace ckgru
