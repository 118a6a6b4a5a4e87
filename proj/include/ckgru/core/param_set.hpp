// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ckgru/core/graph.hpp"
#include "ckgru/core/tensor.hpp"

namespace ckgru {

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step = 0;
};

/// Named parameters in insertion order. Frozen entries are bound as graph
/// constants and skipped by the optimizer.
class ParamSet {
public:
  struct Entry {
    std::string name;
    Tensor value;
    AdamState adam;
    bool frozen = false;
  };

  Tensor &add(const std::string &name, Tensor value, bool frozen = false);

  bool contains(const std::string &name) const;
  /// Position of `name` in entries(); throws std::out_of_range if absent.
  std::size_t index_of(const std::string &name) const;
  Tensor &get(const std::string &name);
  const Tensor &get(const std::string &name) const;
  Entry &entry(const std::string &name);
  const Entry &entry(const std::string &name) const;

  void set_frozen(const std::string &name, bool frozen);

  std::vector<Entry> &entries() { return entries_; }
  const std::vector<Entry> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t scalar_count() const;

  friend bool operator==(const ParamSet &a, const ParamSet &b);

private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

using GradientMap = std::map<std::string, Tensor>;

/// A ParamSet recorded on a graph: trainable entries become variables,
/// frozen ones constants.
class BoundParams {
public:
  /// With `track_gradients` false every entry is bound as a constant and
  /// the graph records no backward closures.
  BoundParams(Graph &graph, const ParamSet &params, bool track_gradients = true);

  Var operator[](const std::string &name) const;
  bool contains(const std::string &name) const;
  /// Gradients of trainable entries after Graph::backward. Entries the loss
  /// never reached get zeros.
  GradientMap gradients() const;

private:
  Graph *graph_;
  const ParamSet *params_;
  std::vector<Var> vars_; // parallel to params_->entries()
};

/// Elementwise a += b over matching names; used for batch accumulation.
void accumulate(GradientMap &into, const GradientMap &from);

} // namespace ckgru
