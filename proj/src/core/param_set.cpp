// SPDX-License-Identifier: Apache-2.0

#include "ckgru/core/param_set.hpp"

#include <stdexcept>

namespace ckgru {

Tensor &ParamSet::add(const std::string &name, Tensor value, bool frozen) {
  if (index_.count(name))
    throw std::invalid_argument("param set: duplicate parameter '" + name +
                                "'");
  index_[name] = entries_.size();
  entries_.push_back(Entry{name, std::move(value), {}, frozen});
  return entries_.back().value;
}

bool ParamSet::contains(const std::string &name) const {
  return index_.count(name) != 0;
}

std::size_t ParamSet::index_of(const std::string &name) const {
  const auto it = index_.find(name);
  if (it == index_.end())
    throw std::out_of_range("param set: no parameter '" + name + "'");
  return it->second;
}

ParamSet::Entry &ParamSet::entry(const std::string &name) {
  return entries_[index_of(name)];
}

const ParamSet::Entry &ParamSet::entry(const std::string &name) const {
  return entries_[index_of(name)];
}

Tensor &ParamSet::get(const std::string &name) { return entry(name).value; }
const Tensor &ParamSet::get(const std::string &name) const {
  return entry(name).value;
}

void ParamSet::set_frozen(const std::string &name, bool frozen) {
  entry(name).frozen = frozen;
}

std::size_t ParamSet::scalar_count() const {
  std::size_t n = 0;
  for (const Entry &e : entries_)
    n += e.value.size();
  return n;
}

bool operator==(const ParamSet &a, const ParamSet &b) {
  if (a.entries_.size() != b.entries_.size())
    return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    const auto &x = a.entries_[i];
    const auto &y = b.entries_[i];
    if (x.name != y.name || x.value.shape != y.value.shape ||
        x.value.values != y.value.values)
      return false;
  }
  return true;
}

BoundParams::BoundParams(Graph &graph, const ParamSet &params,
                         bool track_gradients)
  : graph_(&graph), params_(&params) {
  vars_.reserve(params.size());
  for (const auto &e : params.entries())
    vars_.push_back(e.frozen || !track_gradients ? graph.constant(e.value)
                                                 : graph.variable(e.value));
}

Var BoundParams::operator[](const std::string &name) const {
  return vars_[params_->index_of(name)];
}

bool BoundParams::contains(const std::string &name) const {
  return params_->contains(name);
}

GradientMap BoundParams::gradients() const {
  GradientMap out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto &e = params_->entries()[i];
    if (e.frozen)
      continue;
    const Var v = vars_[i];
    Tensor g = Tensor::zeros(e.value.shape);
    const auto src = graph_->grad(v.id);
    if (!src.empty())
      std::copy(src.begin(), src.end(), g.values.begin());
    out.emplace(e.name, std::move(g));
  }
  return out;
}

void accumulate(GradientMap &into, const GradientMap &from) {
  for (const auto &[name, g] : from) {
    auto it = into.find(name);
    if (it == into.end()) {
      into.emplace(name, g);
      continue;
    }
    if (it->second.shape != g.shape)
      throw ShapeError("gradient accumulate: shape mismatch for '" + name +
                       "'");
    for (std::size_t i = 0; i < g.size(); ++i)
      it->second[i] += g[i];
  }
}

} // namespace ckgru
