// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>

#include "ckgru/core/param_set.hpp"

namespace ckgru {

/// Builds a scalar loss on `graph` from the bound parameters.
using LossFn = std::function<Var(Graph &graph, const BoundParams &params)>;

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates = 0;
};

/// Compares reverse-mode gradients against central differences
/// (f(x+eps) - f(x-eps)) / 2eps on every trainable coordinate. The error of a
/// coordinate is |a - n| / max(1e-8, |a| + |n|). `params` is restored on
/// return.
GradCheckReport finite_diff_check(const LossFn &fn, ParamSet &params,
                                  double eps);

} // namespace ckgru
