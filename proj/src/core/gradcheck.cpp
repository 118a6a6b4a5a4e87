// SPDX-License-Identifier: Apache-2.0

#include "ckgru/core/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ckgru {

namespace {

double evaluate(const LossFn &fn, const ParamSet &params) {
  Graph graph;
  const BoundParams bound(graph, params, false);
  return fn(graph, bound).value()[0];
}

} // namespace

GradCheckReport finite_diff_check(const LossFn &fn, ParamSet &params,
                                  double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("finite_diff_check: eps must be positive");

  GradientMap analytic;
  {
    Graph graph;
    const BoundParams bound(graph, params);
    const Var loss = fn(graph, bound);
    graph.backward(loss);
    analytic = bound.gradients();
  }

  GradCheckReport report;
  for (auto &e : params.entries()) {
    if (e.frozen)
      continue;
    const Tensor &grad = analytic.at(e.name);
    for (std::size_t i = 0; i < e.value.size(); ++i) {
      const double saved = e.value[i];
      e.value[i] = saved + eps;
      const double up = evaluate(fn, params);
      e.value[i] = saved - eps;
      const double down = evaluate(fn, params);
      e.value[i] = saved;

      const double numeric = (up - down) / (2.0 * eps);
      const double a = grad[i];
      const double err =
        std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      ++report.coordinates;
      if (err > report.max_relative_error || report.coordinates == 1) {
        report.max_relative_error = err;
        report.worst_parameter = e.name;
        report.worst_index = i;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

} // namespace ckgru
