// SPDX-License-Identifier: Apache-2.0

#include "ckgru/core/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace ckgru {

void adam_step(ParamSet &params, const GradientMap &grads, double lr,
               double l2, const AdamOptions &options) {
  if (!(lr > 0.0))
    throw std::invalid_argument("adam: learning rate must be positive");
  for (const auto &[name, g] : grads)
    if (!params.contains(name))
      throw std::invalid_argument("adam: gradient for unknown parameter '" +
                                  name + "'");

  for (auto &e : params.entries()) {
    if (e.frozen)
      continue;
    const auto it = grads.find(e.name);
    if (it == grads.end())
      continue;
    const Tensor &g = it->second;
    if (g.shape != e.value.shape)
      throw ShapeError("adam: gradient shape " + shape_string(g.shape) +
                       " does not match parameter '" + e.name + "' " +
                       shape_string(e.value.shape));
    AdamState &st = e.adam;
    if (st.first_moment.size() != g.size()) {
      st.first_moment.assign(g.size(), 0.0);
      st.second_moment.assign(g.size(), 0.0);
    }
    ++st.step;
    const double t = static_cast<double>(st.step);
    const double c1 = 1.0 - std::pow(options.beta1, t);
    const double c2 = 1.0 - std::pow(options.beta2, t);
    for (std::size_t i = 0; i < g.size(); ++i) {
      double &theta = e.value.values[i];
      const double gi = g[i] + l2 * theta;
      double &m = st.first_moment[i];
      double &v = st.second_moment[i];
      m = options.beta1 * m + (1.0 - options.beta1) * gi;
      v = options.beta2 * v + (1.0 - options.beta2) * gi * gi;
      theta -= lr * (m / c1) / (std::sqrt(v / c2) + options.epsilon);
    }
  }
}

} // namespace ckgru
