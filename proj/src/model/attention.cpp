// SPDX-License-Identifier: Apache-2.0

#include "ckgru/model/attention.hpp"

#include <cmath>
#include <stdexcept>

#include "ckgru/core/ops.hpp"

namespace ckgru {

using namespace ops;

GcmResult gcm_attend(Var hidden, const GcmParams &p, const GcmOptions &opt) {
  if (hidden.shape().size() != 2 || hidden.shape()[0] == 0)
    throw ShapeError("gcm_attend: hidden must be a non-empty matrix, got " +
                     shape_string(hidden.shape()));
  if (opt.iterations == 0)
    throw std::invalid_argument("gcm_attend: iterations must be positive");
  const double inv_scale =
    1.0 / std::sqrt(static_cast<double>(hidden.shape()[1]));
  const Var W_k_t = transpose(p.W_k);
  const Var W_v_t = transpose(p.W_v);

  GcmResult out;
  Var memory = hidden;
  for (std::size_t it = 0; it < opt.iterations; ++it) {
    const Var query = matvec(p.W_q, mean_rows(memory));
    const Var keys = matmul(memory, W_k_t);
    const Var weights = softmax(scale(matvec(keys, query), inv_scale));
    Var next = scale_rows(matmul(memory, W_v_t), weights);
    if (opt.residual)
      next = add(next, memory);
    out.weights.push_back(weights);
    memory = next;
  }
  out.attended = memory;
  return out;
}

} // namespace ckgru
