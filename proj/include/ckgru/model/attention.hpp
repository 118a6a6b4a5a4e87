// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ckgru/core/graph.hpp"

namespace ckgru {

struct GcmParams {
  Var W_q; // [d_att x d_m]
  Var W_k; // [d_att x d_m]
  Var W_v; // [d_m x d_m]
};

struct GcmOptions {
  std::size_t iterations = 2;
  /// o_i = a_i * W_v m_i + m_i when true, a_i * W_v m_i otherwise.
  bool residual = true;
};

struct GcmResult {
  /// k x d_m, memory after the last iteration.
  Var attended;
  /// One [k] weight vector per iteration.
  std::vector<Var> weights;
};

/// Global context-aware attention over hidden [k x d_m]. Each iteration
/// forms a query from the mean memory row, scores every row with a scaled
/// dot product (scale 1/sqrt(d_m)), and rewrites the memory with the
/// weighted value projection.
GcmResult gcm_attend(Var hidden, const GcmParams &params,
                     const GcmOptions &options = {});

} // namespace ckgru
