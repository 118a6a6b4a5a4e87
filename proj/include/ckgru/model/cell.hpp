// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "ckgru/core/param_set.hpp"
#include "ckgru/core/rng.hpp"

namespace ckgru {

/// How the two candidate activations enter h_t. `sum` adds both (1-z)
/// weighted terms; `mean` averages them first.
enum class CandidateCombine { sum, mean };

/// One direction of a CK-GRU layer, bound to a graph.
struct CkGruParams {
  Var W_r, W_z, b_r, b_z; // W_r, W_z: [h x (d_in + h + d_c)]
  Var W_n, W_m, b_n, b_m; // W_n, W_m: [h x d_in]
  Var W_cn, W_cm, b_cn, b_cm; // W_cn: [h x d_c], W_cm: [h x d_in]
};

struct CellDims {
  std::size_t d_in = 0;
  std::size_t h = 0;
  std::size_t d_c = 0;
};

/// Names of the concept-pathway parameters under `prefix`.
std::vector<std::string> concept_param_names(const std::string &prefix);

/// Adds `<prefix>.W_r` ... `<prefix>.b_cm`. Weights are uniform in
/// +-1/sqrt(fan_in), biases zero.
void add_cell_params(ParamSet &params, const std::string &prefix,
                     const CellDims &dims, Rng &rng);

CkGruParams bind_cell(const BoundParams &bound, const std::string &prefix);

/// One CK-GRU step: x_t [d_in], h_prev [h], alpha_t [d_c] -> h_t [h].
Var ck_gru_step(Var x_t, Var h_prev, Var alpha_t, const CkGruParams &p,
                CandidateCombine combine = CandidateCombine::sum);

struct BiGruOutput {
  /// k x 2h; row t is [fwd_t || bwd_t].
  Var states;
  /// [fwd_{k-1} || bwd_0], the final state of each direction.
  Var summary;
};

/// seq [k x d_in], alpha [k x d_c]. Both directions start from zero state;
/// the backward direction reads token t together with alpha_t.
BiGruOutput bigru_forward(Var seq, Var alpha, const CkGruParams &fwd,
                          const CkGruParams &bwd,
                          CandidateCombine combine = CandidateCombine::sum);

/// uniform(-1/sqrt(cols), 1/sqrt(cols)) matrix.
Tensor uniform_init(std::size_t rows, std::size_t cols, Rng &rng);

} // namespace ckgru
