// SPDX-License-Identifier: Apache-2.0

#include "ckgru/model/cell.hpp"

#include <cmath>
#include <stdexcept>

#include "ckgru/core/ops.hpp"

namespace ckgru {

using namespace ops;

Tensor uniform_init(std::size_t rows, std::size_t cols, Rng &rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  Tensor t = Tensor::zeros({rows, cols});
  for (double &v : t.values)
    v = rng.uniform(-bound, bound);
  return t;
}

std::vector<std::string> concept_param_names(const std::string &prefix) {
  return {prefix + ".W_cn", prefix + ".W_cm", prefix + ".b_cn",
          prefix + ".b_cm"};
}

void add_cell_params(ParamSet &params, const std::string &prefix,
                     const CellDims &d, Rng &rng) {
  if (d.d_in == 0 || d.h == 0)
    throw std::invalid_argument("CK-GRU cell needs d_in > 0 and h > 0");
  const std::size_t gate_in = d.d_in + d.h + d.d_c;
  const auto bias = [&](const char *name) {
    params.add(prefix + name, Tensor::zeros({d.h}));
  };
  params.add(prefix + ".W_r", uniform_init(d.h, gate_in, rng));
  params.add(prefix + ".W_z", uniform_init(d.h, gate_in, rng));
  bias(".b_r");
  bias(".b_z");
  params.add(prefix + ".W_n", uniform_init(d.h, d.d_in, rng));
  params.add(prefix + ".W_m", uniform_init(d.h, d.d_in, rng));
  bias(".b_n");
  bias(".b_m");
  // A zero-width concept space still gets a well-formed [h x 0] matrix.
  params.add(prefix + ".W_cn", d.d_c == 0 ? Tensor::zeros({d.h, 0})
                                          : uniform_init(d.h, d.d_c, rng));
  params.add(prefix + ".W_cm", uniform_init(d.h, d.d_in, rng));
  bias(".b_cn");
  bias(".b_cm");
}

CkGruParams bind_cell(const BoundParams &b, const std::string &prefix) {
  const auto get = [&](const char *name) { return b[prefix + name]; };
  return {get(".W_r"),  get(".W_z"),  get(".b_r"),  get(".b_z"),
          get(".W_n"),  get(".W_m"),  get(".b_n"),  get(".b_m"),
          get(".W_cn"), get(".W_cm"), get(".b_cn"), get(".b_cm")};
}

Var ck_gru_step(Var x, Var h_prev, Var alpha, const CkGruParams &p,
                CandidateCombine combine) {
  const Var xha = concat({x, h_prev, alpha});
  const Var r = sigmoid(affine(p.W_r, xha, p.b_r));
  const Var z = sigmoid(affine(p.W_z, xha, p.b_z));
  const Var n = tanh_op(add(affine(p.W_n, x, p.b_n),
                            mul(r, affine(p.W_m, x, p.b_m))));
  const Var nc = tanh_op(add(affine(p.W_cn, alpha, p.b_cn),
                             mul(r, affine(p.W_cm, x, p.b_cm))));
  const Var keep = one_minus(z);
  const Var carry = mul(z, h_prev);
  if (combine == CandidateCombine::mean)
    return add(mul(keep, scale(add(n, nc), 0.5)), carry);
  return add(add(mul(keep, n), carry), mul(keep, nc));
}

BiGruOutput bigru_forward(Var seq, Var alpha, const CkGruParams &fwd,
                          const CkGruParams &bwd, CandidateCombine combine) {
  Graph &g = *seq.graph;
  if (seq.shape().size() != 2 || alpha.shape().size() != 2)
    throw ShapeError("bigru_forward: seq and alpha must be matrices");
  const std::size_t k = seq.shape()[0];
  if (k == 0)
    throw ShapeError("bigru_forward: empty sequence");
  if (alpha.shape()[0] != k)
    throw ShapeError("bigru_forward: " + std::to_string(k) + " tokens but " +
                     std::to_string(alpha.shape()[0]) + " concept rows");
  const std::size_t h = fwd.b_r.shape()[0];

  std::vector<Var> xs, as;
  xs.reserve(k);
  as.reserve(k);
  for (std::size_t t = 0; t < k; ++t) {
    xs.push_back(row(seq, t));
    as.push_back(row(alpha, t));
  }

  std::vector<Var> f(k), b(k);
  Var state = g.constant(Tensor::zeros({h}));
  for (std::size_t t = 0; t < k; ++t)
    f[t] = state = ck_gru_step(xs[t], state, as[t], fwd, combine);
  state = g.constant(Tensor::zeros({h}));
  for (std::size_t t = k; t-- > 0;)
    b[t] = state = ck_gru_step(xs[t], state, as[t], bwd, combine);

  std::vector<Var> rows;
  rows.reserve(k);
  for (std::size_t t = 0; t < k; ++t)
    rows.push_back(concat({f[t], b[t]}));
  return {stack(rows), concat({f[k - 1], b[0]})};
}

} // namespace ckgru
