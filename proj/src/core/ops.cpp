// SPDX-License-Identifier: Apache-2.0

#include "ckgru/core/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ckgru::ops {

namespace {

void require_same_shape(Var a, Var b, const char *op) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
}

void require_rank(Var a, std::size_t rank, const char *op) {
  if (a.shape().size() != rank)
    throw ShapeError(std::string(op) + ": expected rank " +
                     std::to_string(rank) + ", got " +
                     shape_string(a.shape()));
}

// Hands the parent's gradient buffer to f if the parent tracks gradients.
template <typename F> void accumulate(Graph &g, std::size_t parent, F &&f) {
  if (!g.requires_grad(parent))
    return;
  std::vector<double> &buf = g.grad_buffer(parent);
  f(buf);
}

} // namespace

Var add(Var a, Var b) {
  require_same_shape(a, b, "add");
  Graph &g = *a.graph;
  Tensor out = a.value();
  const Tensor &bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += bv[i];
  const std::size_t ia = a.id, ib = b.id;
  return g.record(std::move(out), {a, b}, [ia, ib](Graph &g, std::size_t s) {
    const auto up = g.grad(s);
    for (std::size_t p : {ia, ib})
      accumulate(g, p, [&](std::vector<double> &buf) {
        for (std::size_t i = 0; i < buf.size(); ++i)
          buf[i] += up[i];
      });
  });
}

Var sub(Var a, Var b) {
  require_same_shape(a, b, "sub");
  Graph &g = *a.graph;
  Tensor out = a.value();
  const Tensor &bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] -= bv[i];
  const std::size_t ia = a.id, ib = b.id;
  return g.record(std::move(out), {a, b}, [ia, ib](Graph &g, std::size_t s) {
    const auto up = g.grad(s);
    accumulate(g, ia, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < buf.size(); ++i)
        buf[i] += up[i];
    });
    accumulate(g, ib, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < buf.size(); ++i)
        buf[i] -= up[i];
    });
  });
}

Var mul(Var a, Var b) {
  require_same_shape(a, b, "mul");
  Graph &g = *a.graph;
  Tensor out = a.value();
  const Tensor &bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] *= bv[i];
  const std::size_t ia = a.id, ib = b.id;
  return g.record(std::move(out), {a, b}, [ia, ib](Graph &g, std::size_t s) {
    const auto up = g.grad(s);
    const Tensor &av = g.value(ia);
    const Tensor &bv = g.value(ib);
    accumulate(g, ia, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < buf.size(); ++i)
        buf[i] += up[i] * bv[i];
    });
    accumulate(g, ib, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < buf.size(); ++i)
        buf[i] += up[i] * av[i];
    });
  });
}

Var scale(Var a, double factor) {
  Graph &g = *a.graph;
  Tensor out = a.value();
  for (double &v : out.values)
    v *= factor;
  const std::size_t ia = a.id;
  return g.record(std::move(out), {a}, [ia, factor](Graph &g, std::size_t s) {
    const auto up = g.grad(s);
    accumulate(g, ia, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < buf.size(); ++i)
        buf[i] += up[i] * factor;
    });
  });
}

Var one_minus(Var a) {
  Graph &g = *a.graph;
  Tensor out = a.value();
  for (double &v : out.values)
    v = 1.0 - v;
  const std::size_t ia = a.id;
  return g.record(std::move(out), {a}, [ia](Graph &g, std::size_t s) {
    const auto up = g.grad(s);
    accumulate(g, ia, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < buf.size(); ++i)
        buf[i] -= up[i];
    });
  });
}

Var sigmoid(Var x) {
  Graph &g = *x.graph;
  Tensor out = x.value();
  for (double &v : out.values)
    v = 1.0 / (1.0 + std::exp(-v));
  const std::size_t ix = x.id;
  return g.record(std::move(out), {x}, [ix](Graph &g, std::size_t s) {
    const auto up = g.grad(s);
    const Tensor &y = g.value(s);
    accumulate(g, ix, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < buf.size(); ++i)
        buf[i] += up[i] * y[i] * (1.0 - y[i]);
    });
  });
}

Var tanh_op(Var x) {
  Graph &g = *x.graph;
  Tensor out = x.value();
  for (double &v : out.values)
    v = std::tanh(v);
  const std::size_t ix = x.id;
  return g.record(std::move(out), {x}, [ix](Graph &g, std::size_t s) {
    const auto up = g.grad(s);
    const Tensor &y = g.value(s);
    accumulate(g, ix, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < buf.size(); ++i)
        buf[i] += up[i] * (1.0 - y[i] * y[i]);
    });
  });
}

Var matmul(Var a, Var b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  if (b.shape()[0] != k)
    throw ShapeError("matmul: inner dimensions disagree " +
                     shape_string(a.shape()) + " . " +
                     shape_string(b.shape()));
  Graph &g = *a.graph;
  const Tensor &av = a.value();
  const Tensor &bv = b.value();
  Tensor out = Tensor::zeros({m, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      const double *brow = &bv.values[p * n];
      double *orow = &out.values[i * n];
      for (std::size_t j = 0; j < n; ++j)
        orow[j] += aip * brow[j];
    }
  const std::size_t ia = a.id, ib = b.id;
  return g.record(
    std::move(out), {a, b}, [ia, ib, m, k, n](Graph &g, std::size_t s) {
      const auto up = g.grad(s);
      const Tensor &av = g.value(ia);
      const Tensor &bv = g.value(ib);
      // dA = dC . B^T
      accumulate(g, ia, [&](std::vector<double> &buf) {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
              acc += up[i * n + j] * bv[p * n + j];
            buf[i * k + p] += acc;
          }
      });
      // dB = A^T . dC
      accumulate(g, ib, [&](std::vector<double> &buf) {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            const double aip = av[i * k + p];
            for (std::size_t j = 0; j < n; ++j)
              buf[p * n + j] += aip * up[i * n + j];
          }
      });
    });
}

Var matvec(Var w, Var x) {
  require_rank(w, 2, "matvec");
  require_rank(x, 1, "matvec");
  const std::size_t m = w.shape()[0], k = w.shape()[1];
  if (x.shape()[0] != k)
    throw ShapeError("matvec: inner dimensions disagree " +
                     shape_string(w.shape()) + " . " +
                     shape_string(x.shape()));
  Graph &g = *w.graph;
  const Tensor &wv = w.value();
  const Tensor &xv = x.value();
  Tensor out = Tensor::zeros({m});
  for (std::size_t i = 0; i < m; ++i) {
    const double *wrow = &wv.values[i * k];
    double acc = 0.0;
    for (std::size_t p = 0; p < k; ++p)
      acc += wrow[p] * xv[p];
    out[i] = acc;
  }
  const std::size_t iw = w.id, ix = x.id;
  return g.record(std::move(out), {w, x}, [iw, ix, m, k](Graph &g,
                                                         std::size_t s) {
    const auto up = g.grad(s);
    const Tensor &wv = g.value(iw);
    const Tensor &xv = g.value(ix);
    accumulate(g, iw, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < m; ++i) {
        const double u = up[i];
        double *brow = &buf[i * k];
        for (std::size_t p = 0; p < k; ++p)
          brow[p] += u * xv[p];
      }
    });
    accumulate(g, ix, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < m; ++i) {
        const double u = up[i];
        const double *wrow = &wv.values[i * k];
        for (std::size_t p = 0; p < k; ++p)
          buf[p] += u * wrow[p];
      }
    });
  });
}

Var affine(Var w, Var x, Var b) {
  require_rank(w, 2, "affine");
  require_rank(x, 1, "affine");
  const std::size_t m = w.shape()[0], k = w.shape()[1];
  if (x.shape()[0] != k)
    throw ShapeError("affine: inner dimensions disagree " +
                     shape_string(w.shape()) + " . " +
                     shape_string(x.shape()));
  require_rank(b, 1, "affine");
  if (b.shape()[0] != w.shape()[0])
    throw ShapeError("affine: bias " + shape_string(b.shape()) +
                     " does not match " + shape_string(w.shape()));
  Graph &g = *w.graph;
  const Tensor &wv = w.value();
  const Tensor &xv = x.value();
  Tensor out = b.value();
  for (std::size_t i = 0; i < m; ++i) {
    const double *wrow = &wv.values[i * k];
    double acc = 0.0;
    for (std::size_t p = 0; p < k; ++p)
      acc += wrow[p] * xv[p];
    out[i] += acc;
  }
  const std::size_t iw = w.id, ix = x.id, ib = b.id;
  return g.record(std::move(out), {w, x, b}, [iw, ix, ib, m, k](Graph &g,
                                                                std::size_t s) {
    const auto up = g.grad(s);
    const Tensor &wv = g.value(iw);
    const Tensor &xv = g.value(ix);
    accumulate(g, iw, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < m; ++i) {
        const double u = up[i];
        double *brow = &buf[i * k];
        for (std::size_t p = 0; p < k; ++p)
          brow[p] += u * xv[p];
      }
    });
    accumulate(g, ix, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < m; ++i) {
        const double u = up[i];
        const double *wrow = &wv.values[i * k];
        for (std::size_t p = 0; p < k; ++p)
          buf[p] += u * wrow[p];
      }
    });
    accumulate(g, ib, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < m; ++i)
        buf[i] += up[i];
    });
  });
}

Var transpose(Var a) {
  require_rank(a, 2, "transpose");
  const std::size_t m = a.shape()[0], n = a.shape()[1];
  Graph &g = *a.graph;
  const Tensor &av = a.value();
  Tensor out = Tensor::zeros({n, m});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[j * m + i] = av[i * n + j];
  const std::size_t ia = a.id;
  return g.record(std::move(out), {a}, [ia, m, n](Graph &g, std::size_t s) {
    const auto up = g.grad(s);
    accumulate(g, ia, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          buf[i * n + j] += up[j * m + i];
    });
  });
}

Var concat(std::initializer_list<Var> parts, std::size_t axis) {
  return concat(std::span<const Var>(parts.begin(), parts.size()), axis);
}

Var concat(std::span<const Var> parts, std::size_t axis) {
  if (parts.empty())
    throw ShapeError("concat: no parts");
  const Shape &first = parts[0].shape();
  if (axis >= first.size())
    throw ShapeError("concat: axis " + std::to_string(axis) +
                     " out of range for " + shape_string(first));
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (const Var &p : parts) {
    const Shape &s = p.shape();
    if (s.size() != first.size())
      throw ShapeError("concat: rank mismatch " + shape_string(first) +
                       " vs " + shape_string(s));
    for (std::size_t d = 0; d < s.size(); ++d)
      if (d != axis && s[d] != first[d])
        throw ShapeError("concat: dimension mismatch " + shape_string(first) +
                         " vs " + shape_string(s));
    out_shape[axis] += s[axis];
  }
  // View each part as [outer x (extent * inner)] and interleave the blocks.
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d)
    outer *= first[d];
  for (std::size_t d = axis + 1; d < first.size(); ++d)
    inner *= first[d];
  struct Part {
    std::size_t id, width, offset;
  };
  std::vector<Part> layout;
  layout.reserve(parts.size());
  std::size_t total = 0;
  for (const Var &p : parts) {
    layout.push_back({p.id, p.shape()[axis] * inner, total});
    total += layout.back().width;
  }
  Graph &g = *parts[0].graph;
  Tensor out = Tensor::zeros(out_shape);
  for (std::size_t q = 0; q < parts.size(); ++q) {
    const Tensor &pv = parts[q].value();
    const Part &part = layout[q];
    for (std::size_t o = 0; o < outer; ++o)
      std::copy_n(&pv.values[o * part.width], part.width,
                  &out.values[o * total + part.offset]);
  }
  return g.record(std::move(out), parts,
                  [layout = std::move(layout), outer, total](Graph &g,
                                                             std::size_t s) {
                    const auto up = g.grad(s);
                    for (const Part &part : layout)
                      accumulate(g, part.id, [&](std::vector<double> &buf) {
                        for (std::size_t o = 0; o < outer; ++o)
                          for (std::size_t j = 0; j < part.width; ++j)
                            buf[o * part.width + j] +=
                              up[o * total + part.offset + j];
                      });
                  });
}

Var softmax(Var x, std::size_t axis) {
  const Shape &shape = x.shape();
  if (axis >= shape.size())
    throw ShapeError("softmax: axis " + std::to_string(axis) +
                     " out of range for " + shape_string(shape));
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d)
    outer *= shape[d];
  for (std::size_t d = axis + 1; d < shape.size(); ++d)
    inner *= shape[d];
  const std::size_t len = shape[axis];
  Graph &g = *x.graph;
  const Tensor &xv = x.value();
  Tensor out = Tensor::zeros(shape);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * len * inner + in;
      double mx = xv[base];
      for (std::size_t j = 1; j < len; ++j)
        mx = std::max(mx, xv[base + j * inner]);
      double z = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        const double e = std::exp(xv[base + j * inner] - mx);
        out[base + j * inner] = e;
        z += e;
      }
      for (std::size_t j = 0; j < len; ++j)
        out[base + j * inner] /= z;
    }
  const std::size_t ix = x.id;
  return g.record(std::move(out), {x}, [ix, outer, inner, len](Graph &g,
                                                               std::size_t s) {
    const auto up = g.grad(s);
    const Tensor &y = g.value(s);
    accumulate(g, ix, [&](std::vector<double> &buf) {
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t in = 0; in < inner; ++in) {
          const std::size_t base = o * len * inner + in;
          double dot = 0.0;
          for (std::size_t j = 0; j < len; ++j)
            dot += up[base + j * inner] * y[base + j * inner];
          for (std::size_t j = 0; j < len; ++j) {
            const std::size_t idx = base + j * inner;
            buf[idx] += y[idx] * (up[idx] - dot);
          }
        }
    });
  });
}

Var cross_entropy(Var logits, std::span<const int> labels) {
  require_rank(logits, 2, "cross_entropy");
  const std::size_t batch = logits.shape()[0], classes = logits.shape()[1];
  if (batch == 0)
    throw ShapeError("cross_entropy: empty batch");
  if (labels.size() != batch)
    throw ShapeError("cross_entropy: " + std::to_string(labels.size()) +
                     " labels for batch of " + std::to_string(batch));
  for (int y : labels)
    if (y < 0 || static_cast<std::size_t>(y) >= classes)
      throw std::out_of_range("cross_entropy: label " + std::to_string(y) +
                              " outside [0, " + std::to_string(classes) + ")");
  Graph &g = *logits.graph;
  const Tensor &lv = logits.value();
  std::vector<double> probs(batch * classes);
  double loss = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    const double *row = &lv.values[b * classes];
    const double mx = *std::max_element(row, row + classes);
    double z = 0.0;
    for (std::size_t c = 0; c < classes; ++c)
      z += std::exp(row[c] - mx);
    const double log_z = std::log(z) + mx;
    for (std::size_t c = 0; c < classes; ++c)
      probs[b * classes + c] = std::exp(row[c] - log_z);
    loss += log_z - row[labels[b]];
  }
  loss /= static_cast<double>(batch);
  std::vector<int> ys(labels.begin(), labels.end());
  const std::size_t il = logits.id;
  return g.record(Tensor({}, {loss}), {logits},
                  [il, ys = std::move(ys), probs = std::move(probs), batch,
                   classes](Graph &g, std::size_t s) {
                    const double up = g.grad(s)[0] / static_cast<double>(batch);
                    accumulate(g, il, [&](std::vector<double> &buf) {
                      for (std::size_t b = 0; b < batch; ++b)
                        for (std::size_t c = 0; c < classes; ++c) {
                          const double onehot =
                            static_cast<int>(c) == ys[b] ? 1.0 : 0.0;
                          buf[b * classes + c] +=
                            up * (probs[b * classes + c] - onehot);
                        }
                    });
                  });
}

Var dropout(Var x, double rate, Rng &rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0))
    throw std::invalid_argument("dropout: rate must lie in [0, 1), got " +
                                std::to_string(rate));
  if (!training || rate == 0.0)
    return x;
  Graph &g = *x.graph;
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(x.value().size());
  for (double &m : mask)
    m = rng.uniform() < rate ? 0.0 : keep_scale;
  Tensor out = x.value();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] *= mask[i];
  const std::size_t ix = x.id;
  return g.record(std::move(out), {x},
                  [ix, mask = std::move(mask)](Graph &g, std::size_t s) {
                    const auto up = g.grad(s);
                    accumulate(g, ix, [&](std::vector<double> &buf) {
                      for (std::size_t i = 0; i < buf.size(); ++i)
                        buf[i] += up[i] * mask[i];
                    });
                  });
}

Var gather_rows(Var table, std::span<const std::size_t> ids) {
  require_rank(table, 2, "gather_rows");
  const std::size_t rows = table.shape()[0], d = table.shape()[1];
  Graph &g = *table.graph;
  const Tensor &tv = table.value();
  Tensor out = Tensor::zeros({ids.size(), d});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= rows)
      throw std::out_of_range("gather_rows: row " + std::to_string(ids[i]) +
                              " outside table of " + std::to_string(rows));
    std::copy_n(&tv.values[ids[i] * d], d, &out.values[i * d]);
  }
  std::vector<std::size_t> idx(ids.begin(), ids.end());
  const std::size_t it = table.id;
  return g.record(std::move(out), {table},
                  [it, idx = std::move(idx), d](Graph &g, std::size_t s) {
                    const auto up = g.grad(s);
                    accumulate(g, it, [&](std::vector<double> &buf) {
                      for (std::size_t i = 0; i < idx.size(); ++i)
                        for (std::size_t j = 0; j < d; ++j)
                          buf[idx[i] * d + j] += up[i * d + j];
                    });
                  });
}

Var row(Var x, std::size_t r) {
  require_rank(x, 2, "row");
  const std::size_t rows = x.shape()[0], d = x.shape()[1];
  if (r >= rows)
    throw std::out_of_range("row: index " + std::to_string(r) +
                            " outside " + shape_string(x.shape()));
  Graph &g = *x.graph;
  const Tensor &xv = x.value();
  Tensor out({d}, std::vector<double>(xv.values.begin() + r * d,
                                      xv.values.begin() + (r + 1) * d));
  const std::size_t ix = x.id;
  return g.record(std::move(out), {x}, [ix, r, d](Graph &g, std::size_t s) {
    const auto up = g.grad(s);
    accumulate(g, ix, [&](std::vector<double> &buf) {
      for (std::size_t j = 0; j < d; ++j)
        buf[r * d + j] += up[j];
    });
  });
}

Var slice(Var x, std::size_t offset, std::size_t length) {
  require_rank(x, 1, "slice");
  if (offset + length > x.shape()[0])
    throw std::out_of_range("slice: [" + std::to_string(offset) + ", " +
                            std::to_string(offset + length) + ") outside " +
                            shape_string(x.shape()));
  Graph &g = *x.graph;
  const Tensor &xv = x.value();
  Tensor out({length},
             std::vector<double>(xv.values.begin() + offset,
                                 xv.values.begin() + offset + length));
  const std::size_t ix = x.id;
  return g.record(std::move(out), {x},
                  [ix, offset, length](Graph &g, std::size_t s) {
                    const auto up = g.grad(s);
                    accumulate(g, ix, [&](std::vector<double> &buf) {
                      for (std::size_t j = 0; j < length; ++j)
                        buf[offset + j] += up[j];
                    });
                  });
}

Var stack(std::span<const Var> rows) {
  if (rows.empty())
    throw ShapeError("stack: no rows");
  for (const Var &r : rows)
    require_rank(r, 1, "stack");
  const std::size_t d = rows[0].shape()[0];
  Graph &g = *rows[0].graph;
  Tensor out = Tensor::zeros({rows.size(), d});
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].shape()[0] != d)
      throw ShapeError("stack: row lengths differ " +
                       shape_string(rows[0].shape()) + " vs " +
                       shape_string(rows[i].shape()));
    std::copy_n(rows[i].value().values.begin(), d, &out.values[i * d]);
    ids.push_back(rows[i].id);
  }
  return g.record(std::move(out), rows,
                  [ids = std::move(ids), d](Graph &g, std::size_t s) {
                    const auto up = g.grad(s);
                    for (std::size_t i = 0; i < ids.size(); ++i)
                      accumulate(g, ids[i], [&](std::vector<double> &buf) {
                        for (std::size_t j = 0; j < d; ++j)
                          buf[j] += up[i * d + j];
                      });
                  });
}

Var mean_rows(Var x) {
  require_rank(x, 2, "mean_rows");
  const std::size_t k = x.shape()[0], d = x.shape()[1];
  if (k == 0)
    throw ShapeError("mean_rows: no rows");
  Graph &g = *x.graph;
  const Tensor &xv = x.value();
  Tensor out = Tensor::zeros({d});
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out[j] += xv[i * d + j];
  for (double &v : out.values)
    v /= static_cast<double>(k);
  const std::size_t ix = x.id;
  return g.record(std::move(out), {x}, [ix, k, d](Graph &g, std::size_t s) {
    const auto up = g.grad(s);
    const double inv = 1.0 / static_cast<double>(k);
    accumulate(g, ix, [&](std::vector<double> &buf) {
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < d; ++j)
          buf[i * d + j] += up[j] * inv;
    });
  });
}

Var scale_rows(Var x, Var weights) {
  require_rank(x, 2, "scale_rows");
  require_rank(weights, 1, "scale_rows");
  const std::size_t k = x.shape()[0], d = x.shape()[1];
  if (weights.shape()[0] != k)
    throw ShapeError("scale_rows: " + shape_string(weights.shape()) +
                     " weights for " + shape_string(x.shape()));
  Graph &g = *x.graph;
  const Tensor &xv = x.value();
  const Tensor &wv = weights.value();
  Tensor out = xv;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out[i * d + j] *= wv[i];
  const std::size_t ix = x.id, iw = weights.id;
  return g.record(std::move(out), {x, weights},
                  [ix, iw, k, d](Graph &g, std::size_t s) {
                    const auto up = g.grad(s);
                    const Tensor &xv = g.value(ix);
                    const Tensor &wv = g.value(iw);
                    accumulate(g, ix, [&](std::vector<double> &buf) {
                      for (std::size_t i = 0; i < k; ++i)
                        for (std::size_t j = 0; j < d; ++j)
                          buf[i * d + j] += up[i * d + j] * wv[i];
                    });
                    accumulate(g, iw, [&](std::vector<double> &buf) {
                      for (std::size_t i = 0; i < k; ++i) {
                        double acc = 0.0;
                        for (std::size_t j = 0; j < d; ++j)
                          acc += up[i * d + j] * xv[i * d + j];
                        buf[i] += acc;
                      }
                    });
                  });
}

Var sum(Var x) {
  Graph &g = *x.graph;
  double total = 0.0;
  for (double v : x.value().values)
    total += v;
  const std::size_t ix = x.id;
  return g.record(Tensor({}, {total}), {x}, [ix](Graph &g, std::size_t s) {
    const double up = g.grad(s)[0];
    accumulate(g, ix, [&](std::vector<double> &buf) {
      for (double &b : buf)
        b += up;
    });
  });
}

Var dot(Var a, Var b) {
  require_same_shape(a, b, "dot");
  return sum(mul(a, b));
}

} // namespace ckgru::ops
