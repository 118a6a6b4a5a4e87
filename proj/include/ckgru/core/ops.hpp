// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ckgru/core/graph.hpp"
#include "ckgru/core/rng.hpp"

namespace ckgru::ops {

// Elementwise, operands must have identical shapes.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double factor);
/// 1 - a
Var one_minus(Var a);

Var sigmoid(Var x);
Var tanh_op(Var x);

/// [m x k] . [k x n] -> [m x n]
Var matmul(Var a, Var b);
/// [m x k] . [k] -> [m]
Var matvec(Var w, Var x);
/// [m x k] . [k] + [m] -> [m], one node instead of matvec followed by add.
Var affine(Var w, Var x, Var b);
Var transpose(Var a);

/// Concatenation along `axis`. All parts share rank and every other extent.
Var concat(std::span<const Var> parts, std::size_t axis = 0);
Var concat(std::initializer_list<Var> parts, std::size_t axis = 0);

/// Numerically stable softmax along `axis` (max subtraction).
Var softmax(Var x, std::size_t axis = 0);

/// Mean negative log-likelihood of softmax(logits) over the batch.
/// logits: [batch x classes]; returns a rank-0 tensor.
Var cross_entropy(Var logits, std::span<const int> labels);

/// Inverted dropout. Identity when !training or rate == 0.
Var dropout(Var x, double rate, Rng &rng, bool training);

/// Rows of table[V x d] selected by ids -> [ids.size() x d].
Var gather_rows(Var table, std::span<const std::size_t> ids);
/// Row r of a matrix as a vector.
Var row(Var x, std::size_t r);
/// Contiguous [offset, offset + length) of a vector.
Var slice(Var x, std::size_t offset, std::size_t length);
/// Vectors of equal length stacked into [n x d].
Var stack(std::span<const Var> rows);
/// Column means of [k x d] -> [d].
Var mean_rows(Var x);
/// Row i of x multiplied by weights[i].
Var scale_rows(Var x, Var weights);
/// Sum of all entries -> rank 0.
Var sum(Var x);
Var dot(Var a, Var b);

} // namespace ckgru::ops
