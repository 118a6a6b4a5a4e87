// SPDX-License-Identifier: Apache-2.0

#include "ckgru/core/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>

namespace ckgru {

Shape::Shape(std::initializer_list<std::size_t> dims) {
  if (dims.size() > kMaxRank)
    throw ShapeError("shape: rank " + std::to_string(dims.size()) +
                     " exceeds the maximum of " + std::to_string(kMaxRank));
  for (std::size_t d : dims)
    dims_[rank_++] = d;
}

Shape::Shape(std::size_t rank) : rank_(rank) {
  if (rank > kMaxRank)
    throw ShapeError("shape: rank " + std::to_string(rank) +
                     " exceeds the maximum of " + std::to_string(kMaxRank));
}

std::size_t shape_size(const Shape &shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_string(const Shape &shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i)
      out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape s, std::vector<double> v)
  : shape(std::move(s)), values(std::move(v)) {
  if (shape_size(shape) != values.size())
    throw ShapeError("tensor: shape " + shape_string(shape) + " holds " +
                     std::to_string(shape_size(shape)) + " values, got " +
                     std::to_string(values.size()));
}

Tensor Tensor::zeros(Shape s) { return filled(std::move(s), 0.0); }

Tensor Tensor::filled(Shape s, double value) {
  const std::size_t n = shape_size(s);
  return Tensor(std::move(s), std::vector<double>(n, value));
}

Tensor Tensor::vector(std::initializer_list<double> v) {
  return Tensor({v.size()}, std::vector<double>(v));
}

Tensor Tensor::vector(std::vector<double> v) {
  const std::size_t n = v.size();
  return Tensor({n}, std::move(v));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> v) {
  return Tensor({rows, cols}, std::move(v));
}

std::size_t Tensor::rows() const {
  if (shape.size() != 2)
    throw ShapeError("rows(): expected a matrix, got " + shape_string(shape));
  return shape[0];
}

std::size_t Tensor::cols() const {
  if (shape.size() != 2)
    throw ShapeError("cols(): expected a matrix, got " + shape_string(shape));
  return shape[1];
}

std::span<const double> Tensor::row(std::size_t r) const {
  const std::size_t c = cols();
  return std::span<const double>(values).subspan(r * c, c);
}

bool Tensor::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v))
      return false;
  return true;
}

} // namespace ckgru
