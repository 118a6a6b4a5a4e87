// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckgru {

/// Extents of a tensor, rank at most kMaxRank, stored inline.
class Shape {
public:
  static constexpr std::size_t kMaxRank = 4;

  Shape() = default;
  Shape(std::initializer_list<std::size_t> dims);
  /// `rank` zero extents.
  explicit Shape(std::size_t rank);

  std::size_t size() const { return rank_; }
  bool empty() const { return rank_ == 0; }
  std::size_t &operator[](std::size_t i) { return dims_[i]; }
  std::size_t operator[](std::size_t i) const { return dims_[i]; }
  std::size_t *begin() { return dims_; }
  std::size_t *end() { return dims_ + rank_; }
  const std::size_t *begin() const { return dims_; }
  const std::size_t *end() const { return dims_ + rank_; }

  friend bool operator==(const Shape &a, const Shape &b) {
    if (a.rank_ != b.rank_)
      return false;
    for (std::size_t i = 0; i < a.rank_; ++i)
      if (a.dims_[i] != b.dims_[i])
        return false;
    return true;
  }

private:
  std::size_t dims_[kMaxRank] = {};
  std::size_t rank_ = 0;
};

std::size_t shape_size(const Shape &shape);
std::string shape_string(const Shape &shape);

class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major tensor of 64-bit reals.
struct Tensor {
  Shape shape;
  std::vector<double> values;

  Tensor() = default;
  Tensor(Shape s, std::vector<double> v);

  static Tensor zeros(Shape s);
  static Tensor filled(Shape s, double value);
  static Tensor vector(std::initializer_list<double> v);
  static Tensor vector(std::vector<double> v);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> v);

  std::size_t size() const { return values.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const;
  std::size_t cols() const;

  double &operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double &at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const {
    return values[r * cols() + c];
  }

  std::span<const double> row(std::size_t r) const;

  bool all_finite() const;
};

} // namespace ckgru
