// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace ckgru {

using FeatureMatrix = std::vector<std::vector<double>>;

struct MinMaxStats {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t columns() const { return min.size(); }
};

/// Per-column min and max. Throws std::invalid_argument for zero rows or
/// ragged rows.
MinMaxStats fit_minmax(const FeatureMatrix &rows);

/// (x - min) / (max - min), clamped to [0,1]; constant columns map to 0.
FeatureMatrix apply_minmax(const FeatureMatrix &rows, const MinMaxStats &stats);
std::vector<double> apply_minmax(const std::vector<double> &row,
                                 const MinMaxStats &stats);

/// Inverse of apply_minmax for non-constant columns; constant columns
/// return their min.
FeatureMatrix inverse_minmax(const FeatureMatrix &rows, const MinMaxStats &stats);

struct MinMaxResult {
  FeatureMatrix normalized;
  MinMaxStats stats;
};

MinMaxResult minmax_normalize(const FeatureMatrix &rows);

} // namespace ckgru
