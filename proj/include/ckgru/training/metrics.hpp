// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <vector>

namespace ckgru {

/// confusion[gold][predicted]
using Confusion = std::array<std::array<long, 3>, 3>;

struct Metrics {
  Confusion confusion{};
  double accuracy = 0.0;
  double precision_macro = 0.0, precision_weighted = 0.0;
  double recall_macro = 0.0, recall_weighted = 0.0;
  double f1_macro = 0.0, f1_weighted = 0.0;
  std::array<double, 3> precision{}, recall{}, f1{};

  long total() const;
};

/// Per-class P = TP/(TP+FP), R = TP/(TP+FN), 0/0 -> 0. Weighted averages
/// use gold support.
Metrics metrics_from_confusion(const Confusion &confusion);
/// Throws std::invalid_argument on length mismatch or a label outside 0..2.
Metrics compute_metrics(std::span<const int> gold, std::span<const int> pred);

/// Arithmetic mean of every scalar field; confusion matrices are summed.
Metrics mean_metrics(const std::vector<Metrics> &folds);

} // namespace ckgru
