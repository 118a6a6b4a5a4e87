// SPDX-License-Identifier: Apache-2.0

#include "ckgru/training/metrics.hpp"

#include <stdexcept>
#include <string>

namespace ckgru {

long Metrics::total() const {
  long n = 0;
  for (const auto &row : confusion)
    for (long v : row)
      n += v;
  return n;
}

Metrics metrics_from_confusion(const Confusion &cm) {
  Metrics m;
  m.confusion = cm;
  const long total = m.total();
  long correct = 0;
  for (std::size_t c = 0; c < 3; ++c)
    correct += cm[c][c];
  m.accuracy = total == 0 ? 0.0 : static_cast<double>(correct) /
                                    static_cast<double>(total);
  for (std::size_t c = 0; c < 3; ++c) {
    long predicted = 0, gold = 0;
    for (std::size_t o = 0; o < 3; ++o) {
      predicted += cm[o][c];
      gold += cm[c][o];
    }
    const double tp = static_cast<double>(cm[c][c]);
    m.precision[c] = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
    m.recall[c] = gold == 0 ? 0.0 : tp / static_cast<double>(gold);
    const double pr = m.precision[c] + m.recall[c];
    m.f1[c] = pr == 0.0 ? 0.0 : 2.0 * m.precision[c] * m.recall[c] / pr;

    m.precision_macro += m.precision[c] / 3.0;
    m.recall_macro += m.recall[c] / 3.0;
    m.f1_macro += m.f1[c] / 3.0;
    if (total > 0) {
      const double w = static_cast<double>(gold) / static_cast<double>(total);
      m.precision_weighted += w * m.precision[c];
      m.recall_weighted += w * m.recall[c];
      m.f1_weighted += w * m.f1[c];
    }
  }
  return m;
}

Metrics compute_metrics(std::span<const int> gold, std::span<const int> pred) {
  if (gold.size() != pred.size())
    throw std::invalid_argument("compute_metrics: " +
                                std::to_string(gold.size()) + " gold labels, " +
                                std::to_string(pred.size()) + " predictions");
  Confusion cm{};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] > 2 || pred[i] < 0 || pred[i] > 2)
      throw std::invalid_argument("compute_metrics: label outside 0..2 at " +
                                  std::to_string(i));
    ++cm[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(pred[i])];
  }
  return metrics_from_confusion(cm);
}

Metrics mean_metrics(const std::vector<Metrics> &folds) {
  Metrics m;
  if (folds.empty())
    return m;
  const double n = static_cast<double>(folds.size());
  for (const auto &f : folds) {
    for (std::size_t g = 0; g < 3; ++g) {
      for (std::size_t p = 0; p < 3; ++p)
        m.confusion[g][p] += f.confusion[g][p];
      m.precision[g] += f.precision[g];
      m.recall[g] += f.recall[g];
      m.f1[g] += f.f1[g];
    }
    m.accuracy += f.accuracy;
    m.precision_macro += f.precision_macro;
    m.precision_weighted += f.precision_weighted;
    m.recall_macro += f.recall_macro;
    m.recall_weighted += f.recall_weighted;
    m.f1_macro += f.f1_macro;
    m.f1_weighted += f.f1_weighted;
  }
  for (double *v : {&m.accuracy, &m.precision_macro, &m.precision_weighted,
                    &m.recall_macro, &m.recall_weighted, &m.f1_macro,
                    &m.f1_weighted})
    *v /= n;
  for (std::size_t c = 0; c < 3; ++c) {
    m.precision[c] /= n;
    m.recall[c] /= n;
    m.f1[c] /= n;
  }
  return m;
}

} // namespace ckgru
