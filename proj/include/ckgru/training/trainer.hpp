// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ckgru/core/adam.hpp"
#include "ckgru/model/network.hpp"
#include "ckgru/training/dataset.hpp"
#include "ckgru/training/metrics.hpp"

namespace ckgru {

struct TrainConfig {
  double lr = 0.005;
  double l2 = 0.005;
  std::size_t epochs = 40;
  std::size_t batch_size = 128;
  std::uint64_t seed = 42;
  AdamOptions adam;
  /// Called after every epoch with (epoch index, mean loss).
  std::function<void(std::size_t, double)> on_epoch;
};

struct TrainResult {
  /// Mean training loss per epoch.
  std::vector<double> loss_curve;
  /// Batch sizes of one epoch (the same every epoch).
  std::vector<std::size_t> batch_sizes;
};

/// Mini-batch Adam. Samples are reshuffled every epoch; the last partial
/// batch is kept. Throws std::invalid_argument on an empty dataset or an
/// unlabeled sample, std::runtime_error on a non-finite loss.
TrainResult train(Model &model, const std::vector<Sample> &samples,
                  const TrainConfig &config);

/// Evaluation-mode predictions against gold labels.
Metrics evaluate(const Model &model, const std::vector<Sample> &samples);
std::vector<int> predict_all(const Model &model,
                             const std::vector<Sample> &samples);

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  /// Test indices of each fold.
  std::vector<std::vector<std::size_t>> folds;

  /// All indices outside fold i, ascending.
  std::vector<std::size_t> train_indices(std::size_t i) const;
};

/// Seeded shuffle, then contiguous slices; the first n % k folds get one
/// extra item. Throws std::invalid_argument when n < k or k < 2.
FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

struct ExperimentConfig {
  ModelConfig model;
  TrainConfig train;
  std::size_t folds = 10;
  NormalizeScope normalize_scope = NormalizeScope::train_only;
  /// Pretrained embeddings, used frozen when set.
  const PretrainedEmbeddings *embeddings = nullptr;
};

struct FoldData {
  Vocabulary vocabulary;
  MinMaxStats stats;
  std::vector<Sample> train;
  std::vector<Sample> test;
};

/// Vocabulary and metadata statistics from the training indices (or all
/// tweets for the global scope), then samples for both sides.
FoldData build_fold(const std::vector<PreparedTweet> &tweets,
                    const std::vector<std::size_t> &train_idx,
                    const std::vector<std::size_t> &test_idx,
                    const ExperimentConfig &config);

struct CvResult {
  std::vector<Metrics> folds;
  Metrics mean;
};

/// Fresh model per fold, initialized and trained with seed = base + fold.
CvResult cross_validate(const std::vector<PreparedTweet> &tweets,
                        const ExperimentConfig &config);

/// One ablation variant: a name and the switches it applies.
struct Variant {
  std::string name;
  std::vector<std::string> switches;
};

/// Comma-separated list; '+' joins switches inside one variant. Commas
/// inside parentheses do not split. Always starts with the "full" variant.
/// Throws std::invalid_argument for unknown switches.
std::vector<Variant> parse_variants(std::string_view text);
/// Applies the switches of a variant to a copy of the model config.
ModelConfig apply_switches(ModelConfig config,
                           const std::vector<std::string> &switches);

struct VariantResult {
  std::string name;
  CvResult cv;
};

std::vector<VariantResult> ablate(const std::vector<PreparedTweet> &tweets,
                                  const ExperimentConfig &config,
                                  const std::vector<Variant> &variants);

/// variant, fold, accuracy, f1_macro, f1_weighted, precision_macro,
/// precision_weighted, recall_macro, recall_weighted; a "mean" row closes
/// every variant.
std::string metrics_tsv(const std::vector<VariantResult> &results);

} // namespace ckgru
