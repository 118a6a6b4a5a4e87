// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ckgru/app/config.hpp"
#include "ckgru/app/dataset_io.hpp"
#include "ckgru/core/gradcheck.hpp"
#include "ckgru/training/trainer.hpp"

namespace ckgru {

/// Empty paths give empty resources.
FeatureResources load_resources(const ResourcePaths &paths);

/// Reads and featurizes config.dataset (or `dataset` when non-empty).
std::vector<PreparedTweet> load_prepared(const RunConfig &config,
                                         const FeatureResources &resources,
                                         LabelPolicy policy,
                                         const std::string &dataset = {});

struct TrainedModel {
  std::unique_ptr<Model> model;
  MinMaxStats stats;
  TrainResult history;
};

/// Trains one model on every tweet; initialization and shuffling use
/// config.seed.
TrainedModel train_full(const RunConfig &config,
                        const std::vector<PreparedTweet> &tweets,
                        const PretrainedEmbeddings *embeddings);

/// Finite-difference check of a freshly built model of the given shape on a
/// random batch. Parameters are redrawn uniformly in [-scale, scale] first:
/// at the default initialization some gradients are too small for central
/// differences to resolve.
GradCheckReport model_gradcheck(const ModelConfig &config, std::uint64_t seed,
                                std::size_t tokens = 5, std::size_t batch = 2,
                                double scale = 0.5, double eps = 1e-4);

/// JSON summary of ablation or cross-validation results.
std::string summary_json(const std::vector<VariantResult> &results,
                         const RunConfig &config);

} // namespace ckgru
