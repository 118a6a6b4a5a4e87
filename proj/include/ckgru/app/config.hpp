// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ckgru/training/trainer.hpp"

namespace ckgru {

struct ResourcePaths {
  std::string emoji_map;
  std::string contractions;
  std::string segmentation_dict;
  std::string vad_lexicon;
  std::string concept_lexicon;
  std::string bing_positive;
  std::string bing_negative;
  std::string embeddings;

  friend bool operator==(const ResourcePaths &, const ResourcePaths &) = default;
};

/// Every knob of a run. Text form: `key = value` lines grouped under
/// [model], [train], [resources] and [data]; '#' starts a comment line.
struct RunConfig {
  ModelConfig model;
  std::size_t max_tokens = kDefaultMaxTokens;

  double lr = 0.005;
  double l2 = 0.005;
  std::size_t epochs = 40;
  std::size_t batch_size = 128;
  std::uint64_t seed = 42;
  std::size_t folds = 10;
  NormalizeScope normalize_scope = NormalizeScope::train_only;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;

  ResourcePaths resources;
  std::string dataset;

  /// Throws std::invalid_argument naming the key that is out of range.
  void validate() const;
  TrainConfig train_config() const;
  ExperimentConfig experiment(const PretrainedEmbeddings *embeddings) const;
  PrepareOptions prepare_options() const;

  friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Parses the text form over the defaults. Unknown sections or keys,
/// malformed lines and out-of-range values throw ConfigError.
RunConfig parse_config(std::string_view text);
/// As parse_config; relative resource and dataset paths are resolved
/// against the directory of `path`.
RunConfig load_config(const std::string &path);
/// Canonical text form with every key present.
std::string serialize_config(const RunConfig &config);

} // namespace ckgru
