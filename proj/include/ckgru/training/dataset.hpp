// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckgru/features/metadata.hpp"
#include "ckgru/features/minmax.hpp"
#include "ckgru/features/vad.hpp"
#include "ckgru/knowledge/concepts.hpp"
#include "ckgru/model/network.hpp"
#include "ckgru/preprocess/normalize.hpp"
#include "ckgru/preprocess/types.hpp"

namespace ckgru {

/// Lexicons and tables shared by every tweet.
struct FeatureResources {
  NormalizerResources normalizer;
  VadLexicon vad;
  ConceptLexicon concepts;
  BingLiuLexicon bing;
};

/// Fold-independent features of one tweet.
struct PreparedTweet {
  std::string id;
  std::string text;
  TokenSequence seq;
  Tensor linguistic;
  Tensor alpha;
  std::vector<double> vad;
  MetadataRecord metadata;
  std::optional<Label> label;
};

struct PrepareOptions {
  std::size_t max_tokens = kDefaultMaxTokens;
  std::size_t pos_size = 17;
  std::size_t dep_size = 10;
  /// Concept width; the lexicon must match unless it is empty.
  std::size_t d_c = 100;
};

/// Normalizes, tags, and extracts VAD, concepts and metadata. Metadata
/// columns F2-F8 absent from the dataset are counted on the raw text.
PreparedTweet prepare_tweet(const RawTweet &raw, const FeatureResources &res,
                            const PrepareOptions &options);
std::vector<PreparedTweet> prepare_all(const std::vector<RawTweet> &raw,
                                       const FeatureResources &res,
                                       const PrepareOptions &options);

enum class NormalizeScope { train_only, global };

/// Metadata matrix (selection columns, raw values) of the given tweets.
FeatureMatrix metadata_matrix(const std::vector<const PreparedTweet *> &tweets,
                              const MetadataSelection &selection);

/// Network input for one tweet under a vocabulary and fitted statistics.
Sample make_sample(const PreparedTweet &tweet, const Vocabulary &vocab,
                   const ModelConfig &config, const MinMaxStats &stats);

} // namespace ckgru
