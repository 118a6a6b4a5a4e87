// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "ckgru/preprocess/normalize.hpp"
#include "ckgru/preprocess/types.hpp"

namespace ckgru {

/// Universal POS tagset; ids are indices into kPosTags.
constexpr std::array<std::string_view, 17> kPosTags = {
  "ADJ", "ADP",  "ADV",   "AUX",   "CCONJ", "DET", "INTJ", "NOUN", "NUM",
  "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

/// Coarse dependency labels; ids are indices into kDepTags.
constexpr std::array<std::string_view, 10> kDepTags = {
  "ROOT", "nsubj", "obj", "det", "amod", "advmod", "aux", "case", "cc", "dep"};

constexpr std::size_t kPosTagCount = kPosTags.size();
constexpr std::size_t kDepTagCount = kDepTags.size();

/// Tag id by name; throws std::invalid_argument for unknown names.
int pos_id(std::string_view name);
int dep_id(std::string_view name);

struct Tags {
  std::vector<int> pos;
  std::vector<int> dep;
};

/// Rule-based stub tagger. Deterministic; not meant to be accurate.
Tags stub_tag(const std::vector<std::string> &tokens);

/// Uses the supplied tag columns when present (validated against the token
/// count and tagset sizes), otherwise the stub tagger.
Tags tag(const std::vector<std::string> &tokens,
         const std::vector<int> *pos_ids = nullptr,
         const std::vector<int> *dep_ids = nullptr);

/// Sequential case-insensitive search of each token in the raw text.
/// Sentinels and tokens not found literally are synthetic.
std::vector<TokenSource> locate_tokens(std::string_view raw,
                                       const std::vector<std::string> &tokens);

/// normalize -> tokenize -> tag, with provenance.
TokenSequence prepare_tokens(const RawTweet &raw,
                             const NormalizerResources &resources,
                             std::size_t max_tokens = kDefaultMaxTokens);

} // namespace ckgru
