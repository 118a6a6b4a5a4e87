// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bitset>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckgru/features/metadata_record.hpp"

namespace ckgru {

enum class Label { positive = 0, negative = 1, neutral = 2 };
constexpr std::size_t kNumClasses = 3;

/// Case-insensitive; nullopt for anything outside the label space.
std::optional<Label> parse_label(std::string_view s);
std::string_view label_name(Label label);

struct RawTweet {
  std::string id;
  std::string text;
  MetadataRecord metadata;
  /// Which metadata columns were supplied by the dataset.
  std::bitset<kMetadataFeatures> metadata_given;
  std::optional<Label> label;
  /// Pre-computed tag columns, when the dataset carries them.
  std::optional<std::vector<int>> pos_ids;
  std::optional<std::vector<int>> dep_ids;
};

/// Byte span of a token in the raw text, or synthetic (e.g. a sentinel or a
/// segmented hashtag piece that has no literal source).
struct TokenSource {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool synthetic = true;

  friend bool operator==(const TokenSource &, const TokenSource &) = default;
};

struct TokenSequence {
  std::vector<std::string> tokens;
  std::vector<int> pos_tags;
  std::vector<int> dep_tags;
  std::vector<TokenSource> provenance;

  std::size_t size() const { return tokens.size(); }
  /// Throws std::logic_error when the parallel lists disagree or a token is
  /// empty / contains whitespace.
  void validate() const;
};

} // namespace ckgru
