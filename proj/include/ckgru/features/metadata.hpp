// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ckgru/features/feature_vector.hpp"
#include "ckgru/features/metadata_record.hpp"

namespace ckgru {

class EmojiMap;

/// Sorted, de-duplicated feature ids in 1..17.
class MetadataSelection {
public:
  /// F1-F8.
  MetadataSelection();
  /// Throws std::invalid_argument for ids outside 1..17.
  explicit MetadataSelection(std::vector<int> ids);
  /// Comma list of ids or ranges: "F1-F8", "F1,F3,F16", "1-17"; "" -> empty.
  static MetadataSelection parse(std::string_view text);
  static MetadataSelection all();

  const std::vector<int> &ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  /// Canonical text form, e.g. "F1-F8,F16".
  std::string to_string() const;

  friend bool operator==(const MetadataSelection &,
                         const MetadataSelection &) = default;

private:
  std::vector<int> ids_;
};

class BingLiuLexicon {
public:
  BingLiuLexicon() = default;
  BingLiuLexicon(std::unordered_set<std::string> positive,
                 std::unordered_set<std::string> negative);
  /// One word per line; lines starting with ';' and blank lines are skipped.
  static BingLiuLexicon load(const std::string &positive_path,
                             const std::string &negative_path);

  bool is_positive(std::string_view word) const;
  bool is_negative(std::string_view word) const;

private:
  std::unordered_set<std::string> positive_;
  std::unordered_set<std::string> negative_;
};

/// Fills F2..F8 from raw tweet text: emoticons (emoji map matches), hashtags,
/// '!' and '?' characters, mentions, Bing Liu positive and negative words
/// (whitespace chunks, lowercased, punctuation trimmed from both ends).
void compute_text_metadata(std::string_view raw_text, const EmojiMap &emoji,
                           const BingLiuLexicon &bing, MetadataRecord &record);

/// F1 from "YYYY-MM-DD" or an integer day count since 1970-01-01.
/// Throws std::invalid_argument for anything else.
std::int64_t parse_post_date(std::string_view text);

/// Values in F1..F17 order restricted to the selection; schema "F<n>".
FeatureVector extract_metadata(const MetadataRecord &record,
                               const MetadataSelection &selection);

/// Throws std::invalid_argument when counts are negative or flags not 0/1.
void validate_metadata(const MetadataRecord &record);

} // namespace ckgru
