// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ckgru/preprocess/types.hpp"

namespace ckgru {

/// Sentinel tokens that survive lowercasing and punctuation stripping.
inline constexpr std::string_view kUserToken = "@USER";
inline constexpr std::string_view kUrlToken = "HTTPURL";
inline constexpr std::string_view kEmailToken = "EMAIL";
inline constexpr std::string_view kNumberToken = "NUMBER";
inline constexpr std::string_view kEmptyToken = "EMPTY";

bool is_sentinel(std::string_view token);

/// emoji/emoticon -> replacement phrase. Matching is longest-first.
class EmojiMap {
public:
  EmojiMap() = default;
  explicit EmojiMap(std::vector<std::pair<std::string, std::string>> entries);
  /// TSV `emoji<TAB>replacement phrase`.
  static EmojiMap load(const std::string &path);

  /// Longest entry matching `text` at `pos` under the boundary rule, if any.
  /// Entries that begin (end) with an ASCII alphanumeric only match when the
  /// preceding (following) character is not alphanumeric.
  const std::pair<std::string, std::string> *match(std::string_view text,
                                                   std::size_t pos) const;
  /// Non-overlapping left-to-right match count.
  std::size_t count(std::string_view text) const;
  bool empty() const { return entries_.empty(); }

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// contraction -> expansion, matched case-insensitively on word boundaries.
class ContractionTable {
public:
  ContractionTable() = default;
  explicit ContractionTable(
    std::vector<std::pair<std::string, std::string>> entries);
  static ContractionTable load(const std::string &path);

  const std::vector<std::pair<std::string, std::string>> &entries() const {
    return entries_;
  }

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Unigram word frequencies for hashtag segmentation.
class SegmentDictionary {
public:
  SegmentDictionary() = default;
  explicit SegmentDictionary(std::unordered_map<std::string, double> freqs);
  /// TSV `word<TAB>frequency`.
  static SegmentDictionary load(const std::string &path);

  bool contains(std::string_view word) const;
  /// -log(freq / total) for known words.
  double cost(std::string_view word) const;
  /// Cost of one unknown character; exceeds every known word's cost.
  double unknown_char_cost() const { return unknown_cost_; }
  std::size_t max_word_length() const { return max_len_; }
  bool empty() const { return freqs_.empty(); }

private:
  std::unordered_map<std::string, double> freqs_;
  double log_total_ = 0.0;
  double unknown_cost_ = 30.0;
  std::size_t max_len_ = 0;
};

struct NormalizerResources {
  EmojiMap emoji;
  ContractionTable contractions;
  SegmentDictionary dictionary;

  /// Empty path -> empty resource. Unreadable path -> ResourceError.
  static NormalizerResources load(const std::string &emoji_path,
                                  const std::string &contractions_path,
                                  const std::string &dictionary_path);
};

/// Canonical tweet text. Rules, in order:
///  1 strip a leading "RT @user:"       7 '#tag' -> segmented words
///  2 @mentions -> @USER                8 runs of >2 equal chars -> 2
///  3 URLs -> HTTPURL                   9 lowercase (sentinels kept)
///  4 emails -> EMAIL, digits -> NUMBER 10 strip punctuation (sentinels kept)
///  5 emoji/emoticons -> phrases        11 collapse repeated adjacent words
///  6 expand contractions               12 squeeze whitespace
/// Throws std::invalid_argument for text that is blank after trimming.
std::string normalize(std::string_view text, const NormalizerResources &res);
std::string normalize(const RawTweet &raw, const NormalizerResources &res);

/// Splits a hashtag body ('#' already removed). Camel-case, digit and '_'
/// boundaries split first; each piece is then segmented by unigram DP
/// minimising the summed -log p(word). A piece whose best segmentation
/// needs an unknown character is kept whole. Output is lowercase.
std::vector<std::string> segment_hashtag(std::string_view tag,
                                         const SegmentDictionary &dictionary);

inline constexpr std::size_t kDefaultMaxTokens = 200;

/// Whitespace split capped at `max_tokens`; never empty (falls back to
/// the EMPTY sentinel).
std::vector<std::string> tokenize(std::string_view clean,
                                  std::size_t max_tokens = kDefaultMaxTokens);

} // namespace ckgru
