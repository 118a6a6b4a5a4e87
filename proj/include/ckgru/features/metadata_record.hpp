// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace ckgru {

constexpr std::size_t kMetadataFeatures = 17;

/// Per-tweet user-behaviour features F1..F17. F1 is the post date in days
/// since the Unix epoch; F16/F17 are 0/1 flags; the rest are counts.
struct MetadataRecord {
  std::int64_t post_date = 0;          // F1
  std::int64_t emoticon_count = 0;     // F2
  std::int64_t hashtag_count = 0;      // F3
  std::int64_t exclamation_count = 0;  // F4
  std::int64_t question_count = 0;     // F5
  std::int64_t mention_count = 0;      // F6
  std::int64_t positive_word_count = 0; // F7
  std::int64_t negative_word_count = 0; // F8
  std::int64_t favorite_count = 0;     // F9
  std::int64_t retweet_count = 0;      // F10
  std::int64_t user_favorites = 0;     // F11
  std::int64_t followers = 0;          // F12
  std::int64_t friends = 0;            // F13
  std::int64_t listed_count = 0;       // F14
  std::int64_t statuses = 0;           // F15
  std::int64_t verified = 0;           // F16
  std::int64_t has_profile_image = 0;  // F17

  std::array<std::int64_t, kMetadataFeatures> values() const;
  std::int64_t &field(std::size_t index);
  std::int64_t field(std::size_t index) const;

  friend bool operator==(const MetadataRecord &, const MetadataRecord &) = default;
};

/// Dataset column names, indexed by feature number - 1.
constexpr std::array<std::string_view, kMetadataFeatures> kMetadataColumns = {
  "post_date",      "emoticon_count",      "hashtag_count",
  "exclamation_count", "question_count",   "mention_count",
  "positive_word_count", "negative_word_count", "favorite_count",
  "retweet_count",  "user_favorites",      "followers",
  "friends",        "listed_count",        "statuses",
  "verified",       "has_profile_image"};

} // namespace ckgru
