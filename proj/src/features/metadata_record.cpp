// SPDX-License-Identifier: Apache-2.0

#include "ckgru/features/metadata_record.hpp"

#include <stdexcept>
#include <string>

namespace ckgru {

namespace {

template <typename Record> auto &field_ref(Record &r, std::size_t index) {
  switch (index) {
  case 0: return r.post_date;
  case 1: return r.emoticon_count;
  case 2: return r.hashtag_count;
  case 3: return r.exclamation_count;
  case 4: return r.question_count;
  case 5: return r.mention_count;
  case 6: return r.positive_word_count;
  case 7: return r.negative_word_count;
  case 8: return r.favorite_count;
  case 9: return r.retweet_count;
  case 10: return r.user_favorites;
  case 11: return r.followers;
  case 12: return r.friends;
  case 13: return r.listed_count;
  case 14: return r.statuses;
  case 15: return r.verified;
  case 16: return r.has_profile_image;
  }
  throw std::out_of_range("metadata field index " + std::to_string(index) +
                          " out of range");
}

} // namespace

std::array<std::int64_t, kMetadataFeatures> MetadataRecord::values() const {
  std::array<std::int64_t, kMetadataFeatures> out{};
  for (std::size_t i = 0; i < kMetadataFeatures; ++i)
    out[i] = field(i);
  return out;
}

std::int64_t &MetadataRecord::field(std::size_t index) {
  return field_ref(*this, index);
}

std::int64_t MetadataRecord::field(std::size_t index) const {
  return field_ref(*this, index);
}

} // namespace ckgru
