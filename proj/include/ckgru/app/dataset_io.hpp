// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ckgru/preprocess/types.hpp"

namespace ckgru {

class DatasetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class LabelPolicy { required, optional };

/// Tab-separated dataset with a header row. Columns are matched by name,
/// case-insensitively: id, text and label are required (label may be absent
/// under LabelPolicy::optional); metadata columns use the names of
/// kMetadataColumns (post_date as YYYY-MM-DD or a day count); pos_ids and
/// dep_ids hold comma-separated tag indices. Unknown columns are ignored.
/// In the text column "\t", "\n", "\r" and "\\" are escapes. Empty metadata
/// cells count as absent. Errors name the line and column.
std::vector<RawTweet> parse_dataset(std::string_view contents,
                                    LabelPolicy policy = LabelPolicy::required);
std::vector<RawTweet> ingest_dataset(const std::string &path,
                                     LabelPolicy policy = LabelPolicy::required);

/// Canonical TSV: id, text, label, then the metadata columns any tweet
/// supplies in F1..F17 order, then pos_ids/dep_ids when present.
std::string serialize_dataset(const std::vector<RawTweet> &tweets);

std::string escape_field(std::string_view text);
std::string unescape_field(std::string_view text);

} // namespace ckgru
