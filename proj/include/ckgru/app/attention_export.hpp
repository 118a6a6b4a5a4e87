// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ckgru/model/network.hpp"
#include "ckgru/training/dataset.hpp"

namespace ckgru {

struct AttentionRow {
  std::string id;
  std::size_t position = 0;
  std::string token;
  double weight = 0.0;
};

/// Final-iteration attention weights of every token, evaluation mode.
/// Throws std::invalid_argument when the model has no attention layer.
std::vector<AttentionRow> attention_rows(const Model &model,
                                         const std::vector<PreparedTweet> &tweets,
                                         const MinMaxStats &stats);

/// Header "id position token weight", one row per token.
std::string attention_tsv(const std::vector<AttentionRow> &rows);

/// Standalone page; one block per tweet, one span per token carrying the
/// exact weight in data-weight. Background opacity is the weight min-max
/// scaled within its tweet (1 when all weights are equal).
std::string attention_html(const std::vector<AttentionRow> &rows);

/// Per-tweet opacities in row order, as used by attention_html.
std::vector<double> attention_opacity(const std::vector<AttentionRow> &rows);

} // namespace ckgru
