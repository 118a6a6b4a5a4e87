// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ckgru/core/tensor.hpp"

namespace ckgru {

/// Token -> embedding row. Row 0 is reserved for out-of-vocabulary tokens.
class Vocabulary {
public:
  static constexpr std::string_view kOovToken = "<OOV>";

  Vocabulary();
  /// Rows 1.. in the given order; duplicates and the OOV marker rejected.
  explicit Vocabulary(const std::vector<std::string> &tokens);
  /// Sorted distinct tokens of the given lists.
  static Vocabulary build(const std::vector<std::vector<std::string>> &lists);

  /// 0 for unknown tokens.
  std::size_t id(std::string_view token) const;
  std::vector<std::size_t> ids(const std::vector<std::string> &tokens) const;
  std::size_t size() const { return tokens_.size(); }
  /// All rows including the OOV marker at 0.
  const std::vector<std::string> &tokens() const { return tokens_; }
  /// FNV-1a over the row list.
  std::uint64_t hash() const;

private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct PretrainedEmbeddings {
  Vocabulary vocabulary;
  /// [V x d_w], row 0 (OOV) is zero.
  Tensor table;
};

/// Text file, one `token<TAB>v1<TAB>...` (or space separated) row per line.
PretrainedEmbeddings load_embeddings(const std::string &path);

} // namespace ckgru
