// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ckgru/features/feature_vector.hpp"

namespace ckgru {

using VadTriple = std::array<double, 3>;

class VadLexicon {
public:
  VadLexicon() = default;
  /// Throws std::invalid_argument when a score lies outside [0,1].
  explicit VadLexicon(std::unordered_map<std::string, VadTriple> entries);
  /// TSV `word<TAB>valence<TAB>arousal<TAB>dominance`.
  static VadLexicon load(const std::string &path);

  /// Zero triple for absent words. Lookup is ASCII case-insensitive.
  VadTriple lookup(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

private:
  std::unordered_map<std::string, VadTriple> entries_;
};

constexpr std::size_t kVadFeatures = 9;

/// Sizes of the three contiguous parts of a k-token list.
std::array<std::size_t, 3> vad_part_sizes(std::size_t k);

/// [V1,A1,D1,V2,A2,D2,V3,A3,D3], per-part means; empty part -> zeros.
FeatureVector vad_features(const std::vector<std::string> &tokens,
                           const VadLexicon &lexicon);

} // namespace ckgru
