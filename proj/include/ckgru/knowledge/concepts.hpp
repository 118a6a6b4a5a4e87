// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ckgru/core/tensor.hpp"

namespace ckgru {

/// Phrase (1-3 tokens joined by '_', lowercase) -> d_c-dimensional vector.
class ConceptLexicon {
public:
  explicit ConceptLexicon(std::size_t dimension = 0) : dim_(dimension) {}
  /// Throws std::invalid_argument on a malformed phrase or wrong vector
  /// length.
  void add(std::string phrase, std::vector<double> vector);
  /// TSV `phrase<TAB>v1<TAB>...<TAB>v_dc`. The dimension comes from the first
  /// row; a file with no rows gives an empty lexicon of dimension 0.
  static ConceptLexicon load(const std::string &path);

  const std::vector<double> *find(std::string_view phrase) const;
  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  /// Phrases in sorted order.
  std::vector<std::string> phrases() const;

private:
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

struct ConceptMatch {
  std::string phrase;
  const std::vector<double> *vector = nullptr;
};

constexpr std::size_t kDefaultMaxNgram = 3;

/// For every position t, every n-gram (n <= max_ngram) covering t whose
/// '_'-joined lowercase form is in the lexicon. Ordered by start, then length.
std::vector<std::vector<ConceptMatch>>
extract_concepts(const std::vector<std::string> &tokens,
                 const ConceptLexicon &lexicon,
                 std::size_t max_ngram = kDefaultMaxNgram);

/// Arithmetic mean; zero vector of length `dimension` when empty. The sum
/// runs over the candidates in lexicographic order, so the result does not
/// depend on the order they are given in. Throws std::invalid_argument on a
/// length mismatch.
std::vector<double>
average_candidates(const std::vector<const std::vector<double> *> &candidates,
                   std::size_t dimension);
std::vector<double>
average_candidates(const std::vector<std::vector<double>> &candidates,
                   std::size_t dimension);

struct ConceptContext {
  std::vector<std::vector<ConceptMatch>> candidates;
  /// k x d_c, row t is alpha_t.
  Tensor alpha;
};

ConceptContext build_concept_context(const std::vector<std::string> &tokens,
                                     const ConceptLexicon &lexicon,
                                     std::size_t max_ngram = kDefaultMaxNgram);

} // namespace ckgru
