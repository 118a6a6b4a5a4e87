// SPDX-License-Identifier: Apache-2.0

#include "ckgru/knowledge/concepts.hpp"

#include <algorithm>
#include <stdexcept>

#include "ckgru/core/text_io.hpp"

namespace ckgru {

void ConceptLexicon::add(std::string phrase, std::vector<double> vector) {
  if (phrase.empty() ||
      phrase.find_first_of(" \t\r\n") != std::string::npos)
    throw std::invalid_argument("concept phrase '" + phrase +
                                "' is empty or contains whitespace");
  if (std::count(phrase.begin(), phrase.end(), '_') > 2)
    throw std::invalid_argument("concept phrase '" + phrase +
                                "' has more than 3 tokens");
  if (entries_.empty() && dim_ == 0)
    dim_ = vector.size();
  if (vector.size() != dim_)
    throw std::invalid_argument("concept '" + phrase + "' has " +
                                std::to_string(vector.size()) +
                                " values, lexicon dimension is " +
                                std::to_string(dim_));
  entries_[to_lower_ascii(phrase)] = std::move(vector);
}

ConceptLexicon ConceptLexicon::load(const std::string &path) {
  ConceptLexicon lex;
  const auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty())
      continue;
    const auto cols = split(lines[n], '\t');
    const std::string where =
      "concept lexicon '" + path + "' line " + std::to_string(n + 1);
    if (cols.size() < 2)
      throw ResourceError(where + ": expected phrase and at least one value");
    std::vector<double> v;
    v.reserve(cols.size() - 1);
    try {
      for (std::size_t c = 1; c < cols.size(); ++c)
        v.push_back(parse_double(cols[c], where));
      lex.add(cols[0], std::move(v));
    } catch (const std::invalid_argument &e) {
      throw ResourceError(where + ": " + e.what());
    }
  }
  return lex;
}

const std::vector<double> *ConceptLexicon::find(std::string_view phrase) const {
  const auto it = entries_.find(std::string(phrase));
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> ConceptLexicon::phrases() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto &e : entries_)
    out.push_back(e.first);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<ConceptMatch>>
extract_concepts(const std::vector<std::string> &tokens,
                 const ConceptLexicon &lexicon, std::size_t max_ngram) {
  std::vector<std::vector<ConceptMatch>> out(tokens.size());
  if (lexicon.size() == 0)
    return out;
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    std::string phrase;
    for (std::size_t n = 1; n <= max_ngram && start + n <= tokens.size(); ++n) {
      if (n > 1)
        phrase += '_';
      phrase += to_lower_ascii(tokens[start + n - 1]);
      const auto *v = lexicon.find(phrase);
      if (!v)
        continue;
      for (std::size_t t = start; t < start + n; ++t)
        out[t].push_back({phrase, v});
    }
  }
  return out;
}

std::vector<double>
average_candidates(const std::vector<const std::vector<double> *> &candidates,
                   std::size_t dimension) {
  std::vector<double> out(dimension, 0.0);
  if (candidates.empty())
    return out;
  for (const auto *c : candidates)
    if (c->size() != dimension)
      throw std::invalid_argument("concept candidate has " +
                                  std::to_string(c->size()) +
                                  " values, expected " +
                                  std::to_string(dimension));
  auto sorted = candidates;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto *a, const auto *b) { return *a < *b; });
  for (const auto *c : sorted)
    for (std::size_t d = 0; d < dimension; ++d)
      out[d] += (*c)[d];
  const double n = static_cast<double>(candidates.size());
  for (double &v : out)
    v /= n;
  return out;
}

std::vector<double>
average_candidates(const std::vector<std::vector<double>> &candidates,
                   std::size_t dimension) {
  std::vector<const std::vector<double> *> ptrs;
  ptrs.reserve(candidates.size());
  for (const auto &c : candidates)
    ptrs.push_back(&c);
  return average_candidates(ptrs, dimension);
}

ConceptContext build_concept_context(const std::vector<std::string> &tokens,
                                     const ConceptLexicon &lexicon,
                                     std::size_t max_ngram) {
  ConceptContext ctx;
  ctx.candidates = extract_concepts(tokens, lexicon, max_ngram);
  const std::size_t d = lexicon.dimension();
  ctx.alpha = Tensor::zeros({tokens.size(), d});
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    std::vector<const std::vector<double> *> vecs;
    for (const auto &m : ctx.candidates[t])
      vecs.push_back(m.vector);
    const auto a = average_candidates(vecs, d);
    std::copy(a.begin(), a.end(), ctx.alpha.values.begin() +
                                    static_cast<std::ptrdiff_t>(t * d));
  }
  return ctx;
}

} // namespace ckgru
