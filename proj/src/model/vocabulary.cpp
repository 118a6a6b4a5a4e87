// SPDX-License-Identifier: Apache-2.0

#include "ckgru/model/vocabulary.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ckgru/core/text_io.hpp"

namespace ckgru {

Vocabulary::Vocabulary() : tokens_{std::string(kOovToken)} {
  index_.emplace(kOovToken, 0);
}

Vocabulary::Vocabulary(const std::vector<std::string> &tokens) : Vocabulary() {
  for (const auto &t : tokens) {
    if (t.empty() || t == kOovToken)
      throw std::invalid_argument("vocabulary: reserved or empty token '" + t +
                                  "'");
    if (!index_.emplace(t, tokens_.size()).second)
      throw std::invalid_argument("vocabulary: duplicate token '" + t + "'");
    tokens_.push_back(t);
  }
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>> &lists) {
  std::set<std::string> distinct;
  for (const auto &l : lists)
    distinct.insert(l.begin(), l.end());
  distinct.erase(std::string(kOovToken));
  return Vocabulary(std::vector<std::string>(distinct.begin(), distinct.end()));
}

std::size_t Vocabulary::id(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? 0 : it->second;
}

std::vector<std::size_t> Vocabulary::ids(const std::vector<std::string> &tokens) const {
  std::vector<std::size_t> out;
  out.reserve(tokens.size());
  for (const auto &t : tokens)
    out.push_back(id(t));
  return out;
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto &t : tokens_) {
    for (char c : t)
      mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

PretrainedEmbeddings load_embeddings(const std::string &path) {
  std::vector<std::string> tokens;
  std::vector<double> values;
  std::size_t dim = 0;
  const auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string line = lines[n];
    if (trim(line).empty())
      continue;
    std::replace(line.begin(), line.end(), '\t', ' ');
    std::vector<std::string> cols;
    for (auto &c : split(line, ' '))
      if (!c.empty())
        cols.push_back(std::move(c));
    const std::string where =
      "embeddings '" + path + "' line " + std::to_string(n + 1);
    if (cols.size() < 2)
      throw ResourceError(where + ": expected a token and values");
    if (dim == 0)
      dim = cols.size() - 1;
    if (cols.size() - 1 != dim)
      throw ResourceError(where + ": expected " + std::to_string(dim) +
                          " values");
    tokens.push_back(cols[0]);
    try {
      for (std::size_t c = 1; c < cols.size(); ++c)
        values.push_back(parse_double(cols[c], where));
    } catch (const std::invalid_argument &e) {
      throw ResourceError(e.what());
    }
  }
  if (tokens.empty())
    throw ResourceError("embeddings '" + path + "' has no rows");
  PretrainedEmbeddings out;
  try {
    out.vocabulary = Vocabulary(tokens);
  } catch (const std::invalid_argument &e) {
    throw ResourceError("embeddings '" + path + "': " + e.what());
  }
  values.insert(values.begin(), dim, 0.0);
  out.table = Tensor({tokens.size() + 1, dim}, std::move(values));
  return out;
}

} // namespace ckgru
