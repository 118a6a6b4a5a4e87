// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "ckgru/core/text_io.hpp"
#include "ckgru/features/linguistic.hpp"
#include "ckgru/features/metadata.hpp"
#include "ckgru/features/minmax.hpp"
#include "ckgru/features/vad.hpp"
#include "ckgru/preprocess/normalize.hpp"

namespace ckgru {

namespace {

bool is_word(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u > 32 && u < 127 && !is_word(c);
}

std::unordered_set<std::string> load_word_list(const std::string &path) {
  std::unordered_set<std::string> out;
  for (const auto &line : read_lines(path)) {
    const auto w = trim(line);
    if (w.empty() || w.front() == ';')
      continue;
    out.insert(to_lower_ascii(w));
  }
  return out;
}

} // namespace

void FeatureVector::validate() const {
  if (values.size() != schema.size())
    throw std::logic_error("feature vector: " + std::to_string(values.size()) +
                           " values for " + std::to_string(schema.size()) +
                           " schema names");
}

Tensor linguistic_onehot(const TokenSequence &seq, std::size_t pos_size,
                         std::size_t dep_size) {
  if (seq.pos_tags.size() != seq.size() || seq.dep_tags.size() != seq.size())
    throw std::invalid_argument("linguistic_onehot: tag lists misaligned");
  const std::size_t width = pos_size + dep_size;
  Tensor out = Tensor::zeros({seq.size(), width});
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const int p = seq.pos_tags[t];
    const int d = seq.dep_tags[t];
    if (p < 0 || static_cast<std::size_t>(p) >= pos_size)
      throw std::out_of_range("POS id " + std::to_string(p) + " outside [0, " +
                              std::to_string(pos_size) + ")");
    if (d < 0 || static_cast<std::size_t>(d) >= dep_size)
      throw std::out_of_range("dependency id " + std::to_string(d) +
                              " outside [0, " + std::to_string(dep_size) + ")");
    out.values[t * width + static_cast<std::size_t>(p)] = 1.0;
    out.values[t * width + pos_size + static_cast<std::size_t>(d)] = 1.0;
  }
  return out;
}

VadLexicon::VadLexicon(std::unordered_map<std::string, VadTriple> entries) {
  for (auto &[word, v] : entries) {
    for (double x : v)
      if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("VAD score for '" + word +
                                    "' outside [0,1]");
    entries_[to_lower_ascii(word)] = v;
  }
}

VadLexicon VadLexicon::load(const std::string &path) {
  std::unordered_map<std::string, VadTriple> entries;
  const auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty())
      continue;
    const auto cols = split(lines[n], '\t');
    const std::string where = "VAD lexicon '" + path + "' line " +
                              std::to_string(n + 1);
    if (cols.size() != 4)
      throw ResourceError(where + ": expected 4 columns");
    // NRC-style header row.
    if (n == 0 && to_lower_ascii(cols[1]) == "valence")
      continue;
    try {
      entries[cols[0]] = {parse_double(cols[1], where),
                          parse_double(cols[2], where),
                          parse_double(cols[3], where)};
    } catch (const std::invalid_argument &e) {
      throw ResourceError(e.what());
    }
  }
  try {
    return VadLexicon(std::move(entries));
  } catch (const std::invalid_argument &e) {
    throw ResourceError("VAD lexicon '" + path + "': " + e.what());
  }
}

VadTriple VadLexicon::lookup(std::string_view word) const {
  const auto it = entries_.find(to_lower_ascii(word));
  return it == entries_.end() ? VadTriple{0.0, 0.0, 0.0} : it->second;
}

std::array<std::size_t, 3> vad_part_sizes(std::size_t k) {
  const std::size_t p1 = (k + 2) / 3;
  const std::size_t p2 = (k - p1 + 1) / 2;
  return {p1, p2, k - p1 - p2};
}

FeatureVector vad_features(const std::vector<std::string> &tokens,
                           const VadLexicon &lexicon) {
  FeatureVector out;
  out.values.assign(kVadFeatures, 0.0);
  for (int part = 1; part <= 3; ++part)
    for (const char *dim : {"V", "A", "D"})
      out.schema.push_back(std::string(dim) + std::to_string(part));

  const auto sizes = vad_part_sizes(tokens.size());
  std::size_t start = 0;
  for (std::size_t part = 0; part < 3; ++part) {
    const std::size_t n = sizes[part];
    for (std::size_t i = start; i < start + n; ++i) {
      const auto v = lexicon.lookup(tokens[i]);
      for (std::size_t d = 0; d < 3; ++d)
        out.values[part * 3 + d] += v[d];
    }
    if (n > 0)
      for (std::size_t d = 0; d < 3; ++d)
        out.values[part * 3 + d] /= static_cast<double>(n);
    start += n;
  }
  return out;
}

MetadataSelection::MetadataSelection() : ids_{1, 2, 3, 4, 5, 6, 7, 8} {}

MetadataSelection::MetadataSelection(std::vector<int> ids) : ids_(std::move(ids)) {
  for (int id : ids_)
    if (id < 1 || id > static_cast<int>(kMetadataFeatures))
      throw std::invalid_argument("unknown metadata feature F" +
                                  std::to_string(id));
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

MetadataSelection MetadataSelection::all() {
  std::vector<int> ids;
  for (int i = 1; i <= static_cast<int>(kMetadataFeatures); ++i)
    ids.push_back(i);
  return MetadataSelection(std::move(ids));
}

MetadataSelection MetadataSelection::parse(std::string_view text) {
  const auto feature = [&](std::string_view s) {
    s = trim(s);
    if (!s.empty() && (s.front() == 'F' || s.front() == 'f'))
      s.remove_prefix(1);
    return static_cast<int>(
      parse_int(s, "metadata selection '" + std::string(text) + "'"));
  };
  std::vector<int> ids;
  if (trim(text).empty())
    return MetadataSelection(ids);
  for (const auto &item : split(text, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      ids.push_back(feature(item));
      continue;
    }
    const int lo = feature(std::string_view(item).substr(0, dash));
    const int hi = feature(std::string_view(item).substr(dash + 1));
    if (lo > hi)
      throw std::invalid_argument("metadata selection: empty range '" + item +
                                  "'");
    for (int i = lo; i <= hi; ++i)
      ids.push_back(i);
  }
  return MetadataSelection(std::move(ids));
}

std::string MetadataSelection::to_string() const {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < ids_.size();) {
    std::size_t j = i;
    while (j + 1 < ids_.size() && ids_[j + 1] == ids_[j] + 1)
      ++j;
    std::string part = "F" + std::to_string(ids_[i]);
    if (j > i)
      part += "-F" + std::to_string(ids_[j]);
    parts.push_back(std::move(part));
    i = j + 1;
  }
  return join(parts, ",");
}

BingLiuLexicon::BingLiuLexicon(std::unordered_set<std::string> positive,
                               std::unordered_set<std::string> negative)
  : positive_(std::move(positive)), negative_(std::move(negative)) {}

BingLiuLexicon BingLiuLexicon::load(const std::string &positive_path,
                                    const std::string &negative_path) {
  return BingLiuLexicon(load_word_list(positive_path),
                        load_word_list(negative_path));
}

bool BingLiuLexicon::is_positive(std::string_view word) const {
  return positive_.count(std::string(word)) != 0;
}
bool BingLiuLexicon::is_negative(std::string_view word) const {
  return negative_.count(std::string(word)) != 0;
}

void compute_text_metadata(std::string_view text, const EmojiMap &emoji,
                           const BingLiuLexicon &bing, MetadataRecord &r) {
  r.emoticon_count = static_cast<std::int64_t>(emoji.count(text));
  r.hashtag_count = r.exclamation_count = r.question_count = 0;
  r.mention_count = r.positive_word_count = r.negative_word_count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool starts_word = i + 1 < text.size() && is_word(text[i + 1]);
    const bool boundary = i == 0 || !is_word(text[i - 1]);
    if (c == '!')
      ++r.exclamation_count;
    else if (c == '?')
      ++r.question_count;
    else if (c == '#' && starts_word && boundary)
      ++r.hashtag_count;
    else if (c == '@' && starts_word && boundary)
      ++r.mention_count;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' ||
                               text[i] == '\n' || text[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < text.size() && !(text[j] == ' ' || text[j] == '\t' ||
                                text[j] == '\n' || text[j] == '\r'))
      ++j;
    std::size_t b = i;
    std::size_t e = j;
    while (b < e && is_ascii_punct(text[b]))
      ++b;
    while (e > b && is_ascii_punct(text[e - 1]))
      --e;
    if (e > b) {
      const std::string w = to_lower_ascii(text.substr(b, e - b));
      if (bing.is_positive(w))
        ++r.positive_word_count;
      if (bing.is_negative(w))
        ++r.negative_word_count;
    }
    i = j;
  }
}

std::int64_t parse_post_date(std::string_view text) {
  const std::string_view s = trim(text);
  const std::string context = "post_date '" + std::string(s) + "'";
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    const auto y = static_cast<int>(parse_int(s.substr(0, 4), context));
    const auto m = static_cast<unsigned>(parse_int(s.substr(5, 2), context));
    const auto d = static_cast<unsigned>(parse_int(s.substr(8, 2), context));
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok())
      throw std::invalid_argument(context + " is not a calendar date");
    return std::chrono::sys_days(ymd).time_since_epoch().count();
  }
  return parse_int(s, context);
}

FeatureVector extract_metadata(const MetadataRecord &record,
                               const MetadataSelection &selection) {
  FeatureVector out;
  for (int id : selection.ids()) {
    out.values.push_back(
      static_cast<double>(record.field(static_cast<std::size_t>(id - 1))));
    out.schema.push_back("F" + std::to_string(id));
  }
  return out;
}

void validate_metadata(const MetadataRecord &record) {
  for (std::size_t i = 1; i < kMetadataFeatures; ++i) {
    const auto v = record.field(i);
    if (v < 0)
      throw std::invalid_argument(std::string(kMetadataColumns[i]) +
                                  " is negative");
    if (i >= 15 && v > 1)
      throw std::invalid_argument(std::string(kMetadataColumns[i]) +
                                  " must be 0 or 1");
  }
}

MinMaxStats fit_minmax(const FeatureMatrix &rows) {
  if (rows.empty())
    throw std::invalid_argument("min-max: no rows to fit");
  MinMaxStats s{rows.front(), rows.front()};
  for (const auto &row : rows) {
    if (row.size() != s.columns())
      throw std::invalid_argument("min-max: ragged rows");
    for (std::size_t c = 0; c < row.size(); ++c) {
      s.min[c] = std::min(s.min[c], row[c]);
      s.max[c] = std::max(s.max[c], row[c]);
    }
  }
  return s;
}

std::vector<double> apply_minmax(const std::vector<double> &row,
                                 const MinMaxStats &stats) {
  if (row.size() != stats.columns())
    throw std::invalid_argument("min-max: row has " + std::to_string(row.size()) +
                                " columns, statistics have " +
                                std::to_string(stats.columns()));
  std::vector<double> out(row.size(), 0.0);
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double range = stats.max[c] - stats.min[c];
    if (range > 0.0)
      out[c] = std::clamp((row[c] - stats.min[c]) / range, 0.0, 1.0);
  }
  return out;
}

FeatureMatrix apply_minmax(const FeatureMatrix &rows, const MinMaxStats &stats) {
  FeatureMatrix out;
  out.reserve(rows.size());
  for (const auto &row : rows)
    out.push_back(apply_minmax(row, stats));
  return out;
}

FeatureMatrix inverse_minmax(const FeatureMatrix &rows, const MinMaxStats &stats) {
  FeatureMatrix out;
  out.reserve(rows.size());
  for (const auto &row : rows) {
    if (row.size() != stats.columns())
      throw std::invalid_argument("min-max: ragged rows");
    std::vector<double> r(row.size());
    for (std::size_t c = 0; c < row.size(); ++c)
      r[c] = stats.min[c] + row[c] * (stats.max[c] - stats.min[c]);
    out.push_back(std::move(r));
  }
  return out;
}

MinMaxResult minmax_normalize(const FeatureMatrix &rows) {
  MinMaxResult r;
  r.stats = fit_minmax(rows);
  r.normalized = apply_minmax(rows, r.stats);
  return r;
}

} // namespace ckgru
