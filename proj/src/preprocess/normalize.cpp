// SPDX-License-Identifier: Apache-2.0

#include "ckgru/preprocess/normalize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ckgru/core/text_io.hpp"

namespace ckgru {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }
bool is_word(char c) { return is_alnum(c) || c == '_'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u > 32 && u < 127 && !is_alnum(c);
}
char lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80)
    return 1;
  if ((lead >> 5) == 0x6)
    return 2;
  if ((lead >> 4) == 0xE)
    return 3;
  if ((lead >> 3) == 0x1E)
    return 4;
  return 1; // stray continuation byte
}

std::size_t char_length(std::string_view s, std::size_t i) {
  return std::min(utf8_length(static_cast<unsigned char>(s[i])), s.size() - i);
}

constexpr std::array<std::string_view, 10> kUnicodePunct = {
  "‘", "’", "“", "”", "…",
  "–", "—", "«", "»", "¡"};

bool starts_with_ci(std::string_view text, std::size_t pos,
                    std::string_view key) {
  if (pos + key.size() > text.size())
    return false;
  for (std::size_t i = 0; i < key.size(); ++i)
    if (lower(text[pos + i]) != lower(key[i]))
      return false;
  return true;
}

void append_padded(std::string &out, std::string_view token) {
  out += ' ';
  out += token;
  out += ' ';
}

// 1
std::string strip_retweet(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i]))
    ++i;
  if (s.substr(i, 2) != "RT")
    return std::string(s);
  std::size_t j = i + 2;
  if (j >= s.size() || !is_space(s[j]))
    return std::string(s);
  while (j < s.size() && is_space(s[j]))
    ++j;
  if (j >= s.size() || s[j] != '@')
    return std::string(s);
  std::size_t k = j + 1;
  while (k < s.size() && is_word(s[k]))
    ++k;
  if (k == j + 1)
    return std::string(s);
  if (k < s.size() && s[k] == ':')
    ++k;
  return std::string(s.substr(k));
}

// 2
std::string replace_mentions(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '@' && (i == 0 || !is_word(s[i - 1])) && i + 1 < s.size() &&
        is_word(s[i + 1])) {
      std::size_t j = i + 1;
      while (j < s.size() && is_word(s[j]))
        ++j;
      append_padded(out, kUserToken);
      i = j;
      continue;
    }
    out += s[i++];
  }
  return out;
}

// 3
std::string replace_urls(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const bool boundary = i == 0 || !is_word(s[i - 1]);
    if (boundary && (starts_with_ci(s, i, "http://") ||
                     starts_with_ci(s, i, "https://") ||
                     starts_with_ci(s, i, "www."))) {
      std::size_t j = i;
      while (j < s.size() && !is_space(s[j]))
        ++j;
      append_padded(out, kUrlToken);
      i = j;
      continue;
    }
    out += s[i++];
  }
  return out;
}

bool is_email_local(char c) {
  return is_word(c) || c == '.' || c == '+' || c == '-';
}
bool is_email_domain(char c) { return is_alnum(c) || c == '.' || c == '-'; }

// 4a
std::string replace_emails(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  std::size_t verbatim_from = 0; // out ends with s[verbatim_from, i)
  while (i < s.size()) {
    if (s[i] == '@' && i > verbatim_from && is_email_local(s[i - 1])) {
      std::size_t left = i;
      while (left > verbatim_from && is_email_local(s[left - 1]))
        --left;
      std::size_t right = i + 1;
      while (right < s.size() && is_email_domain(s[right]))
        ++right;
      while (right > i + 1 && s[right - 1] == '.')
        --right;
      const std::string_view domain = s.substr(i + 1, right - i - 1);
      const std::size_t dot = domain.find('.');
      if (dot != std::string_view::npos && dot > 0 &&
          dot + 1 < domain.size()) {
        out.resize(out.size() - (i - left));
        append_padded(out, kEmailToken);
        i = right;
        verbatim_from = i;
        continue;
      }
    }
    out += s[i++];
  }
  return out;
}

// 4b
std::string replace_digits(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_digit(s[i])) {
      while (i < s.size() && is_digit(s[i]))
        ++i;
      append_padded(out, kNumberToken);
      continue;
    }
    out += s[i++];
  }
  return out;
}

// 5
std::string replace_emoji(std::string_view s, const EmojiMap &map) {
  if (map.empty())
    return std::string(s);
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (const auto *m = map.match(s, i)) {
      append_padded(out, m->second);
      i += m->first.size();
      continue;
    }
    const std::size_t len = char_length(s, i);
    out.append(s.substr(i, len));
    i += len;
  }
  return out;
}

// 6
std::string expand_contractions(std::string_view s,
                                const ContractionTable &table) {
  std::string text;
  // Typographic apostrophes count as ASCII ones for matching.
  for (std::size_t i = 0; i < s.size();) {
    if (s.substr(i, 3) == "’") {
      text += '\'';
      i += 3;
    } else {
      text += s[i++];
    }
  }
  if (table.entries().empty())
    return text;
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const bool boundary =
      i == 0 || !(is_alnum(text[i - 1]) || text[i - 1] == '\'');
    if (boundary) {
      bool replaced = false;
      for (const auto &[key, expansion] : table.entries()) {
        if (!starts_with_ci(text, i, key))
          continue;
        const std::size_t end = i + key.size();
        if (end < text.size() && (is_alnum(text[end]) || text[end] == '\''))
          continue;
        out += expansion;
        i = end;
        replaced = true;
        break;
      }
      if (replaced)
        continue;
    }
    out += text[i++];
  }
  return out;
}

// 7
std::string expand_hashtags(std::string_view s, const SegmentDictionary &dict) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '#' && i + 1 < s.size() && is_word(s[i + 1])) {
      std::size_t j = i + 1;
      while (j < s.size() && is_word(s[j]))
        ++j;
      const auto words = segment_hashtag(s.substr(i + 1, j - i - 1), dict);
      append_padded(out, join(words, " "));
      i = j;
      continue;
    }
    out += s[i++];
  }
  return out;
}

// 8. Runs compare ASCII case-insensitively so that lowercasing afterwards
// cannot create a fresh run of three.
std::string collapse_elongation(std::string_view s) {
  std::string out;
  std::string_view prev;
  std::size_t run = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t len = char_length(s, i);
    const std::string_view ch = s.substr(i, len);
    const bool same =
      !prev.empty() && prev.size() == ch.size() &&
      (len == 1 ? lower(prev[0]) == lower(ch[0]) : prev == ch);
    run = same ? run + 1 : 1;
    if (run <= 2)
      out.append(ch);
    prev = ch;
    i += len;
  }
  return out;
}

template <typename F> std::string map_chunks(std::string_view s, F &&f) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_space(s[i])) {
      out += s[i++];
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j]))
      ++j;
    out += f(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// 9
std::string lowercase_text(std::string_view s) {
  return map_chunks(s, [](std::string_view chunk) {
    return is_sentinel(chunk) ? std::string(chunk) : to_lower_ascii(chunk);
  });
}

// 10
std::string strip_punctuation(std::string_view s) {
  return map_chunks(s, [](std::string_view chunk) {
    if (is_sentinel(chunk))
      return std::string(chunk);
    std::string out;
    std::size_t i = 0;
    while (i < chunk.size()) {
      if (is_ascii_punct(chunk[i])) {
        out += ' ';
        ++i;
        continue;
      }
      bool unicode = false;
      for (std::string_view p : kUnicodePunct)
        if (chunk.substr(i, p.size()) == p) {
          out += ' ';
          i += p.size();
          unicode = true;
          break;
        }
      if (!unicode)
        out += chunk[i++];
    }
    return out;
  });
}

// 11 + 12
std::string collapse_words(std::string_view s) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i]))
      ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j]))
      ++j;
    if (j > i) {
      std::string w(s.substr(i, j - i));
      if (words.empty() || words.back() != w)
        words.push_back(std::move(w));
    }
    i = j;
  }
  return join(words, " ");
}

std::vector<std::pair<std::string, std::string>>
load_pairs(const std::string &path, const char *what) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty())
      continue;
    const std::size_t tab = lines[n].find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ResourceError(std::string(what) + " '" + path + "' line " +
                          std::to_string(n + 1) + ": expected key<TAB>value");
    out.emplace_back(lines[n].substr(0, tab),
                     std::string(trim(lines[n].substr(tab + 1))));
  }
  return out;
}

void sort_longest_first(std::vector<std::pair<std::string, std::string>> &v) {
  std::stable_sort(v.begin(), v.end(), [](const auto &a, const auto &b) {
    if (a.first.size() != b.first.size())
      return a.first.size() > b.first.size();
    return a.first < b.first;
  });
}

} // namespace

bool is_sentinel(std::string_view token) {
  return token == kUserToken || token == kUrlToken || token == kEmailToken ||
         token == kNumberToken || token == kEmptyToken;
}

EmojiMap::EmojiMap(std::vector<std::pair<std::string, std::string>> entries)
  : entries_(std::move(entries)) {
  std::erase_if(entries_, [](const auto &e) { return e.first.empty(); });
  for (auto &e : entries_)
    e.second = to_lower_ascii(e.second);
  sort_longest_first(entries_);
}

EmojiMap EmojiMap::load(const std::string &path) {
  return EmojiMap(load_pairs(path, "emoji map"));
}

const std::pair<std::string, std::string> *
EmojiMap::match(std::string_view text, std::size_t pos) const {
  for (const auto &e : entries_) {
    const std::string_view key = e.first;
    if (text.compare(pos, key.size(), key) != 0)
      continue;
    if (is_alnum(key.front()) && pos > 0 && is_alnum(text[pos - 1]))
      continue;
    const std::size_t end = pos + key.size();
    if (is_alnum(key.back()) && end < text.size() && is_alnum(text[end]))
      continue;
    return &e;
  }
  return nullptr;
}

std::size_t EmojiMap::count(std::string_view text) const {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (const auto *m = match(text, i)) {
      ++n;
      i += m->first.size();
    } else {
      i += char_length(text, i);
    }
  }
  return n;
}

ContractionTable::ContractionTable(
  std::vector<std::pair<std::string, std::string>> entries)
  : entries_(std::move(entries)) {
  for (auto &e : entries_) {
    e.first = to_lower_ascii(e.first);
    e.second = to_lower_ascii(e.second);
  }
  std::erase_if(entries_, [](const auto &e) { return e.first.empty(); });
  sort_longest_first(entries_);
}

ContractionTable ContractionTable::load(const std::string &path) {
  return ContractionTable(load_pairs(path, "contraction table"));
}

SegmentDictionary::SegmentDictionary(
  std::unordered_map<std::string, double> freqs) {
  double total = 0.0;
  for (auto &[word, f] : freqs) {
    if (word.empty() || !(f > 0.0))
      continue;
    const std::string w = to_lower_ascii(word);
    freqs_[w] += f;
    total += f;
    max_len_ = std::max(max_len_, w.size());
  }
  if (total > 0.0) {
    log_total_ = std::log(total);
    unknown_cost_ = log_total_ + 10.0;
  }
}

SegmentDictionary SegmentDictionary::load(const std::string &path) {
  std::unordered_map<std::string, double> freqs;
  for (const auto &[word, freq] : load_pairs(path, "segmentation dictionary"))
    freqs[word] += parse_double(freq, "segmentation dictionary '" + path + "'");
  return SegmentDictionary(std::move(freqs));
}

bool SegmentDictionary::contains(std::string_view word) const {
  return freqs_.count(std::string(word)) != 0;
}

double SegmentDictionary::cost(std::string_view word) const {
  const auto it = freqs_.find(std::string(word));
  if (it == freqs_.end())
    return std::numeric_limits<double>::infinity();
  return log_total_ - std::log(it->second);
}

NormalizerResources NormalizerResources::load(
  const std::string &emoji_path, const std::string &contractions_path,
  const std::string &dictionary_path) {
  NormalizerResources res;
  if (!emoji_path.empty())
    res.emoji = EmojiMap::load(emoji_path);
  if (!contractions_path.empty())
    res.contractions = ContractionTable::load(contractions_path);
  if (!dictionary_path.empty())
    res.dictionary = SegmentDictionary::load(dictionary_path);
  return res;
}

std::string normalize(std::string_view text, const NormalizerResources &res) {
  if (trim(text).empty())
    throw std::invalid_argument("normalize: tweet text is empty");
  std::string s = strip_retweet(text);
  s = replace_mentions(s);
  s = replace_urls(s);
  s = replace_emails(s);
  s = replace_digits(s);
  s = replace_emoji(s, res.emoji);
  s = expand_contractions(s, res.contractions);
  s = expand_hashtags(s, res.dictionary);
  s = collapse_elongation(s);
  s = lowercase_text(s);
  s = strip_punctuation(s);
  return collapse_words(s);
}

std::string normalize(const RawTweet &raw, const NormalizerResources &res) {
  try {
    return normalize(raw.text, res);
  } catch (const std::invalid_argument &e) {
    throw std::invalid_argument(std::string(e.what()) + " (tweet '" + raw.id +
                                "')");
  }
}

namespace {

std::vector<std::string> split_hashtag_pieces(std::string_view tag) {
  std::vector<std::string> pieces;
  std::string cur;
  const auto flush = [&] {
    if (!cur.empty())
      pieces.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < tag.size(); ++i) {
    const char c = tag[i];
    if (c == '_') {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const char p = cur.back();
      const bool lower_to_upper = is_lower(p) && is_upper(c);
      const bool acronym_end = is_upper(p) && is_upper(c) &&
                               i + 1 < tag.size() && is_lower(tag[i + 1]);
      const bool digit_switch = is_digit(p) != is_digit(c);
      if (lower_to_upper || acronym_end || digit_switch)
        flush();
    }
    cur += c;
  }
  flush();
  return pieces;
}

// Unigram Viterbi over one lowercase piece. Ties keep the earliest split.
std::vector<std::string> segment_piece(const std::string &piece,
                                       const SegmentDictionary &dict) {
  if (dict.empty() || dict.contains(piece))
    return {piece};
  const std::size_t n = piece.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, inf);
  std::vector<std::size_t> back(n + 1, 0);
  std::vector<bool> unknown(n + 1, false);
  best[0] = 0.0;
  const std::size_t max_len = std::max<std::size_t>(dict.max_word_length(), 1);
  for (std::size_t end = 1; end <= n; ++end) {
    const std::size_t lo = end > max_len ? end - max_len : 0;
    for (std::size_t start = lo; start < end; ++start) {
      if (best[start] == inf)
        continue;
      const std::string_view w(piece.data() + start, end - start);
      double c = dict.cost(w);
      bool unk = false;
      if (c == inf && end - start == 1) {
        c = dict.unknown_char_cost();
        unk = true;
      }
      if (c == inf)
        continue;
      if (best[start] + c < best[end]) {
        best[end] = best[start] + c;
        back[end] = start;
        unknown[end] = unk;
      }
    }
  }
  std::vector<std::string> words;
  for (std::size_t end = n; end > 0; end = back[end]) {
    if (unknown[end])
      return {piece};
    words.emplace_back(piece.substr(back[end], end - back[end]));
  }
  std::reverse(words.begin(), words.end());
  return words;
}

} // namespace

std::vector<std::string> segment_hashtag(std::string_view tag,
                                         const SegmentDictionary &dictionary) {
  std::vector<std::string> out;
  for (const std::string &piece : split_hashtag_pieces(tag))
    for (auto &w : segment_piece(to_lower_ascii(piece), dictionary))
      out.push_back(std::move(w));
  if (out.empty())
    out.push_back(to_lower_ascii(tag));
  return out;
}

std::vector<std::string> tokenize(std::string_view clean,
                                  std::size_t max_tokens) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < clean.size() && tokens.size() < max_tokens) {
    while (i < clean.size() && is_space(clean[i]))
      ++i;
    std::size_t j = i;
    while (j < clean.size() && !is_space(clean[j]))
      ++j;
    if (j > i)
      tokens.emplace_back(clean.substr(i, j - i));
    i = j;
  }
  if (tokens.empty())
    tokens.emplace_back(kEmptyToken);
  return tokens;
}

} // namespace ckgru
