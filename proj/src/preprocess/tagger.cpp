// SPDX-License-Identifier: Apache-2.0

#include "ckgru/preprocess/tagger.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "ckgru/core/text_io.hpp"

namespace ckgru {

namespace {

int find_id(std::string_view name, auto const &table, const char *what) {
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] == name)
      return static_cast<int>(i);
  throw std::invalid_argument(std::string("unknown ") + what + " tag '" +
                              std::string(name) + "'");
}

const std::unordered_map<std::string_view, std::string_view> &lexicon() {
  static const auto *table = [] {
    auto *m = new std::unordered_map<std::string_view, std::string_view>;
    const auto add = [m](std::string_view tag,
                         std::initializer_list<std::string_view> words) {
      for (auto w : words)
        m->emplace(w, tag);
    };
    add("DET", {"a", "an", "the", "this", "that", "these", "those", "every",
                "each", "some", "any", "no", "all", "another"});
    add("PRON", {"i", "you", "he", "she", "it", "we", "they", "me", "him",
                 "her", "us", "them", "my", "your", "his", "its", "our",
                 "their", "mine", "yours", "ours", "theirs", "myself",
                 "yourself", "itself", "themselves", "who", "whom", "what",
                 "someone", "everyone", "nobody", "something", "nothing"});
    add("ADP", {"in", "on", "at", "of", "for", "with", "by", "from", "to",
                "about", "into", "over", "after", "before", "under", "against",
                "during", "without", "through", "between", "via"});
    add("CCONJ", {"and", "or", "but", "nor", "yet", "so"});
    add("SCONJ", {"if", "because", "while", "although", "though", "since",
                  "unless", "whether", "when", "where", "as"});
    add("AUX", {"is", "am", "are", "was", "were", "be", "been", "being",
                "have", "has", "had", "do", "does", "did", "will", "would",
                "shall", "should", "can", "could", "may", "might", "must"});
    add("PART", {"not", "never", "s", "t", "n't"});
    add("INTJ", {"lol", "omg", "wow", "yes", "yeah", "ok", "okay", "oh",
                 "hey", "haha", "ugh", "wtf", "please", "thanks", "yay"});
    add("NUM", {"one", "two", "three", "four", "five", "six", "seven",
                "eight", "nine", "ten", "hundred", "thousand", "million"});
    add("ADV", {"very", "really", "too", "also", "just", "now", "then",
                "here", "there", "still", "already", "again", "soon",
                "even", "only", "always", "ever", "almost", "today"});
    add("ADJ", {"good", "bad", "great", "new", "safe", "sick", "happy",
                "sad", "best", "worst", "better", "worse", "free", "effective",
                "dangerous", "scared", "glad", "proud", "angry", "first"});
    add("VERB", {"get", "got", "go", "went", "take", "took", "make", "made",
                 "say", "said", "know", "knew", "think", "thought", "feel",
                 "felt", "want", "need", "see", "saw", "love", "hate", "like",
                 "trust", "work", "works", "kill", "kills", "give", "gave",
                 "come", "came", "stop", "help", "let", "believe"});
    add("PROPN", {"trump", "biden", "pfizer", "moderna", "astrazeneca",
                  "covid", "fauci", "cdc", "nhs", "fda", "janssen",
                  "america", "uk", "usa", "boris", "johnson"});
    return m;
  }();
  return *table;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() + 1 &&
         w.substr(w.size() - suffix.size()) == suffix;
}

std::string_view pos_name(std::string_view token) {
  if (token == kNumberToken)
    return "NUM";
  if (is_sentinel(token))
    return "SYM";
  if (std::none_of(token.begin(), token.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
               (c >= '0' && c <= '9') || static_cast<unsigned char>(c) >= 0x80;
      }))
    return "PUNCT";
  const std::string w = to_lower_ascii(token);
  if (const auto it = lexicon().find(w); it != lexicon().end())
    return it->second;
  if (static_cast<unsigned char>(w.front()) >= 0x80)
    return "X";
  if (ends_with(w, "ly"))
    return "ADV";
  if (ends_with(w, "ed") || ends_with(w, "ing") || ends_with(w, "ize") ||
      ends_with(w, "ise"))
    return "VERB";
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "less",
                             "ical", "est", "ish"})
    if (ends_with(w, s))
      return "ADJ";
  return "NOUN";
}

void check_range(const std::vector<int> &ids, std::size_t n, std::size_t size,
                 const char *what) {
  if (ids.size() != n)
    throw std::invalid_argument(std::string(what) + " column has " +
                                std::to_string(ids.size()) + " tags for " +
                                std::to_string(n) + " tokens");
  for (int id : ids)
    if (id < 0 || static_cast<std::size_t>(id) >= size)
      throw std::out_of_range(std::string(what) + " tag id " +
                              std::to_string(id) + " outside [0, " +
                              std::to_string(size) + ")");
}

} // namespace

int pos_id(std::string_view name) { return find_id(name, kPosTags, "POS"); }
int dep_id(std::string_view name) {
  return find_id(name, kDepTags, "dependency");
}

Tags stub_tag(const std::vector<std::string> &tokens) {
  Tags out;
  out.pos.reserve(tokens.size());
  for (const auto &t : tokens)
    out.pos.push_back(pos_id(pos_name(t)));

  const int verb = pos_id("VERB");
  const auto root_it = std::find(out.pos.begin(), out.pos.end(), verb);
  const std::size_t root = root_it == out.pos.end()
                             ? tokens.size()
                             : static_cast<std::size_t>(root_it - out.pos.begin());

  out.dep.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string_view d = "dep";
    const std::string_view p = kPosTags[static_cast<std::size_t>(out.pos[i])];
    if (root < tokens.size() && i == root)
      d = "ROOT";
    else if (root < tokens.size() && i + 1 == root)
      d = "nsubj";
    else if (root < tokens.size() && i == root + 1)
      d = "obj";
    else if (p == "DET")
      d = "det";
    else if (p == "ADJ")
      d = "amod";
    else if (p == "ADV")
      d = "advmod";
    else if (p == "AUX")
      d = "aux";
    else if (p == "ADP")
      d = "case";
    else if (p == "CCONJ")
      d = "cc";
    out.dep.push_back(dep_id(d));
  }
  return out;
}

Tags tag(const std::vector<std::string> &tokens, const std::vector<int> *pos_ids,
         const std::vector<int> *dep_ids) {
  if (tokens.empty())
    throw std::invalid_argument("tag: empty token list");
  Tags out = stub_tag(tokens);
  if (pos_ids) {
    check_range(*pos_ids, tokens.size(), kPosTagCount, "POS");
    out.pos = *pos_ids;
  }
  if (dep_ids) {
    check_range(*dep_ids, tokens.size(), kDepTagCount, "dependency");
    out.dep = *dep_ids;
  }
  return out;
}

std::vector<TokenSource> locate_tokens(std::string_view raw,
                                       const std::vector<std::string> &tokens) {
  const std::string hay = to_lower_ascii(raw);
  std::vector<TokenSource> out;
  out.reserve(tokens.size());
  std::size_t cursor = 0;
  for (const auto &t : tokens) {
    if (is_sentinel(t)) {
      out.push_back({});
      continue;
    }
    const std::size_t at = hay.find(to_lower_ascii(t), cursor);
    if (at == std::string::npos) {
      out.push_back({});
      continue;
    }
    out.push_back({at, at + t.size(), false});
    cursor = at + t.size();
  }
  return out;
}

TokenSequence prepare_tokens(const RawTweet &raw,
                             const NormalizerResources &resources,
                             std::size_t max_tokens) {
  TokenSequence seq;
  seq.tokens = tokenize(normalize(raw, resources), max_tokens);
  const auto *pos = raw.pos_ids ? &*raw.pos_ids : nullptr;
  const auto *dep = raw.dep_ids ? &*raw.dep_ids : nullptr;
  Tags tags = tag(seq.tokens, pos, dep);
  seq.pos_tags = std::move(tags.pos);
  seq.dep_tags = std::move(tags.dep);
  seq.provenance = locate_tokens(raw.text, seq.tokens);
  seq.validate();
  return seq;
}

} // namespace ckgru
