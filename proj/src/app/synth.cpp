// SPDX-License-Identifier: Apache-2.0

#include "ckgru/app/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <stdexcept>

#include "ckgru/app/dataset_io.hpp"
#include "ckgru/core/rng.hpp"
#include "ckgru/core/text_io.hpp"

namespace ckgru {

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

// Consonant-vowel syllables never produce a run of three equal letters and
// contain nothing the normalizer rewrites.
class WordMaker {
public:
  explicit WordMaker(Rng &rng) : rng_(rng) {}

  std::string make(std::size_t syllables) {
    for (;;) {
      std::string w;
      for (std::size_t s = 0; s < syllables; ++s) {
        w += kConsonants[rng_.below(kConsonants.size())];
        w += kVowels[rng_.below(kVowels.size())];
      }
      if (used_.insert(w).second)
        return w;
    }
  }
  void reserve(const std::string &w) { used_.insert(w); }

private:
  Rng &rng_;
  std::set<std::string> used_;
};

std::vector<Label> balanced_labels(std::size_t n, Rng &rng) {
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i)
    labels[i] = static_cast<Label>(i % kNumClasses);
  rng.shuffle(labels);
  return labels;
}

std::vector<double> random_vector(std::size_t d, double sd, Rng &rng) {
  std::vector<double> v(d);
  for (auto &x : v)
    x = sd * rng.normal();
  return v;
}

std::string make_id(std::size_t i) {
  std::string s = std::to_string(i + 1);
  return "s" + std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
}

// Filler words plus `inserted` at random positions.
std::string compose(std::vector<std::string> words,
                    const std::vector<std::string> &inserted, Rng &rng) {
  for (const auto &w : inserted)
    words.insert(words.begin() + rng.below(static_cast<std::uint32_t>(words.size() + 1)),
                 w);
  return join(words, " ");
}

std::vector<std::string> filler_words(const std::vector<std::string> &vocab,
                                      std::size_t lo, std::size_t hi, Rng &rng) {
  const std::size_t len = lo + rng.below(static_cast<std::uint32_t>(hi - lo + 1));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < len; ++i) {
    std::string w;
    // No immediate repeats; the normalizer would merge them.
    do
      w = vocab[rng.below(static_cast<std::uint32_t>(vocab.size()))];
    while (!out.empty() && out.back() == w);
    out.push_back(std::move(w));
  }
  return out;
}

// Orthonormal rows scaled to norm sqrt(d).
std::vector<std::vector<double>> prototypes(std::size_t d, Rng &rng) {
  std::vector<std::vector<double>> p;
  while (p.size() < kNumClasses) {
    auto v = random_vector(d, 1.0, rng);
    for (const auto &q : p) {
      double dot = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        dot += v[i] * q[i];
      for (std::size_t i = 0; i < d; ++i)
        v[i] -= dot * q[i];
    }
    double norm = 0.0;
    for (double x : v)
      norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-6)
      continue;
    for (auto &x : v)
      x /= norm;
    p.push_back(std::move(v));
  }
  for (auto &v : p)
    for (auto &x : v)
      x *= std::sqrt(static_cast<double>(d));
  return p;
}

} // namespace

ConceptLexicon SynthData::lexicon(std::size_t d_c) const {
  ConceptLexicon lex(d_c);
  for (const auto &[phrase, v] : concepts)
    lex.add(phrase, v);
  return lex;
}

Label concept_task_label(const std::vector<const std::vector<double> *> &planted,
                         const std::vector<std::vector<double>> &protos) {
  const auto mean = average_candidates(planted, protos.at(0).size());
  std::size_t best = 0;
  double best_score = -INFINITY;
  for (std::size_t c = 0; c < protos.size(); ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i)
      s += mean[i] * protos[c][i];
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return static_cast<Label>(best);
}

SynthData synthesize(const SynthOptions &opt) {
  if (opt.n < kNumClasses)
    throw std::invalid_argument("synth: n must be at least 3");
  if (opt.d_c == 0)
    throw std::invalid_argument("synth: d_c must be positive");
  Rng rng(opt.seed, 0x5851f42d4c957f2dULL);
  WordMaker words(rng);
  SynthData data;

  const std::vector<std::vector<std::string>> keywords = {
    {"lovely", "superb", "joyful"},
    {"awful", "dreadful", "horrid"},
    {"report", "notice", "memo"}};
  for (const auto &ks : keywords)
    for (const auto &k : ks)
      words.reserve(k);
  std::vector<std::string> filler;
  for (std::size_t i = 0; i < 30; ++i)
    filler.push_back(words.make(2));

  if (opt.kind == "separable") {
    data.keywords = keywords;
    for (const auto &ks : data.keywords)
      for (const auto &k : ks)
        data.concepts.emplace_back(k, random_vector(opt.d_c, 1.0, rng));
    for (std::size_t i = 0; i < 10; ++i)
      data.concepts.emplace_back(filler[i], random_vector(opt.d_c, 1.0, rng));
    const auto labels = balanced_labels(opt.n, rng);
    for (std::size_t i = 0; i < opt.n; ++i) {
      const auto &ks = data.keywords[static_cast<std::size_t>(labels[i])];
      RawTweet t;
      t.id = make_id(i);
      t.label = labels[i];
      t.text = compose(filler_words(filler, 3, 7, rng),
                       {ks[rng.below(static_cast<std::uint32_t>(ks.size()))]},
                       rng);
      data.tweets.push_back(std::move(t));
    }
  } else if (opt.kind == "concept_task") {
    if (opt.d_c < kNumClasses)
      throw std::invalid_argument("synth: concept_task needs d_c >= 3");
    data.prototypes = prototypes(opt.d_c, rng);
    const auto classes = balanced_labels(opt.n, rng);
    for (std::size_t i = 0; i < opt.n; ++i) {
      const auto &proto = data.prototypes[static_cast<std::size_t>(classes[i])];
      std::vector<std::string> planted;
      std::vector<std::vector<double>> vecs;
      for (int j = 0; j < 2; ++j) {
        planted.push_back(words.make(3));
        auto v = random_vector(opt.d_c, opt.noise, rng);
        for (std::size_t d = 0; d < opt.d_c; ++d)
          v[d] += proto[d];
        vecs.push_back(v);
        data.concepts.emplace_back(planted.back(), std::move(v));
      }
      RawTweet t;
      t.id = make_id(i);
      t.label = concept_task_label({&vecs[0], &vecs[1]}, data.prototypes);
      t.text = compose(filler_words(filler, 4, 8, rng), planted, rng);
      data.planted.push_back(std::move(planted));
      data.tweets.push_back(std::move(t));
    }
  } else if (opt.kind == "noise") {
    for (std::size_t i = 0; i < 10; ++i)
      data.concepts.emplace_back(filler[i], random_vector(opt.d_c, 1.0, rng));
    for (std::size_t i = 0; i < opt.n; ++i) {
      RawTweet t;
      t.id = make_id(i);
      t.label = static_cast<Label>(rng.below(kNumClasses));
      t.text = join(filler_words(filler, 3, 8, rng), " ");
      data.tweets.push_back(std::move(t));
    }
  } else {
    throw std::invalid_argument("synth: unknown kind '" + opt.kind +
                                "' (expected separable, concept_task or noise)");
  }
  std::sort(data.concepts.begin(), data.concepts.end());
  return data;
}

void write_synth(const std::string &dir, const SynthData &data,
                 const SynthOptions &opt, RunConfig base) {
  std::filesystem::create_directories(dir);
  const auto path = [&](const char *name) {
    return (std::filesystem::path(dir) / name).string();
  };
  write_file(path("dataset.tsv"), serialize_dataset(data.tweets));
  std::string lex;
  for (const auto &[phrase, v] : data.concepts) {
    lex += phrase;
    for (double x : v)
      lex += '\t' + format_double(x);
    lex += '\n';
  }
  write_file(path("concepts.tsv"), lex);
  base.dataset = "dataset.tsv";
  base.resources.concept_lexicon = "concepts.tsv";
  base.model.d_c = opt.d_c;
  write_file(path("run.conf"), serialize_config(base));
}

} // namespace ckgru
