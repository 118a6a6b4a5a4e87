// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>

#include "ckgru/core/rng.hpp"
#include "ckgru/core/text_io.hpp"
#include "ckgru/features/linguistic.hpp"
#include "ckgru/features/metadata.hpp"
#include "ckgru/features/minmax.hpp"
#include "ckgru/features/vad.hpp"
#include "ckgru/preprocess/normalize.hpp"

using namespace ckgru;

TEST_CASE("linguistic_onehot") {
  TokenSequence seq;
  seq.tokens = {"a", "b"};
  seq.pos_tags = {0, 2};
  seq.dep_tags = {0, 1};
  const Tensor t = linguistic_onehot(seq, 3, 2);
  REQUIRE(t.shape == Shape{2, 5});
  CHECK(std::vector<double>(t.values.begin(), t.values.begin() + 5) ==
        std::vector<double>{1, 0, 0, 1, 0});
  CHECK(std::vector<double>(t.values.begin() + 5, t.values.end()) ==
        std::vector<double>{0, 0, 1, 0, 1});

  Rng rng(5);
  seq.tokens.assign(40, "w");
  seq.pos_tags.clear();
  seq.dep_tags.clear();
  for (int i = 0; i < 40; ++i) {
    seq.pos_tags.push_back(static_cast<int>(rng.below(17)));
    seq.dep_tags.push_back(static_cast<int>(rng.below(10)));
  }
  const Tensor big = linguistic_onehot(seq, 17, 10);
  for (std::size_t r = 0; r < 40; ++r) {
    double sum = 0.0;
    for (double v : big.row(r))
      sum += v;
    CHECK(sum == 2.0);
  }
  seq.pos_tags[3] = 17;
  CHECK_THROWS_AS(linguistic_onehot(seq, 17, 10), std::out_of_range);
}

TEST_CASE("vad_features worked examples") {
  const VadLexicon lex({{"up", {1, 1, 1}},
                        {"mid", {0.5, 0.5, 0.5}},
                        {"zero", {0, 0, 0}},
                        {"w1", {0.2, 0.4, 0.6}},
                        {"w2", {0.6, 0.4, 0.2}}});
  CHECK(vad_features({"x", "y", "z"}, lex).values == std::vector<double>(9, 0.0));
  CHECK(vad_features({"up", "zero", "mid"}, lex).values ==
        std::vector<double>{1, 1, 1, 0, 0, 0, 0.5, 0.5, 0.5});
  CHECK(vad_part_sizes(4) == std::array<std::size_t, 3>{2, 1, 1});
  const auto f = vad_features({"w1", "w2", "x", "y"}, lex);
  CHECK(f.values[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(f.values[1] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(f.values[2] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(f.schema.front() == "V1");
  CHECK(f.schema.back() == "D3");
  CHECK(vad_features({"up"}, lex).values ==
        std::vector<double>{1, 1, 1, 0, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(VadLexicon({{"bad", {1.5, 0, 0}}}), std::invalid_argument);
}

TEST_CASE("vad parts partition the token list") {
  for (std::size_t k = 0; k < 300; ++k) {
    const auto s = vad_part_sizes(k);
    CHECK(s[0] + s[1] + s[2] == k);
    CHECK(s[0] >= s[1]);
    CHECK(s[1] >= s[2]);
    CHECK(s[0] - s[2] <= 1);
  }
  Rng rng(2);
  std::unordered_map<std::string, VadTriple> entries;
  for (int i = 0; i < 20; ++i)
    entries["w" + std::to_string(i)] = {rng.uniform(), rng.uniform(),
                                        rng.uniform()};
  const VadLexicon lex(entries);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> toks(1 + rng.below(30));
    for (auto &t : toks)
      t = "w" + std::to_string(rng.below(25));
    const auto f = vad_features(toks, lex);
    REQUIRE(f.values.size() == 9);
    for (double v : f.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("metadata selection and extraction") {
  MetadataRecord r;
  r.verified = 1;
  r.post_date = 18600;
  CHECK(extract_metadata(r, MetadataSelection({16})).values ==
        std::vector<double>{1});
  const auto f = extract_metadata(r, MetadataSelection());
  CHECK(f.values.size() == 8);
  CHECK(f.schema.front() == "F1");
  CHECK(f.values.front() == 18600);
  CHECK(MetadataSelection::parse("F1-F8") == MetadataSelection());
  CHECK(MetadataSelection::parse("F16, F3,F3").ids() == std::vector<int>{3, 16});
  CHECK(MetadataSelection::parse("F1-F6,F9,F10,F11").to_string() ==
        "F1-F6,F9-F11");
  CHECK(MetadataSelection::parse("").empty());
  CHECK(MetadataSelection::all().size() == 17);
  CHECK_THROWS_AS(MetadataSelection({18}), std::invalid_argument);
  CHECK_THROWS_AS(MetadataSelection::parse("F0"), std::invalid_argument);
  CHECK_THROWS_AS(MetadataSelection::parse("Fx"), std::invalid_argument);
  // Same selection, same schema order, regardless of spelling.
  CHECK(extract_metadata(r, MetadataSelection::parse("F16,F1")).schema ==
        extract_metadata(r, MetadataSelection::parse("F1,F16")).schema);
}

TEST_CASE("text metadata counts") {
  const BingLiuLexicon bing({"great", "good"}, {"bad", "sick"});
  const EmojiMap emoji({{":(", "sad face"}, {":)", "happy face"}});
  MetadataRecord r;
  compute_text_metadata("great great bad!", emoji, bing, r);
  CHECK(r.positive_word_count == 2);
  CHECK(r.negative_word_count == 1);
  CHECK(r.exclamation_count == 1);

  compute_text_metadata("@a @b hi #x #y #z?? :) :( email a@b.com \"Good,\"",
                        emoji, bing, r);
  CHECK(r.mention_count == 2);
  CHECK(r.hashtag_count == 3);
  CHECK(r.question_count == 2);
  CHECK(r.emoticon_count == 2);
  CHECK(r.positive_word_count == 1);
  CHECK(r.negative_word_count == 0);
}

TEST_CASE("post date parsing") {
  CHECK(parse_post_date("1970-01-01") == 0);
  CHECK(parse_post_date("2021-01-01") == 18628);
  CHECK(parse_post_date("18628") == 18628);
  CHECK_THROWS_AS(parse_post_date("2021-02-30"), std::invalid_argument);
  CHECK_THROWS_AS(parse_post_date("yesterday"), std::invalid_argument);
}

TEST_CASE("metadata validation") {
  MetadataRecord r;
  CHECK_NOTHROW(validate_metadata(r));
  r.verified = 2;
  CHECK_THROWS_AS(validate_metadata(r), std::invalid_argument);
  r.verified = 0;
  r.followers = -1;
  CHECK_THROWS_AS(validate_metadata(r), std::invalid_argument);
}

TEST_CASE("minmax normalization") {
  const auto r = minmax_normalize({{2, 5}, {4, 5}, {6, 5}});
  CHECK(r.normalized == FeatureMatrix{{0, 0}, {0.5, 0}, {1, 0}});
  CHECK(apply_minmax(std::vector<double>{10, 5}, r.stats) ==
        std::vector<double>{1, 0});
  CHECK(apply_minmax(std::vector<double>{-3, 7}, r.stats) ==
        std::vector<double>{0, 0});
  CHECK_THROWS_AS(fit_minmax({}), std::invalid_argument);
  CHECK_THROWS_AS(fit_minmax({{1, 2}, {1}}), std::invalid_argument);

  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    FeatureMatrix m(2 + rng.below(20), std::vector<double>(4));
    for (auto &row : m)
      for (auto &v : row)
        v = rng.uniform(-1000, 1000);
    const auto n = minmax_normalize(m);
    for (const auto &row : n.normalized)
      for (double v : row) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    const auto back = inverse_minmax(n.normalized, n.stats);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t c = 0; c < 4; ++c)
        CHECK(std::abs(back[i][c] - m[i][c]) <= 1e-12 * 1000);
  }
}

TEST_CASE("lexicon files") {
  const std::string dir = "features_test_tmp";
  std::filesystem::create_directories(dir);
  write_file(dir + "/vad.tsv", "Word\tValence\tArousal\tDominance\n"
                               "happy\t1.000\t0.735\t0.772\n");
  write_file(dir + "/pos.txt", "; comment\n\ngood\n");
  write_file(dir + "/neg.txt", "bad\n");
  const auto vad = VadLexicon::load(dir + "/vad.tsv");
  CHECK(vad.size() == 1);
  CHECK(vad.lookup("HAPPY")[1] == 0.735);
  const auto bing = BingLiuLexicon::load(dir + "/pos.txt", dir + "/neg.txt");
  CHECK(bing.is_positive("good"));
  CHECK_FALSE(bing.is_positive("; comment"));
  write_file(dir + "/bad.tsv", "w\t2\t0\t0\n");
  CHECK_THROWS_AS(VadLexicon::load(dir + "/bad.tsv"), ResourceError);
  std::filesystem::remove_all(dir);
}
