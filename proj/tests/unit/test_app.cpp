// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <regex>
#include <set>
#include <sstream>

#include "ckgru/app/attention_export.hpp"
#include "ckgru/app/cli.hpp"
#include "ckgru/app/config.hpp"
#include "ckgru/app/dataset_io.hpp"
#include "ckgru/app/model_io.hpp"
#include "ckgru/app/pipeline.hpp"
#include "ckgru/app/synth.hpp"
#include "ckgru/core/text_io.hpp"

using namespace ckgru;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("ckgru_app_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string source(const std::string &rel) {
  return (fs::path(CKGRU_SOURCE_DIR) / rel).string();
}

RunConfig random_config(Rng &rng) {
  RunConfig c;
  c.model.d_w = 1 + rng.below(64);
  c.model.h = 1 + rng.below(64);
  c.model.d_c = rng.below(128);
  c.model.d_red = rng.below(40);
  c.model.d_att = rng.below(20);
  c.model.layers = 1 + rng.below(2);
  c.model.gcm_iterations = 1 + rng.below(3);
  c.model.gcm_residual = rng.below(2);
  c.model.candidate_combine =
    rng.below(2) ? CandidateCombine::sum : CandidateCombine::mean;
  c.model.dropout = rng.uniform(0.0, 0.9);
  c.model.dropout_between_layers = rng.below(2);
  c.model.use_concepts = rng.below(2);
  c.model.use_vad = rng.below(2);
  c.model.use_metadata = rng.below(2);
  c.model.use_attention = rng.below(2);
  c.model.plain_bigru = rng.below(2);
  std::vector<std::size_t> feats;
  for (std::size_t f = 1; f <= kMetadataFeatures; ++f)
    if (rng.below(3) == 0)
      feats.push_back(f);
  if (feats.empty())
    feats.push_back(1 + rng.below(17));
  std::string sel;
  for (std::size_t f : feats)
    sel += (sel.empty() ? "F" : ",F") + std::to_string(f);
  c.model.metadata_selection = MetadataSelection::parse(sel);
  c.max_tokens = 1 + rng.below(500);
  c.lr = rng.uniform(1e-5, 0.1);
  c.l2 = rng.uniform(0.0, 0.01);
  c.epochs = 1 + rng.below(300);
  c.batch_size = 1 + rng.below(256);
  c.seed = (static_cast<std::uint64_t>(rng.next_u32()) << 32) | rng.next_u32();
  c.folds = 2 + rng.below(20);
  c.normalize_scope =
    rng.below(2) ? NormalizeScope::global : NormalizeScope::train_only;
  c.beta1 = rng.uniform(0.0, 0.99);
  c.beta2 = rng.uniform(0.9, 0.9999);
  c.adam_eps = rng.uniform(1e-10, 1e-6);
  c.resources.vad_lexicon = rng.below(2) ? "lex/vad.tsv" : "";
  c.resources.concept_lexicon = "/abs/concepts file.tsv";
  c.dataset = "d" + std::to_string(rng.below(1000)) + ".tsv";
  return c;
}

std::string run(std::vector<std::string> args, int *code,
                std::string *err_text = nullptr) {
  args.insert(args.begin(), "ckgru");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  *code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text)
    *err_text = err.str();
  return out.str();
}

} // namespace

TEST_CASE("config round-trips through its text form") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const RunConfig c = random_config(rng);
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config(text);
    REQUIRE(back == c);
    CHECK(serialize_config(back) == text);
  }
  CHECK(parse_config("") == RunConfig{});
  CHECK(parse_config(serialize_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("config accepts sections, dotted keys and comments") {
  const RunConfig c = parse_config("# comment\n[model]\nh = 12\n  d_w=7\n"
                                   "[train]\nlr = 0.01\nmodel.d_c = 4\n"
                                   "[data]\ndataset = \"my data.tsv\"\n");
  CHECK(c.model.h == 12);
  CHECK(c.model.d_w == 7);
  CHECK(c.model.d_c == 4);
  CHECK(c.lr == 0.01);
  CHECK(c.dataset == "my data.tsv");
}

TEST_CASE("config rejects unknown keys and out-of-range values") {
  CHECK_THROWS_AS(parse_config("[model]\nhidden = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[optim]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nh\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nh = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\ndropout = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[train]\nlr = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[train]\nfolds = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\ncandidate_combine = max\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nuse_vad = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nmetadata_selection = F0\n"), ConfigError);
  try {
    parse_config("[model]\nh = 3\nbogus = 1\n");
    FAIL("expected an error");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("load_config resolves relative paths against the file") {
  const std::string dir = scratch("cfg");
  write_file(dir + "/run.conf",
             "[resources]\nvad_lexicon = lex/vad.tsv\nembeddings = /x/e.txt\n"
             "[data]\ndataset = d.tsv\n");
  const RunConfig c = load_config(dir + "/run.conf");
  CHECK(c.resources.vad_lexicon == (fs::path(dir) / "lex/vad.tsv").string());
  CHECK(c.resources.embeddings == "/x/e.txt");
  CHECK(c.dataset == (fs::path(dir) / "d.tsv").string());
  CHECK(c.resources.emoji_map.empty());
}

TEST_CASE("dataset ingest reads columns by name in any order") {
  const std::string text =
    "Label\tfollowers\tTEXT\tid\tpost_date\tuser\n"
    "Positive\t10\tgood\\tday\t7\t2021-01-02\tx\n"
    "neutral\t\tmeh\t8\t18000\ty\n";
  const auto rows = parse_dataset(text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].id == "7");
  CHECK(rows[0].text == "good\tday");
  CHECK(rows[0].label == Label::positive);
  CHECK(rows[0].metadata.followers == 10);
  CHECK(rows[0].metadata.post_date == 18629);
  CHECK(rows[0].metadata_given.test(0));
  CHECK(rows[0].metadata_given.test(11));
  CHECK_FALSE(rows[1].metadata_given.test(11));
  CHECK(rows[1].metadata.post_date == 18000);
}

TEST_CASE("ingest then re-serialize is semantically stable") {
  const std::string text =
    "text\tid\tlabel\tpos_ids\tdep_ids\thashtag_count\tverified\n"
    "a b\\\\c\tx1\tnegative\t0,1\t2,3\t4\t1\n"
    "line\\nbreak\tx2\tpositive\t\t\t\t0\n";
  const auto rows = parse_dataset(text);
  const std::string canon = serialize_dataset(rows);
  CHECK(canon.substr(0, canon.find('\n')) ==
        "id\ttext\tlabel\thashtag_count\tverified\tpos_ids\tdep_ids");
  const auto again = parse_dataset(canon);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].id == rows[i].id);
    CHECK(again[i].text == rows[i].text);
    CHECK(again[i].label == rows[i].label);
    CHECK(again[i].metadata == rows[i].metadata);
    CHECK(again[i].metadata_given == rows[i].metadata_given);
    CHECK(again[i].pos_ids == rows[i].pos_ids);
    CHECK(again[i].dep_ids == rows[i].dep_ids);
  }
  CHECK(serialize_dataset(again) == canon);
  CHECK(rows[1].text == "line\nbreak");
}

TEST_CASE("dataset errors name the line and column") {
  const auto message = [](const std::string &text, LabelPolicy p) {
    try {
      parse_dataset(text, p);
    } catch (const DatasetError &e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("id\ttext\n", LabelPolicy::required).find("'label'") !=
        std::string::npos);
  const std::string bad_label = message("id\ttext\tlabel\n1\thi\tgreat\n",
                                        LabelPolicy::required);
  CHECK(bad_label.find("line 2") != std::string::npos);
  CHECK(bad_label.find("column 'label'") != std::string::npos);
  CHECK(message("id\ttext\tlabel\n1\thi\n", LabelPolicy::required)
          .find("line 2") != std::string::npos);
  CHECK(message("id\ttext\tlabel\n1\thi\tpositive\n1\tho\tpositive\n",
                LabelPolicy::required)
          .find("duplicate id") != std::string::npos);
  const std::string bad_count =
    message("id\ttext\tlabel\tfollowers\n1\thi\tpositive\t-3\n",
            LabelPolicy::required);
  CHECK(bad_count.find("line 2") != std::string::npos);
  const std::string bad_date =
    message("id\ttext\tlabel\tpost_date\n1\thi\tpositive\t2021-13-01\n",
            LabelPolicy::required);
  CHECK(bad_date.find("column 'post_date'") != std::string::npos);
  CHECK(message("id\ttext\tlabel\n1\thi\t\n", LabelPolicy::required)
          .find("missing label") != std::string::npos);
  CHECK(message("id\ttext\n1\thi\n", LabelPolicy::optional) == "no error");
  CHECK(message("id\ttext\tlabel\n1\t  \tpositive\n", LabelPolicy::required)
          .find("empty text") != std::string::npos);
  CHECK_THROWS_AS(ingest_dataset("/nonexistent/x.tsv"), DatasetError);
}

TEST_CASE("escape_field inverts unescape_field") {
  Rng rng(3);
  const std::string alphabet = "ab\\\t\nrt ";
  for (int i = 0; i < 500; ++i) {
    std::string s;
    for (std::uint32_t j = rng.below(12); j > 0; --j)
      s += alphabet[rng.below(static_cast<std::uint32_t>(alphabet.size()))];
    const std::string e = escape_field(s);
    CHECK(e.find('\t') == std::string::npos);
    CHECK(e.find('\n') == std::string::npos);
    CHECK(unescape_field(e) == s);
  }
}

TEST_CASE("synthetic separable data follows its keyword rule") {
  SynthOptions o;
  o.n = 32;
  o.seed = 3;
  const SynthData d = synthesize(o);
  REQUIRE(d.tweets.size() == 32);
  std::array<int, 3> counts{};
  for (const auto &t : d.tweets) {
    const auto words = split(t.text, ' ');
    int hits = 0;
    std::size_t cls = 0;
    for (std::size_t c = 0; c < 3; ++c)
      for (const auto &k : d.keywords[c])
        if (std::count(words.begin(), words.end(), k)) {
          hits += static_cast<int>(std::count(words.begin(), words.end(), k));
          cls = c;
        }
    REQUIRE(hits == 1);
    CHECK(static_cast<Label>(cls) == *t.label);
    ++counts[cls];
  }
  CHECK(*std::min_element(counts.begin(), counts.end()) >= 10);
}

TEST_CASE("concept_task labels depend only on the planted concepts") {
  SynthOptions o;
  o.kind = "concept_task";
  o.n = 90;
  o.seed = 11;
  o.d_c = 8;
  const SynthData d = synthesize(o);
  const ConceptLexicon lex = d.lexicon(8);
  Rng rng(4);
  std::set<std::string> planted_all;
  for (std::size_t i = 0; i < d.tweets.size(); ++i) {
    const auto &planted = d.planted[i];
    REQUIRE(planted.size() == 2);
    std::vector<const std::vector<double> *> vecs;
    for (const auto &w : planted) {
      CHECK(planted_all.insert(w).second);
      vecs.push_back(lex.find(w));
      REQUIRE(vecs.back() != nullptr);
    }
    CHECK(concept_task_label(vecs, d.prototypes) == *d.tweets[i].label);
    // Shuffling the filler words leaves the planted set, hence the label.
    auto words = split(d.tweets[i].text, ' ');
    rng.shuffle(words);
    std::vector<const std::vector<double> *> found;
    for (const auto &w : words)
      if (const auto *v = lex.find(w))
        found.push_back(v);
    CHECK(concept_task_label(found, d.prototypes) == *d.tweets[i].label);
  }
}

TEST_CASE("synthetic generation is deterministic and validates its options") {
  for (const char *kind : {"separable", "concept_task", "noise"}) {
    SynthOptions o;
    o.kind = kind;
    o.n = 40;
    o.d_c = 6;
    const std::string a = scratch(std::string("synth_a_") + kind);
    const std::string b = scratch(std::string("synth_b_") + kind);
    write_synth(a, synthesize(o), o, RunConfig{});
    write_synth(b, synthesize(o), o, RunConfig{});
    for (const char *f : {"dataset.tsv", "concepts.tsv", "run.conf"})
      CHECK(read_file(a + "/" + f) == read_file(b + "/" + f));
    const RunConfig c = load_config(a + "/run.conf");
    CHECK(c.model.d_c == 6);
    CHECK(ingest_dataset(c.dataset).size() == 40);
    CHECK(ConceptLexicon::load(c.resources.concept_lexicon).dimension() == 6);
  }
  SynthOptions bad;
  bad.kind = "spiral";
  CHECK_THROWS_AS(synthesize(bad), std::invalid_argument);
  bad.kind = "concept_task";
  bad.d_c = 2;
  CHECK_THROWS_AS(synthesize(bad), std::invalid_argument);
}

TEST_CASE("model files round-trip and detect a vocabulary mismatch") {
  SynthOptions so;
  so.n = 12;
  so.d_c = 4;
  const SynthData d = synthesize(so);
  RunConfig c;
  c.model.h = 4;
  c.model.d_w = 4;
  c.model.d_c = 4;
  c.model.d_red = 3;
  c.epochs = 2;
  c.batch_size = 4;
  FeatureResources res;
  res.concepts = d.lexicon(4);
  const auto tweets = prepare_all(d.tweets, res, c.prepare_options());
  const TrainedModel trained = train_full(c, tweets, nullptr);

  const std::string dir = scratch("model");
  save_model(dir + "/m.ckpt", c, *trained.model, trained.stats);
  const SavedModel back = load_model(dir + "/m.ckpt");
  CHECK(back.config == c);
  CHECK(back.model->params() == trained.model->params());
  CHECK(back.model->vocabulary().tokens() == trained.model->vocabulary().tokens());
  CHECK(back.stats.min == trained.stats.min);
  CHECK(back.stats.max == trained.stats.max);
  for (const auto &t : tweets) {
    const Sample s = make_sample(t, back.model->vocabulary(), c.model, back.stats);
    CHECK(back.model->logits(s) == trained.model->logits(s));
  }

  // Rename one vocabulary entry without updating the recorded hash.
  std::string bytes = read_file(dir + "/m.ckpt");
  const std::string word = trained.model->vocabulary().tokens().at(1);
  const auto at = bytes.find("\"" + word + "\"");
  REQUIRE(at != std::string::npos);
  bytes[at + 1] = bytes[at + 1] == 'q' ? 'x' : 'q';
  write_file(dir + "/bad.ckpt", bytes);
  try {
    load_model(dir + "/bad.ckpt");
    FAIL("expected a hash mismatch");
  } catch (const CheckpointError &e) {
    CHECK(std::string(e.what()).find("hash mismatch") != std::string::npos);
  }
  write_file(dir + "/junk.ckpt", "CKMODEL1 5\n{}");
  CHECK_THROWS_AS(load_model(dir + "/junk.ckpt"), CheckpointError);
  CHECK_THROWS_AS(load_model(dir + "/missing.ckpt"), CheckpointError);
}

TEST_CASE("attention export carries exact weights") {
  SynthOptions so;
  so.n = 9;
  so.d_c = 4;
  const SynthData d = synthesize(so);
  RunConfig c;
  c.model.h = 4;
  c.model.d_w = 4;
  c.model.d_c = 4;
  c.epochs = 1;
  FeatureResources res;
  res.concepts = d.lexicon(4);
  const auto tweets = prepare_all(d.tweets, res, c.prepare_options());
  const TrainedModel trained = train_full(c, tweets, nullptr);
  const auto rows = attention_rows(*trained.model, tweets, trained.stats);

  std::size_t expected = 0;
  for (const auto &t : tweets)
    expected += t.seq.size();
  REQUIRE(rows.size() == expected);

  const std::string html = attention_html(rows);
  const std::regex attr("data-weight=\"([^\"]+)\"");
  std::vector<double> parsed;
  for (auto it = std::sregex_iterator(html.begin(), html.end(), attr);
       it != std::sregex_iterator(); ++it)
    parsed.push_back(parse_double((*it)[1].str(), "html"));
  REQUIRE(parsed.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(parsed[i] == rows[i].weight);

  const auto tsv = split(attention_tsv(rows), '\n');
  CHECK(tsv[0] == "id\tposition\ttoken\tweight");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto cols = split(tsv[i + 1], '\t');
    REQUIRE(cols.size() == 4);
    CHECK(parse_double(cols[3], "tsv") == rows[i].weight);
  }

  const auto op = attention_opacity(
    {{"a", 0, "x", 0.25}, {"a", 1, "y", 0.75}, {"a", 2, "z", 0.5}, {"b", 0, "w", 0.5},
     {"b", 1, "v", 0.5}});
  CHECK(op == std::vector<double>{0.0, 1.0, 0.5, 1.0, 1.0});

  RunConfig flat = c;
  flat.model.layers = 1;
  Rng rng(1);
  const Model no_attention(flat.model, trained.model->vocabulary(), rng);
  CHECK_THROWS_AS(attention_rows(no_attention, tweets, trained.stats),
                  std::invalid_argument);
}

TEST_CASE("model_gradcheck passes on a small shape") {
  ModelConfig m;
  m.h = 3;
  m.d_w = 3;
  m.d_c = 2;
  m.d_red = 4;
  const auto r = model_gradcheck(m, 9, 3, 1);
  CHECK(r.coordinates > 0);
  CHECK(r.max_relative_error < 1e-4);
}

TEST_CASE("cli usage and errors") {
  int code = 0;
  std::string err;
  run({}, &code, &err);
  CHECK(code != 0);
  CHECK(err.find("Usage") != std::string::npos);

  run({"frobnicate"}, &code, &err);
  CHECK(code != 0);
  CHECK(err.rfind("ERROR: ", 0) == 0);
  CHECK(std::count(err.begin(), err.end(), '\n') == 1);

  run({"train", "--config", "/nonexistent.conf", "--out", "x"}, &code, &err);
  CHECK(code != 0);
  CHECK(err.rfind("ERROR: ", 0) == 0);
  CHECK(std::count(err.begin(), err.end(), '\n') == 1);

  run({"synth-gen", "--spec", "spiral", "--out", scratch("cli_bad")}, &code, &err);
  CHECK(code != 0);
  CHECK(err.find("unknown kind") != std::string::npos);

  const std::string help = run({"--help"}, &code);
  CHECK(code == 0);
  for (const char *sub : {"preprocess", "train", "evaluate", "cv", "ablate",
                          "predict", "attn-export", "gradcheck", "synth-gen"})
    CHECK(help.find(sub) != std::string::npos);
}

TEST_CASE("cli pipeline from synthetic data to predictions") {
  const std::string dir = scratch("cli");
  int code = 0;
  std::string err;
  run({"synth-gen", "--spec", "separable", "--n", "12", "--seed", "2", "--out", dir},
      &code, &err);
  REQUIRE_MESSAGE(code == 0, err);
  write_file(dir + "/small.conf",
             "[model]\nh = 4\nd_w = 4\nd_c = 100\nd_red = 3\n[train]\nepochs = 3\n"
             "batch_size = 4\nfolds = 3\n[resources]\nconcept_lexicon = concepts.tsv\n"
             "emoji_map = " + source("data/emoji_map.tsv") +
             "\n[data]\ndataset = dataset.tsv\n");
  const std::string conf = dir + "/small.conf";

  run({"preprocess", "--config", conf, "--format", "json", "--out", dir + "/pre.json"},
      &code, &err);
  REQUIRE_MESSAGE(code == 0, err);
  CHECK(read_file(dir + "/pre.json").find("\"tokens\"") != std::string::npos);

  run({"train", "--config", conf, "--out", dir + "/m.ckpt"}, &code, &err);
  REQUIRE_MESSAGE(code == 0, err);
  run({"evaluate", "--checkpoint", dir + "/m.ckpt", "--data", dir + "/dataset.tsv"},
      &code, &err);
  REQUIRE_MESSAGE(code == 0, err);
  run({"predict", "--checkpoint", dir + "/m.ckpt", "--data", dir + "/dataset.tsv",
       "--out", dir + "/pred.tsv"},
      &code, &err);
  REQUIRE_MESSAGE(code == 0, err);
  CHECK(split(read_file(dir + "/pred.tsv"), '\n').size() == 14);
  run({"attn-export", "--checkpoint", dir + "/m.ckpt", "--data",
       dir + "/dataset.tsv", "--format", "html", "--out", dir + "/attn.html"},
      &code, &err);
  REQUIRE_MESSAGE(code == 0, err);
  run({"cv", "--config", conf, "--out", dir + "/cv"}, &code, &err);
  REQUIRE_MESSAGE(code == 0, err);
  CHECK(fs::exists(dir + "/cv/metrics.tsv"));
  CHECK(fs::exists(dir + "/cv/summary.json"));
  run({"ablate", "--config", conf, "--folds", "2", "--switches",
       "no_concepts,no_vad+no_metadata", "--out", dir + "/ab"},
      &code, &err);
  REQUIRE_MESSAGE(code == 0, err);
  const auto tsv = read_file(dir + "/ab/metrics.tsv");
  CHECK(tsv.find("no_vad+no_metadata\tmean") != std::string::npos);

  run({"ablate", "--config", conf, "--switches", "no_gravity", "--out", dir + "/x"},
      &code, &err);
  CHECK(code != 0);
  CHECK(err.rfind("ERROR: ", 0) == 0);
}

TEST_CASE("bundled resources load") {
  ResourcePaths p;
  p.emoji_map = source("data/emoji_map.tsv");
  p.contractions = source("data/contractions.tsv");
  p.segmentation_dict = source("data/segmentation_dict.tsv");
  p.vad_lexicon = source("data/vad_lexicon.tsv");
  p.concept_lexicon = source("data/concept_lexicon.tsv");
  p.bing_positive = source("data/bing_positive.txt");
  p.bing_negative = source("data/bing_negative.txt");
  const FeatureResources r = load_resources(p);
  CHECK(r.concepts.dimension() == 100);
  CHECK(r.concepts.size() >= 200);
  CHECK(r.bing.is_positive("safe"));
  CHECK(r.bing.is_negative("scam"));
  const RunConfig c = load_config(source("data/default.conf"));
  CHECK(c.resources.vad_lexicon == fs::path(p.vad_lexicon).lexically_normal().string());
}
