// SPDX-License-Identifier: Apache-2.0

#include "ckgru/app/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "ckgru/app/attention_export.hpp"
#include "ckgru/app/model_io.hpp"
#include "ckgru/app/pipeline.hpp"
#include "ckgru/app/synth.hpp"
#include "ckgru/core/text_io.hpp"
#include "ckgru/preprocess/tagger.hpp"

namespace ckgru {

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> folds;
  std::string switches = "no_concepts,no_vad,no_metadata,no_attention,plain_bigru";
  std::string format = "tsv";
  std::string data;
  std::string checkpoint;
  std::string spec = "separable";
  std::size_t n = 32;
};

RunConfig base_config(const Options &o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.seed)
    c.seed = *o.seed;
  if (o.folds)
    c.folds = *o.folds;
  if (!o.data.empty())
    c.dataset = o.data;
  c.validate();
  return c;
}

std::unique_ptr<PretrainedEmbeddings> embeddings_for(const RunConfig &c) {
  if (c.resources.embeddings.empty())
    return nullptr;
  return std::make_unique<PretrainedEmbeddings>(
    load_embeddings(c.resources.embeddings));
}

void require_out(const Options &o) {
  if (o.out.empty())
    throw std::invalid_argument("--out is required");
}

// Writes to --out, or to stdout when it is "-".
void emit(const Options &o, std::ostream &out, const std::string &text) {
  if (o.out == "-")
    out << text;
  else
    write_file(o.out, text);
}

std::string join_tags(const std::vector<int> &ids,
                      const std::array<std::string_view, 17> *pos,
                      const std::array<std::string_view, 10> *dep) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i)
      s += ' ';
    s += pos ? pos->at(ids[i]) : dep->at(ids[i]);
  }
  return s;
}

std::string join_doubles(const std::vector<double> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      s += ',';
    s += format_double(v[i]);
  }
  return s;
}

int cmd_preprocess(const Options &o, std::ostream &out) {
  require_out(o);
  const RunConfig c = base_config(o);
  const auto res = load_resources(c.resources);
  const auto tweets = load_prepared(c, res, LabelPolicy::optional);
  std::string text;
  if (o.format == "json") {
    auto j = nlohmann::ordered_json::array();
    for (const auto &t : tweets) {
      nlohmann::ordered_json e;
      e["id"] = t.id;
      e["tokens"] = t.seq.tokens;
      e["pos"] = t.seq.pos_tags;
      e["dep"] = t.seq.dep_tags;
      e["vad"] = t.vad;
      e["metadata"] = t.metadata.values();
      if (t.label)
        e["label"] = label_name(*t.label);
      j.push_back(std::move(e));
    }
    text = j.dump(2) + "\n";
  } else if (o.format == "tsv") {
    text = "id\tlabel\ttokens\tpos\tdep\tvad\n";
    for (const auto &t : tweets)
      text += t.id + '\t' + (t.label ? std::string(label_name(*t.label)) : "") +
              '\t' + join(t.seq.tokens, " ") + '\t' +
              join_tags(t.seq.pos_tags, &kPosTags, nullptr) + '\t' +
              join_tags(t.seq.dep_tags, nullptr, &kDepTags) + '\t' +
              join_doubles(t.vad) + '\n';
  } else {
    throw std::invalid_argument("--format must be tsv or json for preprocess");
  }
  emit(o, out, text);
  out << "preprocessed " << tweets.size() << " tweets\n";
  return 0;
}

int cmd_train(const Options &o, std::ostream &out) {
  require_out(o);
  const RunConfig c = base_config(o);
  const auto res = load_resources(c.resources);
  const auto tweets = load_prepared(c, res, LabelPolicy::required);
  const auto emb = embeddings_for(c);
  const TrainedModel trained = train_full(c, tweets, emb.get());
  save_model(o.out, c, *trained.model, trained.stats);
  std::vector<Sample> samples;
  for (const auto &t : tweets)
    samples.push_back(
      make_sample(t, trained.model->vocabulary(), c.model, trained.stats));
  const Metrics m = evaluate(*trained.model, samples);
  out << "trained on " << tweets.size() << " tweets, final loss "
      << format_double(trained.history.loss_curve.back())
      << ", training accuracy " << format_double(m.accuracy) << "\n";
  return 0;
}

SavedModel checkpoint_with_resources(const Options &o, RunConfig *run) {
  if (o.checkpoint.empty())
    throw std::invalid_argument("--checkpoint is required");
  SavedModel saved = load_model(o.checkpoint);
  // Resources come from --config when given, else from the checkpoint.
  *run = saved.config;
  if (!o.config.empty())
    run->resources = load_config(o.config).resources;
  if (!o.data.empty())
    run->dataset = o.data;
  return saved;
}

int cmd_evaluate(const Options &o, std::ostream &out) {
  RunConfig c;
  const SavedModel saved = checkpoint_with_resources(o, &c);
  const auto res = load_resources(c.resources);
  const auto tweets = load_prepared(c, res, LabelPolicy::required);
  std::vector<Sample> samples;
  for (const auto &t : tweets)
    samples.push_back(
      make_sample(t, saved.model->vocabulary(), saved.config.model, saved.stats));
  const Metrics m = evaluate(*saved.model, samples);
  const std::string tsv = metrics_tsv({{"evaluate", {{m}, m}}});
  if (!o.out.empty())
    emit(o, out, tsv);
  out << "accuracy " << format_double(m.accuracy) << ", f1_macro "
      << format_double(m.f1_macro) << ", f1_weighted "
      << format_double(m.f1_weighted) << "\n";
  return 0;
}

void write_results(const Options &o, const RunConfig &c,
                   const std::vector<VariantResult> &results) {
  require_out(o);
  std::filesystem::create_directories(o.out);
  const std::filesystem::path dir(o.out);
  write_file((dir / "metrics.tsv").string(), metrics_tsv(results));
  write_file((dir / "summary.json").string(), summary_json(results, c));
}

int cmd_cv(const Options &o, std::ostream &out) {
  const RunConfig c = base_config(o);
  const auto res = load_resources(c.resources);
  const auto tweets = load_prepared(c, res, LabelPolicy::required);
  const auto emb = embeddings_for(c);
  const auto results = ablate(tweets, c.experiment(emb.get()), {{"full", {}}});
  write_results(o, c, results);
  out << c.folds << "-fold accuracy " << format_double(results[0].cv.mean.accuracy)
      << ", f1_macro " << format_double(results[0].cv.mean.f1_macro) << "\n";
  return 0;
}

int cmd_ablate(const Options &o, std::ostream &out) {
  const RunConfig c = base_config(o);
  const auto variants = parse_variants(o.switches);
  const auto res = load_resources(c.resources);
  const auto tweets = load_prepared(c, res, LabelPolicy::required);
  const auto emb = embeddings_for(c);
  const auto results = ablate(tweets, c.experiment(emb.get()), variants);
  write_results(o, c, results);
  for (const auto &r : results)
    out << r.name << "\taccuracy " << format_double(r.cv.mean.accuracy)
        << "\tf1_macro " << format_double(r.cv.mean.f1_macro) << "\n";
  return 0;
}

int cmd_predict(const Options &o, std::ostream &out) {
  require_out(o);
  RunConfig c;
  const SavedModel saved = checkpoint_with_resources(o, &c);
  const auto res = load_resources(c.resources);
  const auto tweets = load_prepared(c, res, LabelPolicy::optional);
  std::string text = "id\tlabel\tlogit_positive\tlogit_negative\tlogit_neutral\n";
  for (const auto &t : tweets) {
    const Sample s =
      make_sample(t, saved.model->vocabulary(), saved.config.model, saved.stats);
    const auto logits = saved.model->logits(s);
    text += t.id + '\t' +
            std::string(label_name(static_cast<Label>(argmax_class(logits))));
    for (double v : logits)
      text += '\t' + format_double(v);
    text += '\n';
  }
  emit(o, out, text);
  out << "predicted " << tweets.size() << " tweets\n";
  return 0;
}

int cmd_attn_export(const Options &o, std::ostream &out) {
  require_out(o);
  if (o.format != "tsv" && o.format != "html")
    throw std::invalid_argument("--format must be tsv or html for attn-export");
  RunConfig c;
  const SavedModel saved = checkpoint_with_resources(o, &c);
  const auto res = load_resources(c.resources);
  const auto tweets = load_prepared(c, res, LabelPolicy::optional);
  const auto rows = attention_rows(*saved.model, tweets, saved.stats);
  emit(o, out, o.format == "html" ? attention_html(rows) : attention_tsv(rows));
  out << "exported attention for " << tweets.size() << " tweets\n";
  return 0;
}

int cmd_gradcheck(const Options &o, std::ostream &out) {
  constexpr double kTolerance = 1e-4;
  RunConfig c = base_config(o);
  if (o.config.empty()) {
    // Small probe shape; a full-size model has too many coordinates.
    c.model.h = 8;
    c.model.d_w = 8;
    c.model.d_c = 4;
  }
  const std::uint64_t first = o.seed.value_or(1);
  double worst = 0.0;
  for (std::uint64_t s = first; s < first + o.n; ++s) {
    const auto r = model_gradcheck(c.model, s);
    out << "seed " << s << ": max relative error "
        << format_double(r.max_relative_error) << " (" << r.worst_parameter
        << "[" << r.worst_index << "], " << r.coordinates << " coordinates)\n";
    worst = std::max(worst, r.max_relative_error);
  }
  if (worst >= kTolerance)
    throw std::runtime_error("gradient check failed: max relative error " +
                             format_double(worst));
  out << "gradient check passed\n";
  return 0;
}

int cmd_synth_gen(const Options &o, std::ostream &out) {
  require_out(o);
  const RunConfig base = base_config(o);
  SynthOptions so;
  so.kind = o.spec;
  so.n = o.n;
  so.seed = o.seed.value_or(base.seed);
  so.d_c = base.model.d_c;
  const SynthData data = synthesize(so);
  write_synth(o.out, data, so, base);
  out << "wrote " << data.tweets.size() << " " << so.kind << " tweets to "
      << o.out << "\n";
  return 0;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"ckgru: concept-aware BiGRU sentiment toolkit", "ckgru"};
  app.require_subcommand(1);
  Options o;

  const auto add = [&](const std::string &name, const std::string &desc) {
    auto *sub = app.add_subcommand(name, desc);
    sub->add_option("--config", o.config, "run configuration file");
    sub->add_option("--out", o.out, "output file or directory");
    return sub;
  };
  const auto seed = [&](CLI::App *sub) {
    sub->add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t &v) { o.seed = v; }, "random seed");
  };
  const auto data = [&](CLI::App *sub) {
    sub->add_option("--data", o.data, "dataset TSV");
  };
  const auto folds = [&](CLI::App *sub) {
    sub->add_option_function<std::size_t>(
         "--folds", [&](const std::size_t &v) { o.folds = v; }, "number of folds")
      ->check(CLI::Range(2, 1000));
  };
  const auto checkpoint = [&](CLI::App *sub) {
    sub->add_option("--checkpoint", o.checkpoint, "trained model file")->required();
  };

  auto *pre = add("preprocess", "normalize, tokenize and tag a dataset");
  data(pre);
  pre->add_option("--format", o.format, "tsv or json");
  auto *tr = add("train", "train on a whole dataset and save the model");
  data(tr);
  seed(tr);
  auto *ev = add("evaluate", "score a saved model on a labeled dataset");
  data(ev);
  checkpoint(ev);
  auto *cv = add("cv", "k-fold cross-validation");
  data(cv);
  seed(cv);
  folds(cv);
  auto *ab = add("ablate", "cross-validate the full model and its ablations");
  data(ab);
  seed(ab);
  folds(ab);
  ab->add_option("--switches", o.switches,
                 "comma-separated variants; '+' combines switches");
  auto *pr = add("predict", "label a dataset with a saved model");
  data(pr);
  checkpoint(pr);
  auto *ae = add("attn-export", "export attention weights of a saved model");
  data(ae);
  checkpoint(ae);
  ae->add_option("--format", o.format, "tsv or html");
  auto *gc = add("gradcheck", "finite-difference check of the model gradients");
  seed(gc);
  gc->add_option("--n", o.n, "number of seeds")->check(CLI::Range(1, 1000));
  auto *sg = add("synth-gen", "generate a synthetic dataset");
  seed(sg);
  sg->add_option("--spec", o.spec, "separable, concept_task or noise");
  sg->add_option("--n", o.n, "number of tweets")->check(CLI::Range(3, 10000000));

  if (argc <= 1) {
    err << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "ERROR: " << e.what() << "\n";
    return 2;
  }

  const std::vector<std::pair<CLI::App *, int (*)(const Options &, std::ostream &)>>
    handlers = {{pre, cmd_preprocess}, {tr, cmd_train},   {ev, cmd_evaluate},
                {cv, cmd_cv},          {ab, cmd_ablate},  {pr, cmd_predict},
                {ae, cmd_attn_export}, {gc, cmd_gradcheck}, {sg, cmd_synth_gen}};
  try {
    for (const auto &[sub, fn] : handlers)
      if (sub->parsed())
        return fn(o, out);
  } catch (const std::exception &e) {
    std::string msg = e.what();
    for (auto &ch : msg)
      if (ch == '\n')
        ch = ' ';
    err << "ERROR: " << msg << "\n";
    return 1;
  }
  return 2;
}

} // namespace ckgru
