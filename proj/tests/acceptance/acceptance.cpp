// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion. Tolerances and budgets
// are fixed here and are not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ckgru/app/cli.hpp"
#include "ckgru/app/dataset_io.hpp"
#include "ckgru/app/pipeline.hpp"
#include "ckgru/app/synth.hpp"
#include "ckgru/core/text_io.hpp"
#include "ckgru/model/network.hpp"
#include "oracles.hpp"

using namespace ckgru;
namespace fs = std::filesystem;

namespace {

constexpr double kGradTolerance = 1e-4;
constexpr int kGradSeeds = 10;
// Two samples per loss: with one, a few coordinates carry gradients near 1e-9
// where central-difference roundoff alone exceeds the tolerance.
constexpr std::size_t kGradBatch = 2;
constexpr double kGradBudget = 30.0;
constexpr double kOracleTolerance = 1e-12;
constexpr int kOracleConfigs = 100;
constexpr double kAttentionTolerance = 1e-9;
constexpr double kAverageTolerance = 1e-12;
constexpr std::size_t kOverfitEpochs = 200;
constexpr double kOverfitBudget = 120.0;
constexpr double kAblationGap = 0.15;
constexpr int kAblationSeeds = 5;
constexpr double kAblationBudget = 600.0;
constexpr int kFoldTriples = 1000;
constexpr double kMeanTolerance = 1e-12;
constexpr double kMetricsTolerance = 1e-12;
constexpr int kMetricSets = 100;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, const char *spec = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
    .count();
}

Tensor random_tensor(Shape s, Rng &rng, double lo = -1, double hi = 1) {
  Tensor t = Tensor::zeros(std::move(s));
  for (double &v : t.values)
    v = rng.uniform(lo, hi);
  return t;
}

std::string scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("ckgru_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string source(const std::string &rel) {
  return (fs::path(CKGRU_SOURCE_DIR) / rel).string();
}

// 1
Outcome gradient_fidelity() {
  ModelConfig m;
  m.h = 8;
  m.d_w = 8;
  m.d_c = 4;
  double worst = 0.0;
  std::string where;
  std::size_t coords = 0;
  for (int s = 1; s <= kGradSeeds; ++s) {
    const auto r = model_gradcheck(m, static_cast<std::uint64_t>(s), 5,
                                   kGradBatch);
    coords = r.coordinates;
    if (r.max_relative_error >= worst) {
      worst = r.max_relative_error;
      where = r.worst_parameter;
    }
  }
  return {worst < kGradTolerance,
          "max relative error " + fmt(worst) + " (" + where + ") over " +
            std::to_string(kGradSeeds) + " seeds, batch " +
            std::to_string(kGradBatch) + ", " + std::to_string(coords) +
            " coordinates each"};
}

ParamSet random_cell(const CellDims &d, Rng &rng) {
  ParamSet p;
  add_cell_params(p, "c", d, rng);
  for (auto &e : p.entries())
    for (double &v : e.value.values)
      v = rng.uniform(-1, 1);
  for (const auto &n : concept_param_names("c"))
    std::fill(p.get(n).values.begin(), p.get(n).values.end(), 0.0);
  return p;
}

oracle::PlainGru plain_from(const ParamSet &p, const CellDims &d) {
  const auto m = [&](const char *n, std::size_t cols) {
    return oracle::to_mat(p.get(std::string("c.") + n).values, d.h, cols);
  };
  const auto v = [&](const char *n) { return p.get(std::string("c.") + n).values; };
  const std::size_t gate = d.d_in + d.h + d.d_c;
  return {m("W_r", gate), m("W_z", gate), m("W_n", d.d_in), m("W_m", d.d_in),
          v("b_r"),       v("b_z"),       v("b_n"),         v("b_m")};
}

// 2
Outcome reduction_oracle() {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < kOracleConfigs; ++trial) {
    const CellDims d{1 + rng.below(8), 1 + rng.below(8), 1 + rng.below(6)};
    const std::size_t k = 1 + rng.below(10);
    const ParamSet pf = random_cell(d, rng);
    const ParamSet pb = random_cell(d, rng);
    const auto of = plain_from(pf, d), ob = plain_from(pb, d);
    Graph g;
    const BoundParams bf(g, pf), bb(g, pb);

    const Tensor x = random_tensor({d.d_in}, rng);
    const Tensor h = random_tensor({d.h}, rng);
    const Var step = ck_gru_step(g.constant(x), g.constant(h),
                                 g.constant(Tensor::zeros({d.d_c})),
                                 bind_cell(bf, "c"));
    const auto expect_step = of.step(x.values, h.values);
    for (std::size_t i = 0; i < d.h; ++i)
      worst = std::max(worst, std::abs(step.value()[i] - expect_step[i]));

    const Tensor seq = random_tensor({k, d.d_in}, rng);
    const auto out = bigru_forward(g.constant(seq),
                                   g.constant(Tensor::zeros({k, d.d_c})),
                                   bind_cell(bf, "c"), bind_cell(bb, "c"));
    const auto expect =
      oracle::plain_bigru(oracle::to_mat(seq.values, k, d.d_in), of, ob, d.h);
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t i = 0; i < 2 * d.h; ++i)
        worst = std::max(worst, std::abs(out.states.value().at(t, i) - expect[t][i]));
  }
  return {worst <= kOracleTolerance,
          "max abs deviation " + fmt(worst) + " over " +
            std::to_string(kOracleConfigs) + " configurations"};
}

// 3
Outcome attention_normalization() {
  Rng rng(77);
  double worst_sum = 0.0;
  bool non_negative = true, uniform = true;
  std::size_t checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng.below(12), m = 2 * (1 + rng.below(5));
    const std::size_t da = 1 + rng.below(6);
    const std::size_t iters = 1 + rng.below(4);
    Graph g;
    const GcmParams p{g.constant(random_tensor({da, m}, rng, -2, 2)),
                      g.constant(random_tensor({da, m}, rng, -2, 2)),
                      g.constant(random_tensor({m, m}, rng, -2, 2))};
    const auto res = gcm_attend(g.constant(random_tensor({k, m}, rng, -3, 3)), p,
                                {iters, rng.below(2) == 1});
    for (const Var &w : res.weights) {
      double s = 0.0;
      for (double v : w.value().values) {
        non_negative = non_negative && v >= 0.0;
        s += v;
      }
      worst_sum = std::max(worst_sum, std::abs(s - 1.0));
      ++checked;
    }
    Tensor same = Tensor::zeros({k, m});
    const Tensor row = random_tensor({m}, rng);
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t j = 0; j < m; ++j)
        same.at(t, j) = row[j];
    for (const Var &w : gcm_attend(g.constant(same), p, {iters, true}).weights)
      for (double v : w.value().values)
        uniform = uniform && v == 1.0 / static_cast<double>(k);
  }
  // Weights reported by a full model as well.
  ModelConfig c;
  c.h = 6;
  c.d_w = 5;
  c.d_c = 3;
  std::vector<std::string> words = {"a", "b", "c"};
  Model model(c, Vocabulary(words), rng);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 1 + rng.below(9);
    Sample s;
    s.linguistic = Tensor::zeros({k, c.pos_size + c.dep_size});
    s.alpha = random_tensor({k, c.d_c}, rng);
    for (std::size_t t = 0; t < k; ++t)
      s.token_ids.push_back(rng.below(4));
    s.vad.assign(c.vad_width(), 0.5);
    s.metadata.assign(c.metadata_width(), 0.5);
    for (const auto &w : model.attention(s)) {
      double sum = 0.0;
      for (double v : w) {
        non_negative = non_negative && v >= 0.0;
        sum += v;
      }
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
      ++checked;
    }
  }
  return {non_negative && uniform && worst_sum <= kAttentionTolerance,
          std::to_string(checked) + " weight vectors, max |sum - 1| " +
            fmt(worst_sum) + (non_negative ? "" : ", NEGATIVE weight") +
            (uniform ? ", equal rows exactly uniform" : ", equal rows NOT uniform")};
}

// 4
Outcome candidate_averaging() {
  Rng rng(404);
  double worst = 0.0;
  bool invariant = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + rng.below(12);
    std::vector<std::vector<double>> cands(1 + rng.below(10), std::vector<double>(d));
    for (auto &c : cands)
      for (auto &v : c)
        v = rng.uniform(-5, 5);
    const auto a = average_candidates(cands, d);
    for (int p = 0; p < 5; ++p) {
      auto shuffled = cands;
      rng.shuffle(shuffled);
      invariant = invariant && average_candidates(shuffled, d) == a;
    }
    for (std::size_t j = 0; j < d; ++j) {
      long double s = 0;
      for (const auto &c : cands)
        s += c[j];
      worst = std::max(worst, std::abs(a[j] - static_cast<double>(
                                                s / static_cast<long double>(cands.size()))));
    }
  }
  return {invariant && worst <= kAverageTolerance,
          std::string(invariant ? "permutation-invariant" : "NOT permutation-invariant") +
            ", max deviation from brute-force mean " + fmt(worst) +
            " over 1000 candidate sets"};
}

// 5
Outcome overfit_sanity() {
  SynthOptions so;
  so.kind = "separable";
  so.n = 32;
  so.seed = 3;
  const SynthData data = synthesize(so);
  RunConfig c;
  c.seed = 3;
  c.epochs = kOverfitEpochs;
  FeatureResources res;
  res.concepts = data.lexicon(so.d_c);
  const auto tweets = prepare_all(data.tweets, res, c.prepare_options());

  std::vector<std::size_t> all(tweets.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const ExperimentConfig exp = c.experiment(nullptr);
  const FoldData fold = build_fold(tweets, all, {}, exp);
  Rng init(c.seed);
  Model model(c.model, fold.vocabulary, init);
  TrainConfig tc = exp.train;
  std::size_t first_perfect = 0;
  tc.on_epoch = [&](std::size_t epoch, double) {
    if (first_perfect == 0 && evaluate(model, fold.train).accuracy == 1.0)
      first_perfect = epoch + 1;
  };
  train(model, fold.train, tc);
  const double final_acc = evaluate(model, fold.train).accuracy;
  return {first_perfect != 0,
          first_perfect != 0
            ? "100% training accuracy first reached at epoch " +
                std::to_string(first_perfect) + ", final " + fmt(final_acc)
            : "never reached 100% (final " + fmt(final_acc) + ")"};
}

// 6
Outcome ablation_signal() {
  double full = 0.0, plain = 0.0;
  std::string per_seed;
  for (int s = 1; s <= kAblationSeeds; ++s) {
    SynthOptions so;
    so.kind = "concept_task";
    so.n = 300;
    so.seed = static_cast<std::uint64_t>(s);
    so.d_c = 16;
    const SynthData data = synthesize(so);
    RunConfig c;
    c.model.h = 16;
    c.model.d_w = 16;
    c.model.d_c = 16;
    c.model.d_red = 16;
    c.epochs = 20;
    c.batch_size = 32;
    c.folds = 5;
    c.seed = static_cast<std::uint64_t>(s);
    FeatureResources res;
    res.concepts = data.lexicon(so.d_c);
    const auto tweets = prepare_all(data.tweets, res, c.prepare_options());
    const auto r = ablate(tweets, c.experiment(nullptr),
                          {{"full", {}}, {"plain_bigru", {"plain_bigru"}}});
    full += r[0].cv.mean.accuracy;
    plain += r[1].cv.mean.accuracy;
    per_seed += " " + fmt(r[0].cv.mean.accuracy, "%.3f") + "/" +
                fmt(r[1].cv.mean.accuracy, "%.3f");
  }
  full /= kAblationSeeds;
  plain /= kAblationSeeds;
  return {full - plain >= kAblationGap,
          "full " + fmt(full, "%.3f") + " vs plain_bigru " + fmt(plain, "%.3f") +
            ", gap " + fmt(full - plain, "%.3f") + " (per seed" + per_seed + ")"};
}

// 7
Outcome fold_integrity() {
  Rng rng(7);
  int bad = 0;
  for (int trial = 0; trial < kFoldTriples; ++trial) {
    const std::size_t n = 10 + rng.below(2000);
    const std::uint64_t seed = rng.next_u32();
    const FoldPlan plan = kfold_split(n, 10, seed);
    std::vector<int> seen(n, 0);
    std::size_t lo = n, hi = 0;
    for (const auto &f : plan.folds) {
      lo = std::min(lo, f.size());
      hi = std::max(hi, f.size());
      for (std::size_t i : f)
        ++seen[i];
    }
    bool ok = plan.folds.size() == 10 && hi - lo <= 1 && lo == n / 10 &&
              std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
    for (std::size_t f = 0; ok && f < 10; ++f)
      ok = plan.train_indices(f).size() + plan.folds[f].size() == n;
    ok = ok && kfold_split(n, 10, seed).folds == plan.folds;
    bad += ok ? 0 : 1;
  }

  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Metrics> folds;
    for (int f = 0; f < 10; ++f) {
      std::vector<int> gold, pred;
      for (std::uint32_t i = 1 + rng.below(60); i > 0; --i) {
        gold.push_back(static_cast<int>(rng.below(3)));
        pred.push_back(static_cast<int>(rng.below(3)));
      }
      folds.push_back(compute_metrics(gold, pred));
    }
    const Metrics m = mean_metrics(folds);
    const auto field = [&](auto get) {
      long double s = 0;
      for (const auto &f : folds)
        s += get(f);
      worst = std::max(worst, std::abs(get(m) - static_cast<double>(s / folds.size())));
    };
    field([](const Metrics &x) { return x.accuracy; });
    field([](const Metrics &x) { return x.f1_macro; });
    field([](const Metrics &x) { return x.f1_weighted; });
    field([](const Metrics &x) { return x.precision_macro; });
    field([](const Metrics &x) { return x.precision_weighted; });
    field([](const Metrics &x) { return x.recall_macro; });
    field([](const Metrics &x) { return x.recall_weighted; });
  }
  return {bad == 0 && worst <= kMeanTolerance,
          std::to_string(kFoldTriples - bad) + "/" + std::to_string(kFoldTriples) +
            " fold plans valid, mean-metric deviation " + fmt(worst)};
}

// 8
Outcome golden_corpus() {
  const auto res = NormalizerResources::load(source("data/emoji_map.tsv"),
                                             source("data/contractions.tsv"),
                                             source("data/segmentation_dict.tsv"));
  const auto tweets = ingest_dataset(source("tests/data/golden_tweets.tsv"));
  const auto expected_lines = read_lines(source("tests/data/golden_expected.tsv"));
  std::string first, second, expected;
  int not_idempotent = 0;
  for (std::size_t i = 1; i < expected_lines.size(); ++i) {
    const auto cols = split(expected_lines[i], '\t');
    if (cols.size() == 2)
      expected += cols[0] + '\t' + cols[1] + '\n';
  }
  for (const auto &t : tweets) {
    const std::string a = normalize(t, res);
    first += t.id + '\t' + a + '\n';
    second += t.id + '\t' + normalize(t, res) + '\n';
    if (normalize(a, res) != a)
      ++not_idempotent;
  }
  const bool same = first == expected && first == second;
  std::size_t mismatch = 0;
  if (!same) {
    const auto a = split(first, '\n'), b = split(expected, '\n');
    while (mismatch < std::min(a.size(), b.size()) && a[mismatch] == b[mismatch])
      ++mismatch;
  }
  return {tweets.size() == 50 && same && not_idempotent == 0,
          std::to_string(tweets.size()) + " tweets, " +
            (same ? "byte-identical to the expected file"
                  : "first difference at tweet " + std::to_string(mismatch + 1)) +
            ", " + std::to_string(not_idempotent) + " not idempotent"};
}

// 9
Outcome metric_vad_minmax() {
  Rng rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < kMetricSets; ++trial) {
    std::vector<int> gold, pred;
    for (std::uint32_t i = 1 + rng.below(300); i > 0; --i) {
      gold.push_back(static_cast<int>(rng.below(3)));
      pred.push_back(rng.below(4) == 0 ? gold.back()
                                       : static_cast<int>(rng.below(3)));
    }
    const Metrics m = compute_metrics(gold, pred);
    std::array<std::array<long, 3>, 3> cm{};
    for (std::size_t i = 0; i < gold.size(); ++i)
      ++cm[gold[i]][pred[i]];
    const auto b = oracle::metrics_from_confusion(cm);
    for (const auto &[x, y] :
         {std::pair{m.accuracy, b.accuracy}, {m.precision_macro, b.precision_macro},
          {m.recall_macro, b.recall_macro}, {m.f1_macro, b.f1_macro},
          {m.precision_weighted, b.precision_weighted},
          {m.recall_weighted, b.recall_weighted}, {m.f1_weighted, b.f1_weighted}})
      worst = std::max(worst, std::abs(x - y));
  }

  const VadLexicon vad = VadLexicon::load(source("data/vad_lexicon.tsv"));
  const std::vector<std::string> pool = {"good", "bad", "vaccine", "zzz", "hate",
                                         "love", "the", "fear", "safe", "NUMBER"};
  bool vad_ok = true;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> tokens;
    for (std::uint32_t i = 1 + rng.below(30); i > 0; --i)
      tokens.push_back(pool[rng.below(static_cast<std::uint32_t>(pool.size()))]);
    const auto f = vad_features(tokens, vad);
    vad_ok = vad_ok && f.values.size() == 9;
    for (double v : f.values)
      vad_ok = vad_ok && v >= 0.0 && v <= 1.0;
  }

  bool range_ok = true, exact_ok = true;
  double inverse_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 2 + rng.below(30), cols = 1 + rng.below(6);
    FeatureMatrix real(rows, std::vector<double>(cols)), counts = real;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        real[r][c] = rng.uniform(-1e3, 1e3);
        counts[r][c] = static_cast<double>(rng.below(100000));
      }
    for (const FeatureMatrix *m : {&real, &counts}) {
      const auto n = minmax_normalize(*m);
      for (const auto &row : n.normalized)
        for (double v : row)
          range_ok = range_ok && v >= 0.0 && v <= 1.0;
      const auto back = inverse_minmax(n.normalized, n.stats);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          const double span = n.stats.max[c] - n.stats.min[c];
          if (span == 0.0)
            continue;
          if (m == &counts)
            exact_ok = exact_ok && std::round(back[r][c]) == (*m)[r][c];
          else
            inverse_err = std::max(inverse_err, std::abs(back[r][c] - (*m)[r][c]) / span);
        }
    }
  }
  return {worst <= kMetricsTolerance && vad_ok && range_ok && exact_ok &&
            inverse_err <= kMetricsTolerance,
          "metric deviation " + fmt(worst) + "; VAD " +
            (vad_ok ? "length 9 in [0,1]" : "OUT OF CONTRACT") + "; min-max " +
            (range_ok ? "in [0,1]" : "OUT OF RANGE") + ", count columns " +
            (exact_ok ? "recovered exactly" : "NOT recovered") +
            ", real columns within " + fmt(inverse_err) + " of range"};
}

// 10
Outcome cv_determinism() {
  const std::string dir = scratch("cv");
  const auto cli = [](std::vector<std::string> args) {
    args.insert(args.begin(), "ckgru");
    std::vector<const char *> argv;
    for (const auto &a : args)
      argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != 0)
      throw std::runtime_error(err.str());
  };
  cli({"synth-gen", "--spec", "concept_task", "--n", "60", "--seed", "5", "--out",
       dir});
  write_file(dir + "/cv.conf",
             "[model]\nh = 6\nd_w = 6\nd_c = 100\nd_red = 6\n[train]\nepochs = 3\n"
             "batch_size = 8\nfolds = 3\n[resources]\nconcept_lexicon = concepts.tsv\n"
             "vad_lexicon = " + source("data/vad_lexicon.tsv") +
             "\n[data]\ndataset = dataset.tsv\n");
  cli({"cv", "--config", dir + "/cv.conf", "--seed", "11", "--out", dir + "/run1"});
  cli({"cv", "--config", dir + "/cv.conf", "--seed", "11", "--out", dir + "/run2"});
  bool same = true;
  for (const char *f : {"metrics.tsv", "summary.json"})
    same = same && read_file(dir + "/run1/" + f) == read_file(dir + "/run2/" + f);
  return {same, same ? "metrics.tsv and summary.json byte-identical across runs"
                     : "outputs differ between runs"};
}

struct Criterion {
  int number;
  const char *name;
  std::function<Outcome()> run;
  double budget_seconds;
};

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
    {1, "gradient fidelity", gradient_fidelity, kGradBudget},
    {2, "GRU reduction oracle", reduction_oracle, 0},
    {3, "attention normalization", attention_normalization, 0},
    {4, "candidate averaging", candidate_averaging, 0},
    {5, "overfit sanity", overfit_sanity, kOverfitBudget},
    {6, "commonsense ablation signal", ablation_signal, kAblationBudget},
    {7, "cross-validation integrity", fold_integrity, 0},
    {8, "preprocessing golden corpus", golden_corpus, 0},
    {9, "metrics, VAD and min-max oracle", metric_vad_minmax, 0},
    {10, "cv determinism", cv_determinism, 0},
  };
  int failures = 0;
  for (const auto &c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    if (c.budget_seconds > 0 && secs >= c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.budget_seconds, "%.0f") + " s budget";
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s [%d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.number,
                c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
