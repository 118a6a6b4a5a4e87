// SPDX-License-Identifier: Apache-2.0

#include "ckgru/training/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ckgru/core/text_io.hpp"

namespace ckgru {

namespace {

// Separate stream so batch order and dropout do not share draws with
// parameter initialization.
constexpr std::uint64_t kTrainStream = 0xda3e39cb94b95bdbULL;

bool starts_with(std::string_view s, std::string_view p) {
  return s.substr(0, p.size()) == p;
}

} // namespace

TrainResult train(Model &model, const std::vector<Sample> &samples,
                  const TrainConfig &cfg) {
  if (samples.empty())
    throw std::invalid_argument("train: empty dataset");
  if (cfg.batch_size == 0)
    throw std::invalid_argument("train: batch size must be positive");
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (samples[i].label < 0 || samples[i].label > 2)
      throw std::invalid_argument("train: sample " + std::to_string(i) +
                                  " has no label");

  Rng rng(cfg.seed, kTrainStream);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  TrainResult result;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::vector<const Sample *> batch;
      batch.reserve(end - start);
      for (std::size_t i = start; i < end; ++i)
        batch.push_back(&samples[order[i]]);

      Graph graph;
      const BoundParams bound(graph, model.params());
      const Var loss =
        batch_loss(graph, bound, model.config(), batch, true, rng);
      const double value = loss.value()[0];
      if (!std::isfinite(value))
        throw std::runtime_error("train: non-finite loss in epoch " +
                                 std::to_string(epoch + 1) + ", batch " +
                                 std::to_string(batch_index + 1));
      graph.backward(loss);
      adam_step(model.params(), bound.gradients(), cfg.lr, cfg.l2, cfg.adam);
      loss_sum += value * static_cast<double>(batch.size());
      if (epoch == 0)
        result.batch_sizes.push_back(batch.size());
    }
    const double mean = loss_sum / static_cast<double>(samples.size());
    result.loss_curve.push_back(mean);
    if (cfg.on_epoch)
      cfg.on_epoch(epoch, mean);
  }
  return result;
}

std::vector<int> predict_all(const Model &model,
                             const std::vector<Sample> &samples) {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto &s : samples)
    out.push_back(model.predict(s));
  return out;
}

Metrics evaluate(const Model &model, const std::vector<Sample> &samples) {
  std::vector<int> gold;
  gold.reserve(samples.size());
  for (const auto &s : samples)
    gold.push_back(s.label);
  return compute_metrics(gold, predict_all(model, samples));
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t i) const {
  std::vector<bool> held(n, false);
  for (std::size_t idx : folds.at(i))
    held[idx] = true;
  std::vector<std::size_t> out;
  out.reserve(n - folds[i].size());
  for (std::size_t idx = 0; idx < n; ++idx)
    if (!held[idx])
      out.push_back(idx);
  return out;
}

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2)
    throw std::invalid_argument("kfold_split: need at least 2 folds");
  if (n < k)
    throw std::invalid_argument("kfold_split: " + std::to_string(n) +
                                " items cannot fill " + std::to_string(k) +
                                " folds");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  FoldPlan plan{k, seed, n, {}};
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    plan.folds.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                            perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return plan;
}

FoldData build_fold(const std::vector<PreparedTweet> &tweets,
                    const std::vector<std::size_t> &train_idx,
                    const std::vector<std::size_t> &test_idx,
                    const ExperimentConfig &cfg) {
  FoldData fold;
  if (cfg.embeddings) {
    fold.vocabulary = cfg.embeddings->vocabulary;
  } else {
    std::vector<std::vector<std::string>> lists;
    lists.reserve(train_idx.size());
    for (std::size_t i : train_idx)
      lists.push_back(tweets.at(i).seq.tokens);
    fold.vocabulary = Vocabulary::build(lists);
  }

  std::vector<const PreparedTweet *> fit;
  if (cfg.normalize_scope == NormalizeScope::global) {
    for (const auto &t : tweets)
      fit.push_back(&t);
  } else {
    for (std::size_t i : train_idx)
      fit.push_back(&tweets.at(i));
  }
  if (cfg.model.metadata_width() > 0 && !fit.empty())
    fold.stats = fit_minmax(metadata_matrix(fit, cfg.model.metadata_selection));

  for (std::size_t i : train_idx)
    fold.train.push_back(
      make_sample(tweets[i], fold.vocabulary, cfg.model, fold.stats));
  for (std::size_t i : test_idx)
    fold.test.push_back(
      make_sample(tweets.at(i), fold.vocabulary, cfg.model, fold.stats));
  return fold;
}

CvResult cross_validate(const std::vector<PreparedTweet> &tweets,
                        const ExperimentConfig &cfg) {
  const FoldPlan plan = kfold_split(tweets.size(), cfg.folds, cfg.train.seed);
  CvResult result;
  for (std::size_t f = 0; f < plan.k; ++f) {
    const FoldData fold = build_fold(tweets, plan.train_indices(f),
                                     plan.folds[f], cfg);
    Rng init(cfg.train.seed + f);
    Model model(cfg.model, fold.vocabulary, init, cfg.embeddings);
    TrainConfig tc = cfg.train;
    tc.seed = cfg.train.seed + f;
    train(model, fold.train, tc);
    result.folds.push_back(evaluate(model, fold.test));
  }
  result.mean = mean_metrics(result.folds);
  return result;
}

ModelConfig apply_switches(ModelConfig c,
                           const std::vector<std::string> &switches) {
  for (const auto &raw : switches) {
    const std::string s(trim(raw));
    if (s == "no_concepts")
      c.use_concepts = false;
    else if (s == "no_vad")
      c.use_vad = false;
    else if (s == "no_metadata")
      c.use_metadata = false;
    else if (s == "no_attention")
      c.use_attention = false;
    else if (s == "plain_bigru")
      c.plain_bigru = true;
    else if (starts_with(s, "metadata_selection(") && s.back() == ')')
      c.metadata_selection = MetadataSelection::parse(
        std::string_view(s).substr(19, s.size() - 20));
    else
      throw std::invalid_argument("unknown ablation switch '" + s + "'");
  }
  return c;
}

std::vector<Variant> parse_variants(std::string_view text) {
  std::vector<Variant> out{{"full", {}}};
  std::vector<std::string> items;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(')
      ++depth;
    else if (ch == ')')
      --depth;
    if (depth < 0)
      throw std::invalid_argument("switch list: unbalanced ')'");
    if (ch == ',' && depth == 0) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (depth != 0)
    throw std::invalid_argument("switch list: unbalanced '('");
  items.push_back(cur);
  for (const auto &item : items) {
    const std::string name(trim(item));
    if (name.empty())
      continue;
    Variant v{name, {}};
    for (const auto &part : split(name, '+'))
      v.switches.emplace_back(trim(part));
    apply_switches(ModelConfig{}, v.switches);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<VariantResult> ablate(const std::vector<PreparedTweet> &tweets,
                                  const ExperimentConfig &cfg,
                                  const std::vector<Variant> &variants) {
  std::vector<VariantResult> out;
  for (const auto &v : variants) {
    ExperimentConfig vc = cfg;
    vc.model = apply_switches(cfg.model, v.switches);
    out.push_back({v.name, cross_validate(tweets, vc)});
  }
  return out;
}

std::string metrics_tsv(const std::vector<VariantResult> &results) {
  std::ostringstream out;
  out << "variant\tfold\taccuracy\tf1_macro\tf1_weighted\tprecision_macro\t"
         "precision_weighted\trecall_macro\trecall_weighted\n";
  const auto row = [&out](const std::string &variant, const std::string &fold,
                          const Metrics &m) {
    out << variant << '\t' << fold;
    for (double v : {m.accuracy, m.f1_macro, m.f1_weighted, m.precision_macro,
                     m.precision_weighted, m.recall_macro, m.recall_weighted})
      out << '\t' << format_double(v);
    out << '\n';
  };
  for (const auto &r : results) {
    for (std::size_t f = 0; f < r.cv.folds.size(); ++f)
      row(r.name, std::to_string(f), r.cv.folds[f]);
    row(r.name, "mean", r.cv.mean);
  }
  return out.str();
}

} // namespace ckgru
