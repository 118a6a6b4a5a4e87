// SPDX-License-Identifier: Apache-2.0

#include "ckgru/app/pipeline.hpp"

#include <numeric>

#include <json.hpp>

#include "ckgru/core/text_io.hpp"

namespace ckgru {

FeatureResources load_resources(const ResourcePaths &p) {
  FeatureResources r;
  r.normalizer =
    NormalizerResources::load(p.emoji_map, p.contractions, p.segmentation_dict);
  if (!p.vad_lexicon.empty())
    r.vad = VadLexicon::load(p.vad_lexicon);
  if (!p.concept_lexicon.empty())
    r.concepts = ConceptLexicon::load(p.concept_lexicon);
  if (!p.bing_positive.empty() || !p.bing_negative.empty()) {
    if (p.bing_positive.empty() || p.bing_negative.empty())
      throw ResourceError("bing_positive and bing_negative must be given together");
    r.bing = BingLiuLexicon::load(p.bing_positive, p.bing_negative);
  }
  return r;
}

std::vector<PreparedTweet> load_prepared(const RunConfig &config,
                                         const FeatureResources &resources,
                                         LabelPolicy policy,
                                         const std::string &dataset) {
  const std::string path = dataset.empty() ? config.dataset : dataset;
  if (path.empty())
    throw std::invalid_argument("no dataset given (use --data or data.dataset)");
  return prepare_all(ingest_dataset(path, policy), resources,
                     config.prepare_options());
}

TrainedModel train_full(const RunConfig &config,
                        const std::vector<PreparedTweet> &tweets,
                        const PretrainedEmbeddings *embeddings) {
  std::vector<std::size_t> all(tweets.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const ExperimentConfig exp = config.experiment(embeddings);
  FoldData fold = build_fold(tweets, all, {}, exp);
  Rng init(config.seed);
  TrainedModel out;
  out.model = std::make_unique<Model>(config.model, fold.vocabulary, init,
                                      embeddings);
  out.stats = fold.stats;
  out.history = train(*out.model, fold.train, exp.train);
  return out;
}

GradCheckReport model_gradcheck(const ModelConfig &config, std::uint64_t seed,
                                std::size_t tokens, std::size_t batch,
                                double scale, double eps) {
  config.validate();
  constexpr std::size_t kWords = 6;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < kWords; ++i)
    words.push_back("w" + std::to_string(i));
  Rng rng(seed);
  Model model(config, Vocabulary(words), rng);
  for (auto &e : model.params().entries())
    if (!e.frozen)
      for (double &v : e.value.values)
        v = rng.uniform(-scale, scale);

  std::vector<Sample> samples(batch);
  for (auto &s : samples) {
    s.linguistic = Tensor::zeros({tokens, config.pos_size + config.dep_size});
    s.alpha = Tensor::zeros({tokens, config.d_c});
    for (std::size_t t = 0; t < tokens; ++t) {
      s.token_ids.push_back(rng.below(kWords + 1));
      s.linguistic.at(t, rng.below(static_cast<std::uint32_t>(config.pos_size))) = 1;
      s.linguistic.at(t, config.pos_size + rng.below(static_cast<std::uint32_t>(
                                             config.dep_size))) = 1;
    }
    for (double &v : s.alpha.values)
      v = rng.uniform(-1, 1);
    for (std::size_t i = 0; i < config.vad_width(); ++i)
      s.vad.push_back(rng.uniform());
    for (std::size_t i = 0; i < config.metadata_width(); ++i)
      s.metadata.push_back(rng.uniform());
    s.label = static_cast<int>(rng.below(3));
  }
  std::vector<const Sample *> ptrs;
  for (const auto &s : samples)
    ptrs.push_back(&s);
  const std::uint64_t dropout_seed = rng.next_u32();
  const LossFn fn = [&](Graph &g, const BoundParams &p) {
    // Same dropout mask on every evaluation.
    Rng drop(dropout_seed);
    return batch_loss(g, p, config, ptrs, true, drop);
  };
  return finite_diff_check(fn, model.params(), eps);
}

namespace {

nlohmann::ordered_json metrics_json(const Metrics &m) {
  nlohmann::ordered_json j;
  j["accuracy"] = m.accuracy;
  j["f1_macro"] = m.f1_macro;
  j["f1_weighted"] = m.f1_weighted;
  j["precision_macro"] = m.precision_macro;
  j["precision_weighted"] = m.precision_weighted;
  j["recall_macro"] = m.recall_macro;
  j["recall_weighted"] = m.recall_weighted;
  j["confusion"] = m.confusion;
  return j;
}

} // namespace

std::string summary_json(const std::vector<VariantResult> &results,
                         const RunConfig &config) {
  nlohmann::ordered_json j;
  j["folds"] = config.folds;
  j["seed"] = config.seed;
  j["config"] = serialize_config(config);
  auto &variants = j["variants"];
  variants = nlohmann::ordered_json::array();
  for (const auto &r : results) {
    nlohmann::ordered_json v;
    v["name"] = r.name;
    v["mean"] = metrics_json(r.cv.mean);
    auto &folds = v["folds"];
    folds = nlohmann::ordered_json::array();
    for (const auto &f : r.cv.folds)
      folds.push_back(metrics_json(f));
    variants.push_back(std::move(v));
  }
  return j.dump(2) + "\n";
}

} // namespace ckgru
