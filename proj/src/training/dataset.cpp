// SPDX-License-Identifier: Apache-2.0

#include "ckgru/training/dataset.hpp"

#include <stdexcept>

#include "ckgru/features/linguistic.hpp"
#include "ckgru/preprocess/tagger.hpp"

namespace ckgru {

PreparedTweet prepare_tweet(const RawTweet &raw, const FeatureResources &res,
                            const PrepareOptions &opt) {
  if (res.concepts.size() > 0 && res.concepts.dimension() != opt.d_c)
    throw std::invalid_argument("concept lexicon dimension " +
                                std::to_string(res.concepts.dimension()) +
                                " does not match d_c = " +
                                std::to_string(opt.d_c));
  PreparedTweet t;
  t.id = raw.id;
  t.text = raw.text;
  t.label = raw.label;
  t.seq = prepare_tokens(raw, res.normalizer, opt.max_tokens);
  t.linguistic = linguistic_onehot(t.seq, opt.pos_size, opt.dep_size);
  if (res.concepts.size() > 0)
    t.alpha = build_concept_context(t.seq.tokens, res.concepts).alpha;
  else
    t.alpha = Tensor::zeros({t.seq.size(), opt.d_c});
  t.vad = vad_features(t.seq.tokens, res.vad).values;

  t.metadata = raw.metadata;
  MetadataRecord counted;
  compute_text_metadata(raw.text, res.normalizer.emoji, res.bing, counted);
  for (std::size_t i = 1; i <= 7; ++i)
    if (!raw.metadata_given.test(i))
      t.metadata.field(i) = counted.field(i);
  return t;
}

std::vector<PreparedTweet> prepare_all(const std::vector<RawTweet> &raw,
                                       const FeatureResources &res,
                                       const PrepareOptions &options) {
  std::vector<PreparedTweet> out;
  out.reserve(raw.size());
  for (const auto &r : raw)
    out.push_back(prepare_tweet(r, res, options));
  return out;
}

FeatureMatrix metadata_matrix(const std::vector<const PreparedTweet *> &tweets,
                              const MetadataSelection &selection) {
  FeatureMatrix m;
  m.reserve(tweets.size());
  for (const auto *t : tweets)
    m.push_back(extract_metadata(t->metadata, selection).values);
  return m;
}

Sample make_sample(const PreparedTweet &tweet, const Vocabulary &vocab,
                   const ModelConfig &config, const MinMaxStats &stats) {
  Sample s;
  s.token_ids = vocab.ids(tweet.seq.tokens);
  s.linguistic = tweet.linguistic;
  s.alpha = tweet.alpha;
  s.vad = tweet.vad;
  if (config.metadata_width() > 0)
    s.metadata = apply_minmax(
      extract_metadata(tweet.metadata, config.metadata_selection).values, stats);
  s.label = tweet.label ? static_cast<int>(*tweet.label) : -1;
  return s;
}

} // namespace ckgru
