// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ckgru/core/param_set.hpp"
#include "ckgru/core/rng.hpp"
#include "ckgru/features/metadata.hpp"
#include "ckgru/model/attention.hpp"
#include "ckgru/model/cell.hpp"
#include "ckgru/model/vocabulary.hpp"

namespace ckgru {

struct ModelConfig {
  std::size_t d_w = 50;
  std::size_t h = 50;
  std::size_t d_c = 100;
  /// Width of the linear reduction before fusion; 0 skips the reduction.
  std::size_t d_red = 32;
  /// Query/key width of the attention; 0 means 2h.
  std::size_t d_att = 0;
  std::size_t layers = 2;
  std::size_t gcm_iterations = 2;
  bool gcm_residual = true;
  CandidateCombine candidate_combine = CandidateCombine::sum;
  double dropout = 0.5;
  /// Dropout on the attention output feeding layer 2, besides embeddings.
  bool dropout_between_layers = true;
  std::size_t pos_size = 17;
  std::size_t dep_size = 10;

  bool use_concepts = true;
  bool use_vad = true;
  bool use_metadata = true;
  bool use_attention = true;
  /// Concept pathway zeroed and frozen, alpha suppressed.
  bool plain_bigru = false;
  MetadataSelection metadata_selection;

  std::size_t input_width() const { return d_w + pos_size + dep_size; }
  std::size_t attention_width() const { return d_att == 0 ? 2 * h : d_att; }
  std::size_t vad_width() const;
  std::size_t metadata_width() const;
  std::size_t fused_width() const;
  bool concepts_active() const { return use_concepts && !plain_bigru; }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const ModelConfig &, const ModelConfig &) = default;
};

/// A featurized tweet ready for the network.
struct Sample {
  std::vector<std::size_t> token_ids;
  /// k x (pos_size + dep_size)
  Tensor linguistic;
  /// k x d_c
  Tensor alpha;
  std::vector<double> vad;
  /// Normalized metadata restricted to the selection.
  std::vector<double> metadata;
  /// Class index, -1 when unlabeled.
  int label = -1;

  std::size_t length() const { return token_ids.size(); }
};

struct HeadParams {
  std::optional<Var> W_red, b_red;
  Var W_out, b_out;
};

/// summary -> optional linear reduction -> [reduced || vad || metadata] ->
/// 3 logits. Empty vad/metadata Vars are skipped.
Var fuse_and_classify(Var summary, std::optional<Var> vad,
                      std::optional<Var> metadata, const HeadParams &head);

struct ForwardResult {
  Var logits;
  /// Attention weights per iteration; empty when attention is off.
  std::vector<Var> attention;
};

/// Full network on one sample.
ForwardResult forward(Graph &graph, const BoundParams &params,
                      const ModelConfig &config, const Sample &sample,
                      bool training, Rng &rng);

/// Mean cross-entropy over a batch; logits are stacked into [B x 3].
Var batch_loss(Graph &graph, const BoundParams &params,
               const ModelConfig &config, std::span<const Sample *const> batch,
               bool training, Rng &rng);

/// Index of the largest logit; ties go to the lowest index.
int argmax_class(std::span<const double> logits);

class Model {
public:
  /// Fresh initialization. With `pretrained`, the vocabulary and embedding
  /// table come from the file and the table is frozen.
  Model(ModelConfig config, Vocabulary vocabulary, Rng &rng,
        const PretrainedEmbeddings *pretrained = nullptr);
  /// Restores a trained model; parameter names and shapes are checked.
  Model(ModelConfig config, Vocabulary vocabulary, ParamSet params);

  const ModelConfig &config() const { return config_; }
  const Vocabulary &vocabulary() const { return vocab_; }
  ParamSet &params() { return params_; }
  const ParamSet &params() const { return params_; }

  /// Evaluation-mode logits.
  std::vector<double> logits(const Sample &sample) const;
  int predict(const Sample &sample) const;
  /// Evaluation-mode attention weights, one vector per iteration.
  std::vector<std::vector<double>> attention(const Sample &sample) const;

private:
  ModelConfig config_;
  Vocabulary vocab_;
  ParamSet params_;
};

/// Parameter layout of a model: names and shapes in creation order.
std::vector<std::pair<std::string, Shape>>
parameter_layout(const ModelConfig &config, std::size_t vocab_size);

/// Zeroes and freezes the concept pathway of every cell.
void disable_concept_pathway(ParamSet &params, const ModelConfig &config);

} // namespace ckgru
