// SPDX-License-Identifier: Apache-2.0

#include "ckgru/model/network.hpp"

#include <stdexcept>

#include "ckgru/core/ops.hpp"

namespace ckgru {

using namespace ops;

namespace {

std::string layer_prefix(std::size_t layer, bool forward_dir) {
  return "l" + std::to_string(layer) + (forward_dir ? ".fwd" : ".bwd");
}

CellDims cell_dims(const ModelConfig &c, std::size_t layer) {
  return {layer == 1 ? c.input_width() : 2 * c.h, c.h, c.d_c};
}

bool has_attention(const ModelConfig &c) {
  return c.use_attention && c.layers >= 2;
}

void require(bool ok, const std::string &what) {
  if (!ok)
    throw std::invalid_argument("model config: " + what);
}

} // namespace

std::size_t ModelConfig::vad_width() const { return use_vad ? 9 : 0; }

std::size_t ModelConfig::metadata_width() const {
  return use_metadata ? metadata_selection.size() : 0;
}

std::size_t ModelConfig::fused_width() const {
  return (d_red == 0 ? 2 * h : d_red) + vad_width() + metadata_width();
}

void ModelConfig::validate() const {
  require(d_w >= 1 && d_w <= 4096, "d_w must be in [1, 4096]");
  require(h >= 1 && h <= 4096, "h must be in [1, 4096]");
  require(d_c <= 4096, "d_c must be in [0, 4096]");
  require(d_red <= 4096, "d_red must be in [0, 4096]");
  require(d_att <= 4096, "d_att must be in [0, 4096]");
  require(layers >= 1 && layers <= 4, "layers must be in [1, 4]");
  require(gcm_iterations >= 1 && gcm_iterations <= 16,
          "gcm_iterations must be in [1, 16]");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
  require(pos_size >= 1 && dep_size >= 1, "tagset sizes must be positive");
}

Var fuse_and_classify(Var summary, std::optional<Var> vad,
                      std::optional<Var> metadata, const HeadParams &head) {
  Var reduced = summary;
  if (head.W_red)
    reduced = affine(*head.W_red, summary, *head.b_red);
  std::vector<Var> parts{reduced};
  if (vad)
    parts.push_back(*vad);
  if (metadata)
    parts.push_back(*metadata);
  const Var fused = parts.size() == 1 ? reduced : concat(parts);
  if (fused.shape()[0] != head.W_out.shape()[1])
    throw ShapeError("fuse_and_classify: fused width " +
                     std::to_string(fused.shape()[0]) + " but output layer " +
                     shape_string(head.W_out.shape()));
  return affine(head.W_out, fused, head.b_out);
}

ForwardResult forward(Graph &g, const BoundParams &p, const ModelConfig &c,
                      const Sample &s, bool training, Rng &rng) {
  const std::size_t k = s.length();
  if (k == 0)
    throw std::invalid_argument("forward: empty sample");
  if (s.linguistic.shape != Shape{k, c.pos_size + c.dep_size})
    throw ShapeError("forward: linguistic features " +
                     shape_string(s.linguistic.shape) + " for " +
                     std::to_string(k) + " tokens");

  const Var emb = gather_rows(p["embedding"], s.token_ids);
  Var x = concat({emb, g.constant(s.linguistic)}, 1);
  x = dropout(x, c.dropout, rng, training);

  Tensor alpha_value = Tensor::zeros({k, c.d_c});
  if (c.concepts_active()) {
    if (s.alpha.shape != alpha_value.shape)
      throw ShapeError("forward: concept matrix " + shape_string(s.alpha.shape) +
                       ", expected " + shape_string(alpha_value.shape));
    alpha_value = s.alpha;
  }
  const Var alpha = g.constant(std::move(alpha_value));

  ForwardResult out;
  Var states = x;
  Var summary;
  for (std::size_t layer = 1; layer <= c.layers; ++layer) {
    if (layer == 2) {
      if (has_attention(c)) {
        auto att = gcm_attend(states, {p["gcm.W_q"], p["gcm.W_k"], p["gcm.W_v"]},
                              {c.gcm_iterations, c.gcm_residual});
        states = att.attended;
        out.attention = std::move(att.weights);
      }
      if (c.dropout_between_layers)
        states = dropout(states, c.dropout, rng, training);
    }
    const auto bi = bigru_forward(states, alpha,
                                  bind_cell(p, layer_prefix(layer, true)),
                                  bind_cell(p, layer_prefix(layer, false)),
                                  c.candidate_combine);
    states = bi.states;
    summary = bi.summary;
  }

  HeadParams head{std::nullopt, std::nullopt, p["head.W_out"], p["head.b_out"]};
  if (c.d_red > 0) {
    head.W_red = p["head.W_red"];
    head.b_red = p["head.b_red"];
  }
  std::optional<Var> vad, meta;
  if (c.use_vad) {
    if (s.vad.size() != 9)
      throw ShapeError("forward: VAD vector has " + std::to_string(s.vad.size()) +
                       " entries");
    vad = g.constant(Tensor::vector(s.vad));
  }
  if (c.metadata_width() > 0) {
    if (s.metadata.size() != c.metadata_width())
      throw ShapeError("forward: metadata vector has " +
                       std::to_string(s.metadata.size()) + " entries, expected " +
                       std::to_string(c.metadata_width()));
    meta = g.constant(Tensor::vector(s.metadata));
  }
  out.logits = fuse_and_classify(summary, vad, meta, head);
  return out;
}

Var batch_loss(Graph &g, const BoundParams &p, const ModelConfig &c,
               std::span<const Sample *const> batch, bool training, Rng &rng) {
  if (batch.empty())
    throw std::invalid_argument("batch_loss: empty batch");
  std::vector<Var> logits;
  std::vector<int> labels;
  logits.reserve(batch.size());
  for (const Sample *s : batch) {
    logits.push_back(forward(g, p, c, *s, training, rng).logits);
    labels.push_back(s->label);
  }
  return cross_entropy(stack(logits), labels);
}

int argmax_class(std::span<const double> logits) {
  if (logits.empty())
    throw std::invalid_argument("argmax_class: no logits");
  std::size_t best = 0;
  for (std::size_t i = 1; i < logits.size(); ++i)
    if (logits[i] > logits[best])
      best = i;
  return static_cast<int>(best);
}

std::vector<std::pair<std::string, Shape>>
parameter_layout(const ModelConfig &c, std::size_t vocab_size) {
  ParamSet probe;
  Rng rng(0);
  probe.add("embedding", Tensor::zeros({vocab_size, c.d_w}));
  for (std::size_t layer = 1; layer <= c.layers; ++layer)
    for (bool fwd : {true, false})
      add_cell_params(probe, layer_prefix(layer, fwd), cell_dims(c, layer), rng);
  std::vector<std::pair<std::string, Shape>> out;
  for (const auto &e : probe.entries())
    out.emplace_back(e.name, e.value.shape);
  const std::size_t m = 2 * c.h;
  if (has_attention(c)) {
    out.emplace_back("gcm.W_q", Shape{c.attention_width(), m});
    out.emplace_back("gcm.W_k", Shape{c.attention_width(), m});
    out.emplace_back("gcm.W_v", Shape{m, m});
  }
  if (c.d_red > 0) {
    out.emplace_back("head.W_red", Shape{c.d_red, m});
    out.emplace_back("head.b_red", Shape{c.d_red});
  }
  out.emplace_back("head.W_out", Shape{3, c.fused_width()});
  out.emplace_back("head.b_out", Shape{3});
  return out;
}

void disable_concept_pathway(ParamSet &params, const ModelConfig &c) {
  for (std::size_t layer = 1; layer <= c.layers; ++layer)
    for (bool fwd : {true, false})
      for (const auto &name : concept_param_names(layer_prefix(layer, fwd))) {
        auto &e = params.entry(name);
        std::fill(e.value.values.begin(), e.value.values.end(), 0.0);
        e.frozen = true;
      }
}

Model::Model(ModelConfig config, Vocabulary vocabulary, Rng &rng,
             const PretrainedEmbeddings *pretrained)
  : config_(std::move(config)), vocab_(std::move(vocabulary)) {
  config_.validate();
  if (pretrained) {
    if (pretrained->table.cols() != config_.d_w)
      throw std::invalid_argument(
        "model: embedding file has dimension " +
        std::to_string(pretrained->table.cols()) + " but d_w is " +
        std::to_string(config_.d_w));
    vocab_ = pretrained->vocabulary;
    params_.add("embedding", pretrained->table, true);
  } else {
    params_.add("embedding", uniform_init(vocab_.size(), config_.d_w, rng));
  }
  for (std::size_t layer = 1; layer <= config_.layers; ++layer)
    for (bool fwd : {true, false})
      add_cell_params(params_, layer_prefix(layer, fwd),
                      cell_dims(config_, layer), rng);
  const std::size_t m = 2 * config_.h;
  if (has_attention(config_)) {
    params_.add("gcm.W_q", uniform_init(config_.attention_width(), m, rng));
    params_.add("gcm.W_k", uniform_init(config_.attention_width(), m, rng));
    params_.add("gcm.W_v", uniform_init(m, m, rng));
  }
  if (config_.d_red > 0) {
    params_.add("head.W_red", uniform_init(config_.d_red, m, rng));
    params_.add("head.b_red", Tensor::zeros({config_.d_red}));
  }
  params_.add("head.W_out", uniform_init(3, config_.fused_width(), rng));
  params_.add("head.b_out", Tensor::zeros({3}));
  if (config_.plain_bigru)
    disable_concept_pathway(params_, config_);
}

Model::Model(ModelConfig config, Vocabulary vocabulary, ParamSet params)
  : config_(std::move(config)), vocab_(std::move(vocabulary)),
    params_(std::move(params)) {
  config_.validate();
  const auto layout = parameter_layout(config_, vocab_.size());
  if (layout.size() != params_.size())
    throw std::invalid_argument("model: checkpoint has " +
                                std::to_string(params_.size()) +
                                " parameters, configuration needs " +
                                std::to_string(layout.size()));
  for (const auto &[name, shape] : layout) {
    if (!params_.contains(name))
      throw std::invalid_argument("model: checkpoint lacks parameter '" + name +
                                  "'");
    if (params_.get(name).shape != shape)
      throw std::invalid_argument("model: parameter '" + name + "' has shape " +
                                  shape_string(params_.get(name).shape) +
                                  ", expected " + shape_string(shape));
  }
  if (config_.plain_bigru)
    disable_concept_pathway(params_, config_);
}

std::vector<double> Model::logits(const Sample &sample) const {
  Graph g;
  const BoundParams bound(g, params_);
  Rng rng(0);
  return forward(g, bound, config_, sample, false, rng).logits.value().values;
}

int Model::predict(const Sample &sample) const {
  return argmax_class(logits(sample));
}

std::vector<std::vector<double>> Model::attention(const Sample &sample) const {
  Graph g;
  const BoundParams bound(g, params_);
  Rng rng(0);
  std::vector<std::vector<double>> out;
  for (const Var &w : forward(g, bound, config_, sample, false, rng).attention)
    out.push_back(w.value().values);
  return out;
}

} // namespace ckgru
