// SPDX-License-Identifier: Apache-2.0

#include "ckgru/app/config.hpp"

#include <charconv>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include "ckgru/core/text_io.hpp"

namespace ckgru {

namespace {

std::string bool_text(bool b) { return b ? "true" : "false"; }

bool parse_bool(std::string_view v, const std::string &key) {
  const std::string l = to_lower_ascii(v);
  if (l == "true" || l == "yes" || l == "1")
    return true;
  if (l == "false" || l == "no" || l == "0")
    return false;
  throw ConfigError("config: " + key + " expects true or false, got '" +
                    std::string(v) + "'");
}

std::size_t parse_size(std::string_view v, const std::string &key) {
  long long x = 0;
  try {
    x = parse_int(v, "config key " + key);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  if (x < 0)
    throw ConfigError("config: " + key + " must be non-negative");
  return static_cast<std::size_t>(x);
}

double parse_real(std::string_view v, const std::string &key) {
  try {
    return parse_double(v, "config key " + key);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

struct Field {
  std::function<void(RunConfig &, std::string_view, const std::string &)> set;
  std::function<std::string(const RunConfig &)> get;
};

// Keys in serialization order.
const std::vector<std::pair<std::string, Field>> &fields() {
  static const auto *table = [] {
    auto *f = new std::vector<std::pair<std::string, Field>>;
    const auto size_field = [f](const std::string &key, auto member) {
      f->emplace_back(
        key, Field{[member](RunConfig &c, std::string_view v,
                            const std::string &k) { member(c) = parse_size(v, k); },
                   [member](const RunConfig &c) {
                     return std::to_string(member(const_cast<RunConfig &>(c)));
                   }});
    };
    const auto real_field = [f](const std::string &key, auto member) {
      f->emplace_back(
        key, Field{[member](RunConfig &c, std::string_view v,
                            const std::string &k) { member(c) = parse_real(v, k); },
                   [member](const RunConfig &c) {
                     return format_double(member(const_cast<RunConfig &>(c)));
                   }});
    };
    const auto bool_field = [f](const std::string &key, auto member) {
      f->emplace_back(
        key, Field{[member](RunConfig &c, std::string_view v,
                            const std::string &k) { member(c) = parse_bool(v, k); },
                   [member](const RunConfig &c) {
                     return bool_text(member(const_cast<RunConfig &>(c)));
                   }});
    };
    const auto path_field = [f](const std::string &key, auto member) {
      f->emplace_back(
        key, Field{[member](RunConfig &c, std::string_view v,
                            const std::string &) { member(c) = std::string(v); },
                   [member](const RunConfig &c) {
                     return member(const_cast<RunConfig &>(c));
                   }});
    };

    size_field("model.d_w", [](RunConfig &c) -> auto & { return c.model.d_w; });
    size_field("model.h", [](RunConfig &c) -> auto & { return c.model.h; });
    size_field("model.d_c", [](RunConfig &c) -> auto & { return c.model.d_c; });
    size_field("model.d_red", [](RunConfig &c) -> auto & { return c.model.d_red; });
    size_field("model.d_att", [](RunConfig &c) -> auto & { return c.model.d_att; });
    size_field("model.layers", [](RunConfig &c) -> auto & { return c.model.layers; });
    size_field("model.gcm_iterations",
               [](RunConfig &c) -> auto & { return c.model.gcm_iterations; });
    bool_field("model.gcm_residual",
               [](RunConfig &c) -> auto & { return c.model.gcm_residual; });
    f->emplace_back(
      "model.candidate_combine",
      Field{[](RunConfig &c, std::string_view v, const std::string &k) {
              if (v == "sum")
                c.model.candidate_combine = CandidateCombine::sum;
              else if (v == "mean")
                c.model.candidate_combine = CandidateCombine::mean;
              else
                throw ConfigError("config: " + k + " expects sum or mean");
            },
            [](const RunConfig &c) {
              return std::string(c.model.candidate_combine == CandidateCombine::sum
                                   ? "sum"
                                   : "mean");
            }});
    real_field("model.dropout", [](RunConfig &c) -> auto & { return c.model.dropout; });
    bool_field("model.dropout_between_layers",
               [](RunConfig &c) -> auto & { return c.model.dropout_between_layers; });
    size_field("model.pos_size", [](RunConfig &c) -> auto & { return c.model.pos_size; });
    size_field("model.dep_size", [](RunConfig &c) -> auto & { return c.model.dep_size; });
    bool_field("model.use_concepts",
               [](RunConfig &c) -> auto & { return c.model.use_concepts; });
    bool_field("model.use_vad", [](RunConfig &c) -> auto & { return c.model.use_vad; });
    bool_field("model.use_metadata",
               [](RunConfig &c) -> auto & { return c.model.use_metadata; });
    bool_field("model.use_attention",
               [](RunConfig &c) -> auto & { return c.model.use_attention; });
    bool_field("model.plain_bigru",
               [](RunConfig &c) -> auto & { return c.model.plain_bigru; });
    f->emplace_back(
      "model.metadata_selection",
      Field{[](RunConfig &c, std::string_view v, const std::string &k) {
              try {
                c.model.metadata_selection = MetadataSelection::parse(v);
              } catch (const std::invalid_argument &e) {
                throw ConfigError("config: " + k + ": " + e.what());
              }
            },
            [](const RunConfig &c) { return c.model.metadata_selection.to_string(); }});
    size_field("model.max_tokens", [](RunConfig &c) -> auto & { return c.max_tokens; });

    real_field("train.lr", [](RunConfig &c) -> auto & { return c.lr; });
    real_field("train.l2", [](RunConfig &c) -> auto & { return c.l2; });
    size_field("train.epochs", [](RunConfig &c) -> auto & { return c.epochs; });
    size_field("train.batch_size", [](RunConfig &c) -> auto & { return c.batch_size; });
    f->emplace_back("train.seed",
                    Field{[](RunConfig &c, std::string_view v, const std::string &k) {
                            std::uint64_t x = 0;
                            const auto [end, ec] =
                              std::from_chars(v.data(), v.data() + v.size(), x);
                            if (ec != std::errc() || end != v.data() + v.size())
                              throw ConfigError("config: " + k +
                                                " expects an unsigned integer");
                            c.seed = x;
                          },
                          [](const RunConfig &c) { return std::to_string(c.seed); }});
    size_field("train.folds", [](RunConfig &c) -> auto & { return c.folds; });
    f->emplace_back(
      "train.normalize_scope",
      Field{[](RunConfig &c, std::string_view v, const std::string &k) {
              if (v == "train_only")
                c.normalize_scope = NormalizeScope::train_only;
              else if (v == "global")
                c.normalize_scope = NormalizeScope::global;
              else
                throw ConfigError("config: " + k + " expects train_only or global");
            },
            [](const RunConfig &c) {
              return std::string(c.normalize_scope == NormalizeScope::global
                                   ? "global"
                                   : "train_only");
            }});
    real_field("train.beta1", [](RunConfig &c) -> auto & { return c.beta1; });
    real_field("train.beta2", [](RunConfig &c) -> auto & { return c.beta2; });
    real_field("train.adam_eps", [](RunConfig &c) -> auto & { return c.adam_eps; });

    path_field("resources.emoji_map",
               [](RunConfig &c) -> auto & { return c.resources.emoji_map; });
    path_field("resources.contractions",
               [](RunConfig &c) -> auto & { return c.resources.contractions; });
    path_field("resources.segmentation_dict",
               [](RunConfig &c) -> auto & { return c.resources.segmentation_dict; });
    path_field("resources.vad_lexicon",
               [](RunConfig &c) -> auto & { return c.resources.vad_lexicon; });
    path_field("resources.concept_lexicon",
               [](RunConfig &c) -> auto & { return c.resources.concept_lexicon; });
    path_field("resources.bing_positive",
               [](RunConfig &c) -> auto & { return c.resources.bing_positive; });
    path_field("resources.bing_negative",
               [](RunConfig &c) -> auto & { return c.resources.bing_negative; });
    path_field("resources.embeddings",
               [](RunConfig &c) -> auto & { return c.resources.embeddings; });
    path_field("data.dataset", [](RunConfig &c) -> auto & { return c.dataset; });
    return f;
  }();
  return *table;
}

const Field *find_field(const std::string &key) {
  for (const auto &[k, f] : fields())
    if (k == key)
      return &f;
  return nullptr;
}

void check(bool ok, const std::string &msg) {
  if (!ok)
    throw ConfigError("config: " + msg);
}

} // namespace

void RunConfig::validate() const {
  try {
    model.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  check(max_tokens >= 1 && max_tokens <= 100000,
        "model.max_tokens must be in [1, 100000]");
  check(lr > 0.0 && lr <= 10.0, "train.lr must be in (0, 10]");
  check(l2 >= 0.0 && l2 <= 10.0, "train.l2 must be in [0, 10]");
  check(epochs >= 1 && epochs <= 1000000, "train.epochs must be in [1, 1e6]");
  check(batch_size >= 1 && batch_size <= 1000000,
        "train.batch_size must be in [1, 1e6]");
  check(folds >= 2 && folds <= 1000, "train.folds must be in [2, 1000]");
  check(beta1 >= 0.0 && beta1 < 1.0, "train.beta1 must be in [0, 1)");
  check(beta2 >= 0.0 && beta2 < 1.0, "train.beta2 must be in [0, 1)");
  check(adam_eps > 0.0 && adam_eps <= 1.0, "train.adam_eps must be in (0, 1]");
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t;
  t.lr = lr;
  t.l2 = l2;
  t.epochs = epochs;
  t.batch_size = batch_size;
  t.seed = seed;
  t.adam = {beta1, beta2, adam_eps};
  return t;
}

ExperimentConfig RunConfig::experiment(const PretrainedEmbeddings *emb) const {
  ExperimentConfig e;
  e.model = model;
  e.train = train_config();
  e.folds = folds;
  e.normalize_scope = normalize_scope;
  e.embeddings = emb;
  return e;
}

PrepareOptions RunConfig::prepare_options() const {
  PrepareOptions o;
  o.max_tokens = max_tokens;
  o.pos_size = model.pos_size;
  o.dep_size = model.dep_size;
  o.d_c = model.d_c;
  return o;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::string section;
  const auto lines = split(text, '\n');
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string where = "config line " + std::to_string(n + 1);
    std::string_view line = trim(lines[n]);
    if (line.empty() || line.front() == '#' || line.front() == ';')
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "model" && section != "train" && section != "resources" &&
          section != "data")
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected key = value");
    const std::string name(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    const std::string key =
      name.find('.') == std::string::npos && !section.empty()
        ? section + "." + name
        : name;
    const Field *f = find_field(key);
    if (!f)
      throw ConfigError(where + ": unknown key '" + key + "'");
    f->set(c, value, key);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string &path) {
  RunConfig c = parse_config(read_file(path));
  const auto base = std::filesystem::path(path).parent_path();
  const auto resolve = [&](std::string &p) {
    if (!p.empty() && std::filesystem::path(p).is_relative())
      p = (base / p).lexically_normal().string();
  };
  for (std::string *p : {&c.resources.emoji_map, &c.resources.contractions,
                         &c.resources.segmentation_dict, &c.resources.vad_lexicon,
                         &c.resources.concept_lexicon, &c.resources.bing_positive,
                         &c.resources.bing_negative, &c.resources.embeddings,
                         &c.dataset})
    resolve(*p);
  return c;
}

std::string serialize_config(const RunConfig &c) {
  std::ostringstream out;
  std::string section;
  for (const auto &[key, f] : fields()) {
    const auto dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      if (!section.empty())
        out << '\n';
      out << '[' << s << "]\n";
      section = s;
    }
    out << key.substr(dot + 1) << " = " << f.get(c) << '\n';
  }
  return out.str();
}

} // namespace ckgru
