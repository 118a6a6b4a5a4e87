// SPDX-License-Identifier: Apache-2.0

#include "ckgru/app/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ckgru {

namespace {
constexpr std::string_view kMagic = "CKMODEL1";
} // namespace

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void save_model(const std::string &path, const RunConfig &config,
                const Model &model, const MinMaxStats &stats) {
  nlohmann::json header;
  header["config"] = serialize_config(config);
  header["vocabulary"] = model.vocabulary().tokens();
  header["vocab_hash"] = hash_hex(model.vocabulary().hash());
  header["minmax"] = {{"min", stats.min}, {"max", stats.max}};
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw CheckpointError("cannot write model " + path);
  out << kMagic << ' ' << text.size() << '\n' << text;
  write_params(out, model.params());
  if (!out)
    throw CheckpointError("write failed for model " + path);
}

SavedModel load_model(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CheckpointError("cannot read model " + path);
  std::string magic;
  std::size_t length = 0;
  in >> magic >> length;
  if (!in || magic != kMagic || in.get() != '\n')
    throw CheckpointError(path + ": not a model file");
  if (length > (std::size_t{1} << 31))
    throw CheckpointError(path + ": header too large");
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in)
    throw CheckpointError(path + ": truncated header");

  SavedModel saved;
  std::vector<std::string> tokens;
  try {
    const auto header = nlohmann::json::parse(text);
    saved.config = parse_config(header.at("config").get<std::string>());
    tokens = header.at("vocabulary").get<std::vector<std::string>>();
    saved.stats.min = header.at("minmax").at("min").get<std::vector<double>>();
    saved.stats.max = header.at("minmax").at("max").get<std::vector<double>>();
    if (tokens.empty() || tokens[0] != Vocabulary::kOovToken)
      throw CheckpointError(path + ": vocabulary must start with the OOV row");
    tokens.erase(tokens.begin());
    Vocabulary vocab(tokens);
    const std::string recorded = header.at("vocab_hash").get<std::string>();
    if (hash_hex(vocab.hash()) != recorded)
      throw CheckpointError(path + ": vocabulary hash mismatch (recorded " +
                            recorded + ", computed " + hash_hex(vocab.hash()) +
                            ")");
    if (saved.stats.min.size() != saved.stats.max.size() ||
        saved.stats.min.size() != saved.config.model.metadata_width())
      throw CheckpointError(path + ": min-max statistics do not match the "
                                   "metadata selection");
    ParamSet params = read_params(in);
    saved.model = std::make_unique<Model>(saved.config.model, std::move(vocab),
                                          std::move(params));
  } catch (const nlohmann::json::exception &e) {
    throw CheckpointError(path + ": bad header: " + e.what());
  } catch (const CheckpointError &) {
    throw;
  } catch (const std::exception &e) {
    throw CheckpointError(path + ": " + e.what());
  }
  return saved;
}

} // namespace ckgru
