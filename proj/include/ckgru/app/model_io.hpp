// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "ckgru/app/config.hpp"
#include "ckgru/core/checkpoint.hpp"
#include "ckgru/model/network.hpp"

namespace ckgru {

/// A trained model with everything inference needs besides the lexicons.
struct SavedModel {
  RunConfig config;
  std::unique_ptr<Model> model;
  MinMaxStats stats;
};

// File layout: a text line "CKMODEL1 <n>", then n bytes of JSON
//   {"config": <config text>, "vocabulary": [...], "vocab_hash": "<hex>",
//    "minmax": {"min": [...], "max": [...]}}
// then the parameter block written by write_params.

void save_model(const std::string &path, const RunConfig &config,
                const Model &model, const MinMaxStats &stats);
/// Throws CheckpointError for a malformed file or when the stored
/// vocabulary does not hash to the recorded value.
SavedModel load_model(const std::string &path);

std::string hash_hex(std::uint64_t h);

} // namespace ckgru
