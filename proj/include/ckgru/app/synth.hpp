// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ckgru/app/config.hpp"
#include "ckgru/knowledge/concepts.hpp"
#include "ckgru/preprocess/types.hpp"

namespace ckgru {

/// Synthetic corpora with a known generating rule.
///  separable     one class keyword per tweet among label-free filler words
///  concept_task  two single-use invented words per tweet whose concept
///                vectors are a class prototype plus noise; the label is the
///                prototype closest (by dot product) to their mean vector
///  noise         random filler words, random labels
struct SynthOptions {
  std::string kind = "separable";
  std::size_t n = 32;
  std::uint64_t seed = 1;
  std::size_t d_c = 100;
  /// Per-coordinate standard deviation around the prototype (concept_task).
  double noise = 0.5;
};

struct SynthData {
  std::vector<RawTweet> tweets;
  /// Sorted by phrase.
  std::vector<std::pair<std::string, std::vector<double>>> concepts;
  /// concept_task: the three prototypes; empty otherwise.
  std::vector<std::vector<double>> prototypes;
  /// concept_task: the planted concept words of each tweet.
  std::vector<std::vector<std::string>> planted;
  /// separable: keywords of each class.
  std::vector<std::vector<std::string>> keywords;

  ConceptLexicon lexicon(std::size_t d_c) const;
};

/// Deterministic for a given option set. Throws std::invalid_argument for an
/// unknown kind, n < 3, or d_c < 3 with concept_task.
SynthData synthesize(const SynthOptions &options);

/// Label implied by the planted vectors (argmax of prototype projections of
/// their mean; ties to the lower class).
Label concept_task_label(const std::vector<const std::vector<double> *> &planted,
                         const std::vector<std::vector<double>> &prototypes);

/// Writes dataset.tsv, concepts.tsv and run.conf into `dir` (created when
/// missing). run.conf is `base` with the dataset, concept lexicon and d_c
/// filled in.
void write_synth(const std::string &dir, const SynthData &data,
                 const SynthOptions &options, RunConfig base);

} // namespace ckgru
