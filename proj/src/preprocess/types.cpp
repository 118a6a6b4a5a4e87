// SPDX-License-Identifier: Apache-2.0

#include "ckgru/preprocess/types.hpp"

#include <stdexcept>

#include "ckgru/core/text_io.hpp"

namespace ckgru {

std::optional<Label> parse_label(std::string_view s) {
  const std::string l = to_lower_ascii(trim(s));
  if (l == "positive")
    return Label::positive;
  if (l == "negative")
    return Label::negative;
  if (l == "neutral")
    return Label::neutral;
  return std::nullopt;
}

std::string_view label_name(Label label) {
  switch (label) {
  case Label::positive:
    return "positive";
  case Label::negative:
    return "negative";
  case Label::neutral:
    return "neutral";
  }
  throw std::invalid_argument("label_name: bad label value");
}

void TokenSequence::validate() const {
  if (tokens.empty())
    throw std::logic_error("token sequence is empty");
  if (pos_tags.size() != tokens.size() || dep_tags.size() != tokens.size() ||
      provenance.size() != tokens.size())
    throw std::logic_error("token sequence: " + std::to_string(tokens.size()) +
                           " tokens but " + std::to_string(pos_tags.size()) +
                           " pos, " + std::to_string(dep_tags.size()) +
                           " dep, " + std::to_string(provenance.size()) +
                           " provenance entries");
  for (const auto &t : tokens) {
    if (t.empty())
      throw std::logic_error("token sequence: empty token");
    if (t.find_first_of(" \t\n\r\f\v") != std::string::npos)
      throw std::logic_error("token sequence: whitespace inside token '" + t +
                             "'");
  }
}

} // namespace ckgru
