// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace ckgru {

struct FeatureVector {
  std::vector<double> values;
  std::vector<std::string> schema;

  /// Throws std::logic_error when values and schema disagree in length.
  void validate() const;
};

} // namespace ckgru
