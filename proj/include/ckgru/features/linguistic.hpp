// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "ckgru/core/tensor.hpp"
#include "ckgru/preprocess/types.hpp"

namespace ckgru {

/// k x (pos_size + dep_size): POS one-hot followed by dependency one-hot.
/// Throws std::out_of_range for a tag id outside its tagset.
Tensor linguistic_onehot(const TokenSequence &seq, std::size_t pos_size,
                         std::size_t dep_size);

} // namespace ckgru
