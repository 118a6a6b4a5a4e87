// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <stdexcept>

#include "ckgru/core/param_set.hpp"

namespace ckgru {

class CheckpointError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Layout: "CKGRU1", then for each parameter in order
//   u32 name length, name bytes, u32 rank, u64 extent * rank,
//   f64 * product(extents)
// All integers and reals little-endian. Optimizer state is not stored.

void write_params(std::ostream &out, const ParamSet &params);
/// Reads parameters until end of stream.
ParamSet read_params(std::istream &in);

} // namespace ckgru
