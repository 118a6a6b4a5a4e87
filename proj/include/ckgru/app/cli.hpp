// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace ckgru {

/// Entry point of the ckgru tool. Failures print a single "ERROR: ..." line
/// on `err` and return nonzero; no arguments prints usage and returns 2.
int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err);

} // namespace ckgru
