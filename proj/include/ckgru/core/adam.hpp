// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ckgru/core/param_set.hpp"

namespace ckgru {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One bias-corrected Adam update. L2 is applied the classic way: l2 * theta
/// is added to the gradient before the moment updates. Frozen entries and
/// entries absent from `grads` are left untouched.
void adam_step(ParamSet &params, const GradientMap &grads, double lr,
               double l2, const AdamOptions &options = {});

} // namespace ckgru
