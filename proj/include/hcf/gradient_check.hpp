/*
 * Copyright 2026 the HCF authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hcf/baselines.hpp"
#include "hcf/event_log.hpp"
#include "hcf/history_index.hpp"
#include "hcf/scorer.hpp"

namespace hcf {

struct GradCheckResult {
  double maxRelError = 0;
  size_t checkedParams = 0;
  size_t skippedParams = 0;  // perturbation left the piecewise-linear region
};

// Central-difference check of an analytic gradient. `lossAndGrad` fills a
// zeroed gradient buffer and returns the loss; `loss` evaluates the loss at
// the current parameters. Every parameter is perturbed by +-epsilon;
// relative error is |a-n| / max(floor, |a|+|n|) where the floor,
// 1e-6 * max(1, |loss|), absorbs finite-difference roundoff so that
// near-cancelled gradient sums are not misread as errors. When `region` is
// provided, parameters whose perturbation changes the region hash (a ReLU
// flipping) are skipped: the loss is not differentiable across the step
// there, so a central difference carries no information.
GradCheckResult checkGradients(std::span<double> params,
                               const std::function<double(std::span<double>)>& lossAndGrad,
                               const std::function<double()>& loss, double epsilon = 1e-5,
                               const std::function<uint64_t()>& region = {});

// Summed pairwise loss over a fixed triplet batch.
GradCheckResult checkBprGradients(BprModel& model, const HistoryIndex& index,
                                  const std::vector<TripletEntry>& batch,
                                  double epsilon = 1e-5);

// Full confidence-weighted squared objective on `log`.
GradCheckResult checkImplicitGradients(MfModel& model, const EventLog& log,
                                       double epsilon = 1e-5);

}  // namespace hcf
