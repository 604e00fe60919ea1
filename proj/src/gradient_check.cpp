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

#include "hcf/gradient_check.hpp"

#include <algorithm>
#include <cmath>

#include "hcf/errors.hpp"

namespace hcf {

GradCheckResult checkGradients(std::span<double> params,
                               const std::function<double(std::span<double>)>& lossAndGrad,
                               const std::function<double()>& loss, double epsilon,
                               const std::function<uint64_t()>& region) {
  if (epsilon < 1e-7 || epsilon > 1e-3) {
    throw ConfigError("finite-difference epsilon must be in [1e-7, 1e-3]");
  }
  std::vector<double> analytic(params.size(), 0.0);
  const double base = lossAndGrad(analytic);
  const double floor = 1e-6 * std::max(1.0, std::abs(base));
  const uint64_t baseRegion = region ? region() : 0;

  GradCheckResult result;
  for (size_t k = 0; k < params.size(); ++k) {
    const double saved = params[k];
    params[k] = saved + epsilon;
    const bool sameUp = !region || region() == baseRegion;
    const double up = loss();
    params[k] = saved - epsilon;
    const bool sameDown = sameUp && (!region || region() == baseRegion);
    const double down = loss();
    params[k] = saved;
    if (!sameDown) {
      ++result.skippedParams;
      continue;
    }
    const double numeric = (up - down) / (2.0 * epsilon);
    const double rel = std::abs(analytic[k] - numeric) /
                       std::max(floor, std::abs(analytic[k]) + std::abs(numeric));
    result.maxRelError = std::max(result.maxRelError, rel);
    ++result.checkedParams;
  }
  return result;
}

GradCheckResult checkBprGradients(BprModel& model, const HistoryIndex& index,
                                  const std::vector<TripletEntry>& batch,
                                  double epsilon) {
  auto lossAndGrad = [&](std::span<double> grad) {
    double total = 0;
    for (const auto& entry : batch) total += model.entryLossAddGrad(index, entry, grad);
    return total;
  };
  auto loss = [&] {
    double total = 0;
    for (const auto& entry : batch) total += model.entryLoss(index, entry);
    return total;
  };
  auto region = [&] {
    uint64_t h = 0;
    for (const auto& entry : batch) {
      h = h * 0x100000001b3ull ^ model.regionHash(index, entry);
    }
    return h;
  };
  return checkGradients(model.parameters(), lossAndGrad, loss, epsilon, region);
}

GradCheckResult checkImplicitGradients(MfModel& model, const EventLog& log,
                                       double epsilon) {
  auto lossAndGrad = [&](std::span<double> grad) {
    return model.implicitLossAddGrad(log, grad);
  };
  auto loss = [&] { return model.implicitLoss(log); };
  return checkGradients(model.parameters(), lossAndGrad, loss, epsilon);
}

}  // namespace hcf
