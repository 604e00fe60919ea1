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

#include <cstdint>

#include "hcf/event_log.hpp"

namespace hcf {

// Non-stationary implicit-feedback generator. User and item latent vectors
// follow independent Gaussian random walks; each day a Poisson number of
// events is drawn, each picking a uniform user and then an item from
// softmax(temperature * dot(userLatent, itemLatents)).
//
// The latent correlation between day 0 and day t decays as
// 1/sqrt(1 + t * latentDim * driftStd^2), so preferences lose half their
// correlation after ~3 / (latentDim * driftStd^2) days.
struct SyntheticConfig {
  int numUsers = 200;
  int numItems = 500;
  int latentDim = 8;
  double driftStd = 0.079;   // ~60-day half-life with latentDim 8
  double eventsPerDay = 120; // Poisson mean
  int numDays = 360;
  double temperature = 6.0;  // softmax sharpness
  uint64_t seed = 1;

  // Throws ConfigError on invalid fields.
  void validate() const;

  bool operator==(const SyntheticConfig&) const = default;
};

// Deterministic for a given config (fixed draw order, single RNG stream).
EventLog generateSynthetic(const SyntheticConfig& cfg);

}  // namespace hcf
