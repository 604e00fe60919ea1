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

#include "hcf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hcf/errors.hpp"

namespace hcf {

void SyntheticConfig::validate() const {
  if (numUsers < 1 || numItems < 1 || latentDim < 1 || numDays < 1) {
    throw ConfigError("synthetic counts must be >= 1");
  }
  if (driftStd < 0) throw ConfigError("driftStd must be >= 0");
  if (eventsPerDay <= 0) throw ConfigError("eventsPerDay must be > 0");
  if (temperature <= 0) throw ConfigError("temperature must be > 0");
}

EventLog generateSynthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> stdNormal(0.0, 1.0);

  const int d = cfg.latentDim;
  const double initScale = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<double> users(static_cast<size_t>(cfg.numUsers) * d);
  std::vector<double> items(static_cast<size_t>(cfg.numItems) * d);
  for (auto& v : users) v = stdNormal(rng) * initScale;
  for (auto& v : items) v = stdNormal(rng) * initScale;

  std::uniform_int_distribution<int> pickUser(0, cfg.numUsers - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::poisson_distribution<int> eventCount(cfg.eventsPerDay);

  std::vector<Interaction> events;
  events.reserve(static_cast<size_t>(cfg.eventsPerDay * cfg.numDays * 1.2) + 16);
  std::vector<double> logits(cfg.numItems);

  for (int day = 0; day < cfg.numDays; ++day) {
    if (day > 0 && cfg.driftStd > 0) {
      for (auto& v : users) v += stdNormal(rng) * cfg.driftStd;
      for (auto& v : items) v += stdNormal(rng) * cfg.driftStd;
    }
    const int k = eventCount(rng);
    for (int e = 0; e < k; ++e) {
      const int u = pickUser(rng);
      const double* uv = &users[static_cast<size_t>(u) * d];
      double maxLogit = -1e300;
      for (int i = 0; i < cfg.numItems; ++i) {
        const double* iv = &items[static_cast<size_t>(i) * d];
        double dot = 0;
        for (int l = 0; l < d; ++l) dot += uv[l] * iv[l];
        logits[i] = cfg.temperature * dot;
        maxLogit = std::max(maxLogit, logits[i]);
      }
      // Inverse-CDF draw over the softmax; one uniform per event.
      double total = 0;
      for (int i = 0; i < cfg.numItems; ++i) {
        logits[i] = std::exp(logits[i] - maxLogit);
        total += logits[i];
      }
      const double target = unit(rng) * total;
      double cum = 0;
      int chosen = cfg.numItems - 1;
      for (int i = 0; i < cfg.numItems; ++i) {
        cum += logits[i];
        if (cum > target) {
          chosen = i;
          break;
        }
      }
      events.push_back({day, u, chosen});
    }
  }

  std::vector<std::string> userNames(cfg.numUsers), itemNames(cfg.numItems);
  for (int u = 0; u < cfg.numUsers; ++u) userNames[u] = "u" + std::to_string(u);
  for (int i = 0; i < cfg.numItems; ++i) itemNames[i] = "i" + std::to_string(i);
  return EventLog(std::move(events), std::move(userNames), std::move(itemNames));
}

}  // namespace hcf
