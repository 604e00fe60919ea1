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
#include <optional>
#include <random>
#include <vector>

#include "hcf/baselines.hpp"
#include "hcf/event_log.hpp"
#include "hcf/history_index.hpp"
#include "hcf/scorer.hpp"

namespace hcf {

struct Positive {
  int day = 0;
  int user = 0;
  int item = 0;
};

// One entry per event occurrence, duplicates preserved, in log order.
// Callers shuffle per epoch.
std::vector<Positive> enumeratePositives(const EventLog& log);

struct SamplerStats {
  int64_t userSide = 0;
  int64_t itemSide = 0;
  int64_t skipped = 0;  // exclusion set covered the whole candidate pool
};

// Symmetric negative sampler. For a positive (t, u, i) it flips a fair coin:
// user side draws a negative item uniformly from the perimeter items minus
// the user's history at day t, item side draws a negative user minus the
// item's history. Same-day positives are NOT excluded unless
// excludeSameDayPositives is set.
class NegativeSampler {
 public:
  NegativeSampler(const HistoryIndex& index, Perimeter perimeter,
                  bool excludeSameDayPositives = false);

  std::optional<TripletEntry> sample(const Positive& pos, std::mt19937_64& rng);
  const SamplerStats& stats() const { return stats_; }

 private:
  std::optional<int> draw(const std::vector<int>& pool, std::vector<int>& exclusion,
                          std::mt19937_64& rng);

  const HistoryIndex& index_;
  Perimeter perimeter_;
  bool excludeSameDay_;
  SamplerStats stats_;
};

struct FitConfig {
  enum class Optimizer { kAdam, kSgd };

  Optimizer optimizer = Optimizer::kAdam;
  double lr = 1e-3;
  int batchSize = 256;
  int negativesPerPositive = 1;
  int patienceEpochs = 5;
  int maxEpochs = 200;
  // > 0: run exactly this many epochs with no validation or early stopping
  // (used when re-fitting with a previously selected epoch count).
  int fixedEpochs = 0;
  double weightDecay = 0.0;  // L2 pull on embedding parameters
  // Exclusion-set length n for the sampler; keep equal to the model's
  // history capacity so sampling and pooling see the same history.
  int historyCapacity = 20;
  bool excludeSameDayPositives = false;
  uint64_t seed = 1;
};

struct TraceRow {
  int epoch = 0;  // 1-based
  double trainLoss = 0;
  double validMapUser = 0;
  double validMapItem = 0;
  double validMapSym = 0;
  double seconds = 0;
};

struct FitResult {
  std::vector<TraceRow> trace;
  int bestEpoch = 0;  // 1-based; epochs actually kept in the model
  double bestValidMapUser = 0;
  double bestValidMapItem = 0;
  double bestValidMapSym = 0;
  SamplerStats sampler;
};

// Minibatch BPR training with early stopping on validation symmetrized mAP.
// The training history index is built on trainLog alone; validation scoring
// sees trainLog plus validation events strictly before each query day.
// validLog must lie strictly after trainLog in time; it may be null only
// when cfg.fixedEpochs > 0.
FitResult fitBpr(BprModel& model, const EventLog& trainLog, const EventLog* validLog,
                 const FitConfig& cfg);

struct ImplicitFitConfig {
  double lr = 2e-5;
  int stepsPerEpoch = 10;
  int patienceEpochs = 5;
  int maxEpochs = 200;
  int fixedEpochs = 0;
};

// Full-batch gradient descent on the confidence-weighted squared loss, with
// the same early-stopping protocol as fitBpr.
FitResult fitImplicit(MfModel& model, const EventLog& trainLog, const EventLog* validLog,
                      const ImplicitFitConfig& cfg);

}  // namespace hcf
