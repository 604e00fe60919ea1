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

#include <memory>
#include <span>
#include <vector>

#include "hcf/event_log.hpp"
#include "hcf/history_index.hpp"

namespace hcf {

// One sampled BPR training entry. side == kUser means (t, u, item, negItem):
// the negative replaces the item and must avoid the user's history h^t_u.
// side == kItem means (t, user, item, negUser): the negative replaces the
// user and must avoid the item's history h^t_i.
struct TripletEntry {
  int day;
  int user;
  int item;
  int negative;
  Side side;
};

// Frozen per-day scoring view. Lets models precompute whatever they need
// for a fixed day (HCF builds its dynamic embedding tables once) so that a
// day's full candidate grid is scored at dot-product cost.
class DayScorer {
 public:
  virtual ~DayScorer() = default;
  virtual double score(int user, int item) const = 0;
};

// A recommendation model scoring (user, item) pairs at a given day.
// Implementations are immutable while scoring; training mutates parameters
// through the trainable surface below under a single writer.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual int numUsers() const = 0;
  virtual int numItems() const = 0;

  // Score at day `day`; histories may only use events strictly before it.
  // Throws std::out_of_range for ids outside the model's tables.
  virtual double score(const HistoryIndex& index, int user, int item, int day) const = 0;

  virtual std::unique_ptr<DayScorer> makeDayScorer(const HistoryIndex& index, int day,
                                                   const Perimeter& perimeter) const = 0;
};

// Gradient-trainable surface for models fit with the pairwise ranking loss.
// Parameters live in one flat vector so the optimizer, the snapshotting
// early-stopper and the finite-difference checker stay model-agnostic.
class BprModel : public Scorer {
 public:
  virtual std::span<double> parameters() = 0;
  virtual std::span<const double> parameters() const = 0;

  // Adds the exact gradient of -ln sigma(posScore - negScore) for `entry`
  // into `grad` (same layout as parameters()) and returns the loss value.
  virtual double entryLossAddGrad(const HistoryIndex& index, const TripletEntry& entry,
                                  std::span<double> grad) const = 0;

  // Loss only; used by finite-difference checks.
  virtual double entryLoss(const HistoryIndex& index, const TripletEntry& entry) const = 0;

  // Hash of the piecewise-linear region the entry's loss evaluation occupies
  // (the active-ReLU pattern). Finite-difference checks skip parameter steps
  // that leave the region, where central differences are undefined. Smooth
  // models return 0.
  virtual uint64_t regionHash(const HistoryIndex&, const TripletEntry&) const { return 0; }

  // The leading parameters() prefix holding embedding tables; the optional
  // embedding weight decay applies only to this range.
  virtual size_t embeddingParamCount() const = 0;
};

}  // namespace hcf
