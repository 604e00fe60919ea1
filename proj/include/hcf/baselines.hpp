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

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "hcf/event_log.hpp"
#include "hcf/scorer.hpp"

namespace hcf {

// Scores a pair by its observed interaction count in the fitted log.
// Unseen pairs score 0.
class HistoricalModel : public Scorer {
 public:
  explicit HistoricalModel(const EventLog& log);

  static HistoricalModel fromCounts(int numUsers, int numItems,
                                    const std::vector<std::array<double, 3>>& rows);

  int numUsers() const override { return numUsers_; }
  int numItems() const override { return numItems_; }

  double count(int user, int item) const;
  // (user, item, count) rows sorted by (user, item).
  std::vector<std::array<double, 3>> countRows() const;
  double score(const HistoryIndex& index, int user, int item, int day) const override;
  std::unique_ptr<DayScorer> makeDayScorer(const HistoryIndex& index, int day,
                                           const Perimeter& perimeter) const override;

 private:
  HistoricalModel(int numUsers, int numItems) : numUsers_(numUsers), numItems_(numItems) {}

  int numUsers_ = 0;
  int numItems_ = 0;
  std::unordered_map<int64_t, double> counts_;
};

// Static matrix factorization. Two variants share the factor layout:
//   kBpr      pairwise ranking loss with the symmetric sampler
//   kImplicit confidence-weighted squared loss over the dense user x item grid
class MfModel : public BprModel {
 public:
  enum class Objective { kBpr, kImplicit };

  struct Config {
    int numUsers = 0;
    int numItems = 0;
    int dim = 32;
    Objective objective = Objective::kBpr;
    double lambdaReg = 0.01;
    double alphaConf = 40.0;
    uint64_t seed = 1;
  };

  explicit MfModel(const Config& cfg);

  const Config& config() const { return cfg_; }
  int numUsers() const override { return cfg_.numUsers; }
  int numItems() const override { return cfg_.numItems; }
  int dim() const { return cfg_.dim; }

  std::span<const double> parameters() const override { return params_; }
  std::span<double> parameters() override { return params_; }
  size_t embeddingParamCount() const override { return params_.size(); }

  std::span<const double> userFactor(int u) const;
  std::span<double> userFactor(int u);
  std::span<const double> itemFactor(int i) const;
  std::span<double> itemFactor(int i);

  // Histories are ignored: the score is time-independent.
  double score(const HistoryIndex& index, int user, int item, int day) const override;
  std::unique_ptr<DayScorer> makeDayScorer(const HistoryIndex& index, int day,
                                           const Perimeter& perimeter) const override;

  double entryLossAddGrad(const HistoryIndex& index, const TripletEntry& entry,
                          std::span<double> grad) const override;
  double entryLoss(const HistoryIndex& index, const TripletEntry& entry) const override;

  // Confidence-weighted squared loss over every (user, item) pair:
  //   sum c_ui (p_ui - x_u . y_i)^2 + lambda (|x|^2 + |y|^2)
  // with p_ui = 1 iff the pair appears in `log`, c_ui = 1 + alphaConf *
  // count(u, i). Gradient is accumulated into `grad` when given.
  double implicitLoss(const EventLog& log) const;
  double implicitLossAddGrad(const EventLog& log, std::span<double> grad) const;

 private:
  double pairScore(int user, int item) const;

  Config cfg_;
  std::vector<double> params_;  // user factors then item factors, row-major
};

// One full-batch gradient descent step on the implicit objective.
// Returns the loss at the pre-step parameters.
double mfImplicitStep(MfModel& model, const EventLog& log, double lr);

}  // namespace hcf
