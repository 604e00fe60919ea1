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

#include "hcf/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "hcf/errors.hpp"
#include "hcf/evaluation.hpp"
#include "hcf/rng.hpp"

namespace hcf {

std::vector<Positive> enumeratePositives(const EventLog& log) {
  std::vector<Positive> out;
  out.reserve(log.events().size());
  for (const auto& e : log.events()) out.push_back({e.day, e.user, e.item});
  return out;
}

NegativeSampler::NegativeSampler(const HistoryIndex& index, Perimeter perimeter,
                                 bool excludeSameDayPositives)
    : index_(index), perimeter_(std::move(perimeter)),
      excludeSameDay_(excludeSameDayPositives) {}

std::optional<int> NegativeSampler::draw(const std::vector<int>& pool,
                                         std::vector<int>& exclusion,
                                         std::mt19937_64& rng) {
  std::sort(exclusion.begin(), exclusion.end());
  exclusion.erase(std::unique(exclusion.begin(), exclusion.end()), exclusion.end());

  auto excluded = [&](int id) {
    return std::binary_search(exclusion.begin(), exclusion.end(), id);
  };

  // Histories are short, so rejection accepts quickly whenever the pool is
  // comfortably larger than the exclusion set; otherwise enumerate the
  // complement exactly.
  if (pool.size() > 2 * exclusion.size()) {
    while (true) {
      const int id = pool[boundedRand(rng, pool.size())];
      if (!excluded(id)) return id;
    }
  }
  std::vector<int> complement;
  complement.reserve(pool.size());
  for (int id : pool) {
    if (!excluded(id)) complement.push_back(id);
  }
  if (complement.empty()) return std::nullopt;
  return complement[boundedRand(rng, complement.size())];
}

std::optional<TripletEntry> NegativeSampler::sample(const Positive& pos,
                                                    std::mt19937_64& rng) {
  const Side side = boundedRand(rng, 2) == 0 ? Side::kUser : Side::kItem;

  std::vector<int> exclusion;
  const std::vector<int>* pool = nullptr;
  if (side == Side::kUser) {
    const auto hist = index_.userHistory(pos.user, pos.day);
    exclusion.assign(hist.begin(), hist.end());
    if (excludeSameDay_) {
      const auto today = index_.userEventsOn(pos.user, pos.day);
      exclusion.insert(exclusion.end(), today.begin(), today.end());
    }
    pool = &perimeter_.items;
  } else {
    const auto hist = index_.itemHistory(pos.item, pos.day);
    exclusion.assign(hist.begin(), hist.end());
    if (excludeSameDay_) {
      const auto today = index_.itemEventsOn(pos.item, pos.day);
      exclusion.insert(exclusion.end(), today.begin(), today.end());
    }
    pool = &perimeter_.users;
  }

  const auto negative = draw(*pool, exclusion, rng);
  if (!negative) {
    ++stats_.skipped;
    return std::nullopt;
  }
  if (side == Side::kUser) {
    ++stats_.userSide;
  } else {
    ++stats_.itemSide;
  }
  return TripletEntry{pos.day, pos.user, pos.item, *negative, side};
}

namespace {

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(std::span<double> params, std::span<const double> grad) = 0;
};

class SgdOptimizer : public Optimizer {
 public:
  explicit SgdOptimizer(double lr) : lr_(lr) {}
  void step(std::span<double> params, std::span<const double> grad) override {
    for (size_t k = 0; k < params.size(); ++k) params[k] -= lr_ * grad[k];
  }

 private:
  double lr_;
};

class AdamOptimizer : public Optimizer {
 public:
  AdamOptimizer(double lr, size_t paramCount)
      : lr_(lr), m_(paramCount, 0.0), v_(paramCount, 0.0) {}

  void step(std::span<double> params, std::span<const double> grad) override {
    ++t_;
    const double b1c = 1.0 - std::pow(kBeta1, t_);
    const double b2c = 1.0 - std::pow(kBeta2, t_);
    for (size_t k = 0; k < params.size(); ++k) {
      m_[k] = kBeta1 * m_[k] + (1.0 - kBeta1) * grad[k];
      v_[k] = kBeta2 * v_[k] + (1.0 - kBeta2) * grad[k] * grad[k];
      const double mHat = m_[k] / b1c;
      const double vHat = v_[k] / b2c;
      params[k] -= lr_ * mHat / (std::sqrt(vHat) + kEps);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  double lr_;
  int t_ = 0;
  std::vector<double> m_, v_;
};

struct EpochOutcome {
  double trainLoss = 0;
};

// Shared epoch/early-stopping loop. trainEpoch runs one training epoch;
// validate scores the current parameters. In fixed-epoch mode validation is
// skipped and the final parameters are kept.
FitResult runFitLoop(std::span<double> params,
                     const std::function<EpochOutcome(int)>& trainEpoch,
                     const std::function<MetricsReport()>& validate, int patienceEpochs,
                     int maxEpochs, int fixedEpochs) {
  if (fixedEpochs < 0) throw ConfigError("fixed epoch count must be >= 0");
  if (fixedEpochs == 0 && maxEpochs < 1) throw ConfigError("max epochs must be >= 1");
  if (fixedEpochs == 0 && patienceEpochs < 0) throw ConfigError("patience must be >= 0");

  const bool fixed = fixedEpochs > 0;
  const int epochCap = fixed ? fixedEpochs : maxEpochs;

  FitResult result;
  double bestScore = -std::numeric_limits<double>::infinity();
  std::vector<double> bestSnapshot;
  int sinceBest = 0;

  for (int epoch = 1; epoch <= epochCap; ++epoch) {
    const auto epochStart = std::chrono::steady_clock::now();
    const EpochOutcome outcome = trainEpoch(epoch);
    if (!std::isfinite(outcome.trainLoss)) {
      throw DivergenceError("training loss is not finite; lower the learning rate");
    }

    TraceRow row;
    row.epoch = epoch;
    row.trainLoss = outcome.trainLoss;

    if (fixed) {
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  epochStart)
                        .count();
      result.trace.push_back(row);
      result.bestEpoch = epoch;
      continue;
    }

    const MetricsReport report = validate();
    row.validMapUser = report.mapUser;
    row.validMapItem = report.mapItem;
    row.validMapSym = report.mapSym;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                epochStart)
                      .count();
    result.trace.push_back(row);

    if (report.mapSym > bestScore) {
      bestScore = report.mapSym;
      bestSnapshot.assign(params.begin(), params.end());
      result.bestEpoch = epoch;
      result.bestValidMapUser = report.mapUser;
      result.bestValidMapItem = report.mapItem;
      result.bestValidMapSym = report.mapSym;
      sinceBest = 0;
    } else {
      ++sinceBest;
    }
    if (sinceBest >= patienceEpochs) break;
  }

  if (!fixed && !bestSnapshot.empty()) {
    std::copy(bestSnapshot.begin(), bestSnapshot.end(), params.begin());
  }
  return result;
}

void checkTemporalSeparation(const EventLog& trainLog, const EventLog& validLog) {
  if (trainLog.events().empty()) throw DataError("training log is empty");
  if (validLog.events().empty()) throw DataError("validation log is empty");
  if (validLog.dayRange().first <= trainLog.dayRange().last) {
    throw DataError("validation events must lie strictly after the training window");
  }
  if (validLog.numUsers() != trainLog.numUsers() ||
      validLog.numItems() != trainLog.numItems()) {
    throw DataError("training and validation logs must share one id space");
  }
}

}  // namespace

FitResult fitBpr(BprModel& model, const EventLog& trainLog, const EventLog* validLog,
                 const FitConfig& cfg) {
  if (cfg.lr <= 0) throw ConfigError("learning rate must be > 0");
  if (cfg.batchSize < 1) throw ConfigError("batch size must be >= 1");
  if (cfg.negativesPerPositive < 1) throw ConfigError("negatives per positive must be >= 1");
  if (cfg.historyCapacity < 1) throw ConfigError("history capacity must be >= 1");
  if (trainLog.events().empty()) throw DataError("training log is empty");
  if (cfg.fixedEpochs == 0) {
    if (validLog == nullptr) throw ConfigError("early stopping needs a validation log");
    checkTemporalSeparation(trainLog, *validLog);
  }

  const HistoryIndex trainIndex(trainLog, cfg.historyCapacity);
  const Perimeter perimeter = perimeterOf(trainLog);
  NegativeSampler sampler(trainIndex, perimeter, cfg.excludeSameDayPositives);

  std::optional<EventLog> mergedLog;
  std::optional<HistoryIndex> validIndex;
  if (cfg.fixedEpochs == 0) {
    mergedLog.emplace(mergeLogs(trainLog, *validLog));
    validIndex.emplace(*mergedLog, cfg.historyCapacity);
  }

  const std::vector<Positive> positives = enumeratePositives(trainLog);
  const size_t paramCount = model.parameters().size();
  const size_t embeddingCount = model.embeddingParamCount();

  std::unique_ptr<Optimizer> optimizer;
  if (cfg.optimizer == FitConfig::Optimizer::kAdam) {
    optimizer = std::make_unique<AdamOptimizer>(cfg.lr, paramCount);
  } else {
    optimizer = std::make_unique<SgdOptimizer>(cfg.lr);
  }

  std::vector<double> grad(paramCount, 0.0);
  std::vector<size_t> order(positives.size());

  auto trainEpoch = [&](int epoch) {
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    auto shuffleRng = makeEngine(deriveSeed(cfg.seed, static_cast<uint64_t>(epoch), 0));
    std::shuffle(order.begin(), order.end(), shuffleRng);

    double lossSum = 0;
    int64_t lossCount = 0;
    size_t at = 0;
    while (at < order.size()) {
      const size_t batchEnd = std::min(at + static_cast<size_t>(cfg.batchSize),
                                       order.size());
      std::fill(grad.begin(), grad.end(), 0.0);
      double batchLoss = 0;
      int batchEntries = 0;
      for (; at < batchEnd; ++at) {
        // Substream per shuffled slot, so results do not depend on how the
        // batch is split across workers.
        auto entryRng = makeEngine(deriveSeed(cfg.seed, static_cast<uint64_t>(epoch),
                                              static_cast<uint64_t>(at) + 1));
        for (int rep = 0; rep < cfg.negativesPerPositive; ++rep) {
          const auto entry = sampler.sample(positives[order[at]], entryRng);
          if (!entry) continue;
          batchLoss += model.entryLossAddGrad(trainIndex, *entry, grad);
          ++batchEntries;
        }
      }
      if (batchEntries == 0) continue;
      if (!std::isfinite(batchLoss)) {
        throw DivergenceError("training loss is not finite; lower the learning rate");
      }
      const double scale = 1.0 / static_cast<double>(batchEntries);
      for (auto& g : grad) g *= scale;
      if (cfg.weightDecay > 0) {
        auto params = model.parameters();
        for (size_t k = 0; k < embeddingCount; ++k) {
          grad[k] += cfg.weightDecay * params[k];
        }
      }
      optimizer->step(model.parameters(), grad);
      lossSum += batchLoss;
      lossCount += batchEntries;
    }
    EpochOutcome outcome;
    outcome.trainLoss = lossCount ? lossSum / static_cast<double>(lossCount) : 0.0;
    return outcome;
  };

  auto validate = [&] {
    return evaluate(model, *validIndex, *validLog, validLog->dayRange(), perimeter);
  };

  FitResult result = runFitLoop(model.parameters(), trainEpoch, validate,
                                cfg.patienceEpochs, cfg.maxEpochs, cfg.fixedEpochs);
  result.sampler = sampler.stats();
  return result;
}

FitResult fitImplicit(MfModel& model, const EventLog& trainLog, const EventLog* validLog,
                      const ImplicitFitConfig& cfg) {
  if (cfg.lr <= 0) throw ConfigError("learning rate must be > 0");
  if (cfg.stepsPerEpoch < 1) throw ConfigError("steps per epoch must be >= 1");
  if (trainLog.events().empty()) throw DataError("training log is empty");
  if (cfg.fixedEpochs == 0) {
    if (validLog == nullptr) throw ConfigError("early stopping needs a validation log");
    checkTemporalSeparation(trainLog, *validLog);
  }

  const Perimeter perimeter = perimeterOf(trainLog);

  std::optional<EventLog> mergedLog;
  std::optional<HistoryIndex> validIndex;
  if (cfg.fixedEpochs == 0) {
    mergedLog.emplace(mergeLogs(trainLog, *validLog));
    validIndex.emplace(*mergedLog, 1);  // MF scoring never reads histories
  }

  auto trainEpoch = [&](int) {
    EpochOutcome outcome;
    for (int s = 0; s < cfg.stepsPerEpoch; ++s) {
      outcome.trainLoss = mfImplicitStep(model, trainLog, cfg.lr);
    }
    return outcome;
  };
  auto validate = [&] {
    return evaluate(model, *validIndex, *validLog, validLog->dayRange(), perimeter);
  };

  return runFitLoop(model.parameters(), trainEpoch, validate, cfg.patienceEpochs,
                    cfg.maxEpochs, cfg.fixedEpochs);
}

}  // namespace hcf
