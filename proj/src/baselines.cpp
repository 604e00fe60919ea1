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

#include "hcf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hcf/errors.hpp"
#include "hcf/numeric.hpp"

namespace hcf {

namespace {

int64_t pairKey(int user, int item, int numItems) {
  return static_cast<int64_t>(user) * numItems + item;
}

void checkPair(int user, int item, int numUsers, int numItems) {
  if (user < 0 || user >= numUsers) throw std::out_of_range("user id outside model");
  if (item < 0 || item >= numItems) throw std::out_of_range("item id outside model");
}

// Static scorer over precomputed values, restricted to a perimeter.
class TableDayScorer : public DayScorer {
 public:
  TableDayScorer(const Scorer& model, const HistoryIndex& index, int day,
                 const Perimeter& perimeter)
      : model_(model),
        index_(index),
        day_(day),
        userSet_(model.numUsers(), 0),
        itemSet_(model.numItems(), 0) {
    for (int u : perimeter.users) userSet_[u] = 1;
    for (int i : perimeter.items) itemSet_[i] = 1;
  }

  double score(int user, int item) const override {
    if (user < 0 || static_cast<size_t>(user) >= userSet_.size() || !userSet_[user]) {
      throw std::out_of_range("user outside scoring perimeter");
    }
    if (item < 0 || static_cast<size_t>(item) >= itemSet_.size() || !itemSet_[item]) {
      throw std::out_of_range("item outside scoring perimeter");
    }
    return model_.score(index_, user, item, day_);
  }

 private:
  const Scorer& model_;
  const HistoryIndex& index_;
  int day_;
  std::vector<char> userSet_, itemSet_;
};

}  // namespace

HistoricalModel::HistoricalModel(const EventLog& log)
    : numUsers_(log.numUsers()), numItems_(log.numItems()) {
  for (const auto& e : log.events()) {
    counts_[pairKey(e.user, e.item, numItems_)] += 1.0;
  }
}

HistoricalModel HistoricalModel::fromCounts(
    int numUsers, int numItems, const std::vector<std::array<double, 3>>& rows) {
  HistoricalModel model(numUsers, numItems);
  for (const auto& row : rows) {
    const int user = static_cast<int>(row[0]);
    const int item = static_cast<int>(row[1]);
    checkPair(user, item, numUsers, numItems);
    if (row[2] < 1) throw DataError("stored interaction counts must be >= 1");
    model.counts_[pairKey(user, item, numItems)] = row[2];
  }
  return model;
}

std::vector<std::array<double, 3>> HistoricalModel::countRows() const {
  std::vector<std::array<double, 3>> rows;
  rows.reserve(counts_.size());
  for (const auto& [key, c] : counts_) {
    const int user = static_cast<int>(key / numItems_);
    const int item = static_cast<int>(key % numItems_);
    rows.push_back({static_cast<double>(user), static_cast<double>(item), c});
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

double HistoricalModel::count(int user, int item) const {
  checkPair(user, item, numUsers_, numItems_);
  auto it = counts_.find(pairKey(user, item, numItems_));
  return it == counts_.end() ? 0.0 : it->second;
}

double HistoricalModel::score(const HistoryIndex&, int user, int item, int) const {
  return count(user, item);
}

std::unique_ptr<DayScorer> HistoricalModel::makeDayScorer(const HistoryIndex& index,
                                                          int day,
                                                          const Perimeter& perimeter) const {
  return std::make_unique<TableDayScorer>(*this, index, day, perimeter);
}

MfModel::MfModel(const Config& cfg) : cfg_(cfg) {
  if (cfg.numUsers < 1 || cfg.numItems < 1) throw ConfigError("model needs users and items");
  if (cfg.dim < 1) throw ConfigError("factor dim must be >= 1");
  if (cfg.lambdaReg < 0) throw ConfigError("lambda must be >= 0");
  params_.assign((static_cast<size_t>(cfg.numUsers) + cfg.numItems) * cfg.dim, 0.0);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> init(0.0, 0.1);
  for (auto& v : params_) v = init(rng);
}

std::span<const double> MfModel::userFactor(int u) const {
  checkPair(u, 0, cfg_.numUsers, cfg_.numItems);
  return {params_.data() + static_cast<size_t>(u) * cfg_.dim,
          static_cast<size_t>(cfg_.dim)};
}
std::span<double> MfModel::userFactor(int u) {
  checkPair(u, 0, cfg_.numUsers, cfg_.numItems);
  return {params_.data() + static_cast<size_t>(u) * cfg_.dim,
          static_cast<size_t>(cfg_.dim)};
}
std::span<const double> MfModel::itemFactor(int i) const {
  checkPair(0, i, cfg_.numUsers, cfg_.numItems);
  return {params_.data() + (static_cast<size_t>(cfg_.numUsers) + i) * cfg_.dim,
          static_cast<size_t>(cfg_.dim)};
}
std::span<double> MfModel::itemFactor(int i) {
  checkPair(0, i, cfg_.numUsers, cfg_.numItems);
  return {params_.data() + (static_cast<size_t>(cfg_.numUsers) + i) * cfg_.dim,
          static_cast<size_t>(cfg_.dim)};
}

double MfModel::pairScore(int user, int item) const {
  checkPair(user, item, cfg_.numUsers, cfg_.numItems);
  return dot(userFactor(user), itemFactor(item));
}

double MfModel::score(const HistoryIndex&, int user, int item, int) const {
  return pairScore(user, item);
}

std::unique_ptr<DayScorer> MfModel::makeDayScorer(const HistoryIndex& index, int day,
                                                  const Perimeter& perimeter) const {
  return std::make_unique<TableDayScorer>(*this, index, day, perimeter);
}

double MfModel::entryLossAddGrad(const HistoryIndex&, const TripletEntry& entry,
                                 std::span<double> grad) const {
  const int d = cfg_.dim;
  const bool userSide = entry.side == Side::kUser;
  const int anchorId = userSide ? entry.user : entry.item;
  const int posId = userSide ? entry.item : entry.user;
  const int negId = entry.negative;

  const auto xa = userSide ? userFactor(anchorId) : itemFactor(anchorId);
  const auto xp = userSide ? itemFactor(posId) : userFactor(posId);
  const auto xn = userSide ? itemFactor(negId) : userFactor(negId);

  const double margin = dot(xa, xp) - dot(xa, xn);
  const double g = sigmoid(margin) - 1.0;

  const size_t userBase = 0;
  const size_t itemBase = static_cast<size_t>(cfg_.numUsers) * d;
  const size_t aOff = (userSide ? userBase : itemBase) + static_cast<size_t>(anchorId) * d;
  const size_t pOff = (userSide ? itemBase : userBase) + static_cast<size_t>(posId) * d;
  const size_t nOff = (userSide ? itemBase : userBase) + static_cast<size_t>(negId) * d;

  for (int l = 0; l < d; ++l) {
    grad[aOff + l] += g * (xp[l] - xn[l]);
    grad[pOff + l] += g * xa[l];
    grad[nOff + l] += -g * xa[l];
  }
  return softplus(-margin);
}

double MfModel::entryLoss(const HistoryIndex&, const TripletEntry& entry) const {
  const bool userSide = entry.side == Side::kUser;
  const double posScore = pairScore(entry.user, entry.item);
  const double negScore = userSide ? pairScore(entry.user, entry.negative)
                                   : pairScore(entry.negative, entry.item);
  return bprLoss(posScore, negScore);
}

double MfModel::implicitLoss(const EventLog& log) const {
  return implicitLossAddGrad(log, {});
}

double MfModel::implicitLossAddGrad(const EventLog& log, std::span<double> grad) const {
  if (log.numUsers() > cfg_.numUsers || log.numItems() > cfg_.numItems) {
    throw DataError("log ids exceed model shape");
  }
  const int d = cfg_.dim;
  const bool wantGrad = !grad.empty();

  std::vector<std::unordered_map<int, double>> countsByUser(cfg_.numUsers);
  for (const auto& e : log.events()) countsByUser[e.user][e.item] += 1.0;

  const size_t itemBase = static_cast<size_t>(cfg_.numUsers) * d;
  double loss = 0;
  std::vector<double> row(cfg_.numItems, 0.0);
  for (int u = 0; u < cfg_.numUsers; ++u) {
    const auto xu = userFactor(u);
    for (const auto& [i, r] : countsByUser[u]) row[i] = r;
    for (int i = 0; i < cfg_.numItems; ++i) {
      const auto yi = itemFactor(i);
      const double r = row[i];
      const double p = r > 0 ? 1.0 : 0.0;
      const double c = 1.0 + cfg_.alphaConf * r;
      const double e = p - dot(xu, yi);
      loss += c * e * e;
      if (wantGrad) {
        const double coef = -2.0 * c * e;
        for (int l = 0; l < d; ++l) {
          grad[static_cast<size_t>(u) * d + l] += coef * yi[l];
          grad[itemBase + static_cast<size_t>(i) * d + l] += coef * xu[l];
        }
      }
    }
    for (const auto& [i, r] : countsByUser[u]) row[i] = 0.0;
  }

  for (size_t k = 0; k < params_.size(); ++k) {
    loss += cfg_.lambdaReg * params_[k] * params_[k];
    if (wantGrad) grad[k] += 2.0 * cfg_.lambdaReg * params_[k];
  }
  return loss;
}

double mfImplicitStep(MfModel& model, const EventLog& log, double lr) {
  if (model.config().objective != MfModel::Objective::kImplicit) {
    throw ConfigError("implicit step requires the implicit objective");
  }
  std::vector<double> grad(model.parameters().size(), 0.0);
  const double loss = model.implicitLossAddGrad(log, grad);
  if (!std::isfinite(loss)) {
    throw DivergenceError("implicit loss is not finite; lower the learning rate");
  }
  auto params = model.parameters();
  for (size_t k = 0; k < grad.size(); ++k) params[k] -= lr * grad[k];
  return loss;
}

}  // namespace hcf
