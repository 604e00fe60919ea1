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

#include "hcf/hcf_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hcf/errors.hpp"
#include "hcf/numeric.hpp"

namespace hcf {

void poolEmbeddings(std::span<const double> table, int dim, std::span<const int> ids,
                    std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (ids.empty()) return;
  for (int id : ids) {
    const double* row = table.data() + static_cast<size_t>(id) * dim;
    for (int l = 0; l < dim; ++l) out[l] += row[l];
  }
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (int l = 0; l < dim; ++l) out[l] *= inv;
}

// Per-entry forward state for one block application: the two input
// channels plus every layer's pre- and post-activation, all (channels x d).
struct HcfModel::BlockCache {
  std::vector<double> input;
  std::vector<std::vector<double>> preAct;
  std::vector<std::vector<double>> postAct;
};

HcfModel::HcfModel(const Config& cfg) : cfg_(cfg) {
  if (cfg.numUsers < 1 || cfg.numItems < 1) throw ConfigError("model needs users and items");
  if (cfg.dim < 1) throw ConfigError("embedding dim must be >= 1");
  if (cfg.historyCapacity < 1) throw ConfigError("history capacity must be >= 1");

  // Channel plan: 2 inputs (static, history) -> hidden... -> 1 output.
  int in = 2;
  for (int h : cfg.hiddenChannels) {
    if (h < 1) throw ConfigError("hidden channel counts must be >= 1");
    layerIn_.push_back(in);
    layerOut_.push_back(h);
    in = h;
  }
  layerIn_.push_back(in);
  layerOut_.push_back(1);

  blockParamCount_ = 0;
  for (int k = 0; k < numLayers(); ++k) {
    layerWOff_.push_back(blockParamCount_);
    blockParamCount_ += static_cast<size_t>(layerIn_[k]) * layerOut_[k];
    layerBOff_.push_back(blockParamCount_);
    blockParamCount_ += static_cast<size_t>(layerOut_[k]);
  }
  const size_t tableCount =
      (static_cast<size_t>(cfg.numUsers) + cfg.numItems) * cfg.dim;
  blockOff_[0] = tableCount;
  blockOff_[1] = tableCount + blockParamCount_;
  params_.assign(tableCount + 2 * blockParamCount_, 0.0);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> embeddingInit(0.0, 0.1);
  for (size_t k = 0; k < tableCount; ++k) params_[k] = embeddingInit(rng);
  for (Side side : {Side::kUser, Side::kItem}) {
    for (int k = 0; k < numLayers(); ++k) {
      const double limit = std::sqrt(6.0 / (layerIn_[k] + layerOut_[k]));
      std::uniform_real_distribution<double> glorot(-limit, limit);
      auto w = layerWeights(side, k);
      for (auto& v : w) v = glorot(rng);
      // biases stay zero
    }
  }
}

size_t HcfModel::userRowOffset(int u) const {
  if (u < 0 || u >= cfg_.numUsers) throw std::out_of_range("user id outside model");
  return static_cast<size_t>(u) * cfg_.dim;
}

size_t HcfModel::itemRowOffset(int i) const {
  if (i < 0 || i >= cfg_.numItems) throw std::out_of_range("item id outside model");
  return (static_cast<size_t>(cfg_.numUsers) + i) * cfg_.dim;
}

size_t HcfModel::weightOffset(Side side, int layer) const {
  return blockOff_[side == Side::kUser ? 0 : 1] + layerWOff_[layer];
}

size_t HcfModel::biasOffset(Side side, int layer) const {
  return blockOff_[side == Side::kUser ? 0 : 1] + layerBOff_[layer];
}

std::span<const double> HcfModel::userEmbedding(int u) const {
  return {params_.data() + userRowOffset(u), static_cast<size_t>(cfg_.dim)};
}
std::span<double> HcfModel::userEmbedding(int u) {
  return {params_.data() + userRowOffset(u), static_cast<size_t>(cfg_.dim)};
}
std::span<const double> HcfModel::itemEmbedding(int i) const {
  return {params_.data() + itemRowOffset(i), static_cast<size_t>(cfg_.dim)};
}
std::span<double> HcfModel::itemEmbedding(int i) {
  return {params_.data() + itemRowOffset(i), static_cast<size_t>(cfg_.dim)};
}
std::span<double> HcfModel::layerWeights(Side side, int layer) {
  return {params_.data() + weightOffset(side, layer),
          static_cast<size_t>(layerIn_[layer]) * layerOut_[layer]};
}
std::span<const double> HcfModel::layerWeights(Side side, int layer) const {
  return {params_.data() + weightOffset(side, layer),
          static_cast<size_t>(layerIn_[layer]) * layerOut_[layer]};
}
std::span<double> HcfModel::layerBias(Side side, int layer) {
  return {params_.data() + biasOffset(side, layer), static_cast<size_t>(layerOut_[layer])};
}
std::span<const double> HcfModel::layerBias(Side side, int layer) const {
  return {params_.data() + biasOffset(side, layer), static_cast<size_t>(layerOut_[layer])};
}

void HcfModel::blockForwardCached(Side blockSide, std::span<const double> staticVec,
                                  std::span<const double> historyVec,
                                  BlockCache& cache) const {
  const int d = cfg_.dim;
  cache.input.resize(2 * static_cast<size_t>(d));
  std::copy(staticVec.begin(), staticVec.end(), cache.input.begin());
  std::copy(historyVec.begin(), historyVec.end(), cache.input.begin() + d);
  cache.preAct.resize(numLayers());
  cache.postAct.resize(numLayers());

  const double* z = cache.input.data();
  for (int k = 0; k < numLayers(); ++k) {
    const int in = layerIn_[k], out = layerOut_[k];
    const auto w = layerWeights(blockSide, k);
    const auto b = layerBias(blockSide, k);
    auto& a = cache.preAct[k];
    a.assign(static_cast<size_t>(out) * d, 0.0);
    for (int r = 0; r < out; ++r) {
      double* aRow = a.data() + static_cast<size_t>(r) * d;
      for (int c = 0; c < in; ++c) {
        const double wrc = w[static_cast<size_t>(r) * in + c];
        const double* zRow = z + static_cast<size_t>(c) * d;
        for (int l = 0; l < d; ++l) aRow[l] += wrc * zRow[l];
      }
      for (int l = 0; l < d; ++l) aRow[l] += b[r];
    }
    auto& post = cache.postAct[k];
    post = a;
    if (k + 1 < numLayers()) {  // hidden layers: ReLU; output layer: identity
      for (auto& v : post) v = v > 0 ? v : 0.0;
    }
    z = post.data();
  }
}

void HcfModel::blockForward(Side blockSide, std::span<const double> staticVec,
                            std::span<const double> historyVec,
                            std::span<double> out) const {
  thread_local BlockCache cache;
  blockForwardCached(blockSide, staticVec, historyVec, cache);
  const auto& last = cache.postAct.back();
  std::copy(last.begin(), last.end(), out.begin());
}

void HcfModel::blockBackward(Side blockSide, const BlockCache& cache,
                             std::span<const double> gradOut, std::span<double> grad,
                             std::span<double> dStatic, std::span<double> dHistory) const {
  const int d = cfg_.dim;
  thread_local std::vector<double> delta, nextDelta, dPre;
  delta.assign(gradOut.begin(), gradOut.end());  // dLoss/d(output), 1 x d

  for (int k = numLayers() - 1; k >= 0; --k) {
    const int in = layerIn_[k], out = layerOut_[k];
    const auto w = layerWeights(blockSide, k);
    const size_t wOff = weightOffset(blockSide, k);
    const size_t bOff = biasOffset(blockSide, k);
    const double* zPrev = k == 0 ? cache.input.data() : cache.postAct[k - 1].data();

    dPre.assign(delta.begin(), delta.end());
    if (k + 1 < numLayers()) {  // ReLU derivative on hidden layers
      const auto& a = cache.preAct[k];
      for (size_t idx = 0; idx < dPre.size(); ++idx) {
        if (a[idx] <= 0) dPre[idx] = 0;
      }
    }

    for (int r = 0; r < out; ++r) {
      const double* dRow = dPre.data() + static_cast<size_t>(r) * d;
      double dbSum = 0;
      for (int l = 0; l < d; ++l) dbSum += dRow[l];
      grad[bOff + r] += dbSum;
      for (int c = 0; c < in; ++c) {
        const double* zRow = zPrev + static_cast<size_t>(c) * d;
        double dwSum = 0;
        for (int l = 0; l < d; ++l) dwSum += dRow[l] * zRow[l];
        grad[wOff + static_cast<size_t>(r) * in + c] += dwSum;
      }
    }

    nextDelta.assign(static_cast<size_t>(in) * d, 0.0);
    for (int c = 0; c < in; ++c) {
      double* nRow = nextDelta.data() + static_cast<size_t>(c) * d;
      for (int r = 0; r < out; ++r) {
        const double wrc = w[static_cast<size_t>(r) * in + c];
        const double* dRow = dPre.data() + static_cast<size_t>(r) * d;
        for (int l = 0; l < d; ++l) nRow[l] += wrc * dRow[l];
      }
    }
    delta.swap(nextDelta);
  }

  for (int l = 0; l < d; ++l) {
    dStatic[l] = delta[l];
    dHistory[l] = delta[static_cast<size_t>(d) + l];
  }
}

void HcfModel::dynamicEmbedding(const HistoryIndex& index, Side side, int id, int day,
                                std::span<double> out) const {
  const int d = cfg_.dim;
  thread_local std::vector<double> pooled;
  pooled.resize(d);
  if (side == Side::kUser) {
    const auto hist = index.userHistory(id, day);
    // A user's history members are items.
    const std::span<const double> itemTable{params_.data() + itemRowOffset(0),
                                            static_cast<size_t>(cfg_.numItems) * d};
    poolEmbeddings(itemTable, d, hist, pooled);
    blockForward(Side::kUser, userEmbedding(id), pooled, out);
  } else {
    const auto hist = index.itemHistory(id, day);
    const std::span<const double> userTable{params_.data(),
                                            static_cast<size_t>(cfg_.numUsers) * d};
    poolEmbeddings(userTable, d, hist, pooled);
    blockForward(Side::kItem, itemEmbedding(id), pooled, out);
  }
}

double HcfModel::score(const HistoryIndex& index, int user, int item, int day) const {
  const int d = cfg_.dim;
  thread_local std::vector<double> xu, xi;
  xu.resize(d);
  xi.resize(d);
  dynamicEmbedding(index, Side::kUser, user, day, xu);
  dynamicEmbedding(index, Side::kItem, item, day, xi);
  return dot(xu, xi);
}

namespace {

class HcfDayScorer : public DayScorer {
 public:
  HcfDayScorer(int numUsers, int numItems, int dim)
      : dim_(dim),
        userVecs_(static_cast<size_t>(numUsers) * dim),
        itemVecs_(static_cast<size_t>(numItems) * dim),
        userSet_(numUsers, 0),
        itemSet_(numItems, 0) {}

  std::span<double> userRow(int u) { return {userVecs_.data() + static_cast<size_t>(u) * dim_, static_cast<size_t>(dim_)}; }
  std::span<double> itemRow(int i) { return {itemVecs_.data() + static_cast<size_t>(i) * dim_, static_cast<size_t>(dim_)}; }
  void markUser(int u) { userSet_[u] = 1; }
  void markItem(int i) { itemSet_[i] = 1; }

  double score(int user, int item) const override {
    if (user < 0 || static_cast<size_t>(user) >= userSet_.size() || !userSet_[user]) {
      throw std::out_of_range("user outside scoring perimeter");
    }
    if (item < 0 || static_cast<size_t>(item) >= itemSet_.size() || !itemSet_[item]) {
      throw std::out_of_range("item outside scoring perimeter");
    }
    const double* a = userVecs_.data() + static_cast<size_t>(user) * dim_;
    const double* b = itemVecs_.data() + static_cast<size_t>(item) * dim_;
    double s = 0;
    for (int l = 0; l < dim_; ++l) s += a[l] * b[l];
    return s;
  }

 private:
  int dim_;
  std::vector<double> userVecs_, itemVecs_;
  std::vector<char> userSet_, itemSet_;
};

}  // namespace

std::unique_ptr<DayScorer> HcfModel::makeDayScorer(const HistoryIndex& index, int day,
                                                   const Perimeter& perimeter) const {
  auto out = std::make_unique<HcfDayScorer>(cfg_.numUsers, cfg_.numItems, cfg_.dim);
  for (int u : perimeter.users) {
    dynamicEmbedding(index, Side::kUser, u, day, out->userRow(u));
    out->markUser(u);
  }
  for (int i : perimeter.items) {
    dynamicEmbedding(index, Side::kItem, i, day, out->itemRow(i));
    out->markItem(i);
  }
  return out;
}

void HcfModel::scatterHistoryGrad(std::span<const int> ids, Side pooledTable,
                                  std::span<const double> dHistory,
                                  std::span<double> grad) const {
  if (ids.empty() || cfg_.stopHistoryGradient) return;
  const int d = cfg_.dim;
  const double w = 1.0 / static_cast<double>(ids.size());
  for (int id : ids) {
    const size_t off = pooledTable == Side::kUser ? userRowOffset(id) : itemRowOffset(id);
    for (int l = 0; l < d; ++l) grad[off + l] += w * dHistory[l];
  }
}

double HcfModel::entryLossAddGrad(const HistoryIndex& index, const TripletEntry& entry,
                                  std::span<double> grad) const {
  const int d = cfg_.dim;
  const Side anchorBlock = entry.side;           // the entity shared by both pairs
  const Side otherBlock = opposite(entry.side);  // positive and negative live here
  const int anchorId = entry.side == Side::kUser ? entry.user : entry.item;
  const int posId = entry.side == Side::kUser ? entry.item : entry.user;
  const int negId = entry.negative;

  thread_local BlockCache cacheA, cacheP, cacheN;
  thread_local std::vector<double> histA, histP, histN, xa, xp, xn, dxa, dxp, dxn,
      dStatic, dHist;
  histA.resize(d); histP.resize(d); histN.resize(d);
  dxa.resize(d); dxp.resize(d); dxn.resize(d);
  dStatic.resize(d); dHist.resize(d);

  const std::span<const double> userTable{params_.data(),
                                          static_cast<size_t>(cfg_.numUsers) * d};
  const std::span<const double> itemTable{params_.data() + itemRowOffset(0),
                                          static_cast<size_t>(cfg_.numItems) * d};

  auto history = [&](Side side, int id) {
    return side == Side::kUser ? index.userHistory(id, entry.day)
                               : index.itemHistory(id, entry.day);
  };
  auto staticRow = [&](Side side, int id) {
    return side == Side::kUser ? userEmbedding(id) : itemEmbedding(id);
  };
  auto pooledTableOf = [&](Side side) {
    return side == Side::kUser ? itemTable : userTable;
  };

  const auto hA = history(anchorBlock, anchorId);
  const auto hP = history(otherBlock, posId);
  const auto hN = history(otherBlock, negId);
  poolEmbeddings(pooledTableOf(anchorBlock), d, hA, histA);
  poolEmbeddings(pooledTableOf(otherBlock), d, hP, histP);
  poolEmbeddings(pooledTableOf(otherBlock), d, hN, histN);

  blockForwardCached(anchorBlock, staticRow(anchorBlock, anchorId), histA, cacheA);
  blockForwardCached(otherBlock, staticRow(otherBlock, posId), histP, cacheP);
  blockForwardCached(otherBlock, staticRow(otherBlock, negId), histN, cacheN);
  const auto& va = cacheA.postAct.back();
  const auto& vp = cacheP.postAct.back();
  const auto& vn = cacheN.postAct.back();

  const double posScore = dot(va, vp);
  const double negScore = dot(va, vn);
  const double margin = posScore - negScore;
  const double loss = softplus(-margin);
  const double g = sigmoid(margin) - 1.0;  // dLoss/dMargin

  for (int l = 0; l < d; ++l) {
    dxa[l] = g * (vp[l] - vn[l]);
    dxp[l] = g * va[l];
    dxn[l] = -g * va[l];
  }

  const size_t anchorOff =
      anchorBlock == Side::kUser ? userRowOffset(anchorId) : itemRowOffset(anchorId);
  const size_t posOff =
      otherBlock == Side::kUser ? userRowOffset(posId) : itemRowOffset(posId);
  const size_t negOff =
      otherBlock == Side::kUser ? userRowOffset(negId) : itemRowOffset(negId);

  blockBackward(anchorBlock, cacheA, dxa, grad, dStatic, dHist);
  for (int l = 0; l < d; ++l) grad[anchorOff + l] += dStatic[l];
  scatterHistoryGrad(hA, opposite(anchorBlock), dHist, grad);

  blockBackward(otherBlock, cacheP, dxp, grad, dStatic, dHist);
  for (int l = 0; l < d; ++l) grad[posOff + l] += dStatic[l];
  scatterHistoryGrad(hP, opposite(otherBlock), dHist, grad);

  blockBackward(otherBlock, cacheN, dxn, grad, dStatic, dHist);
  for (int l = 0; l < d; ++l) grad[negOff + l] += dStatic[l];
  scatterHistoryGrad(hN, opposite(otherBlock), dHist, grad);

  return loss;
}

double HcfModel::entryLoss(const HistoryIndex& index, const TripletEntry& entry) const {
  const int posUser = entry.user;
  const int posItem = entry.item;
  const double posScore = score(index, posUser, posItem, entry.day);
  const double negScore = entry.side == Side::kUser
                              ? score(index, posUser, entry.negative, entry.day)
                              : score(index, entry.negative, posItem, entry.day);
  return bprLoss(posScore, negScore);
}

uint64_t HcfModel::regionHash(const HistoryIndex& index, const TripletEntry& entry) const {
  const int d = cfg_.dim;
  thread_local BlockCache cache;
  thread_local std::vector<double> pooled;
  pooled.resize(d);

  uint64_t h = 1469598103934665603ull;
  auto fold = [&](Side side, int id) {
    if (side == Side::kUser) {
      const std::span<const double> itemTable{params_.data() + itemRowOffset(0),
                                              static_cast<size_t>(cfg_.numItems) * d};
      poolEmbeddings(itemTable, d, index.userHistory(id, entry.day), pooled);
      blockForwardCached(Side::kUser, userEmbedding(id), pooled, cache);
    } else {
      const std::span<const double> userTable{params_.data(),
                                              static_cast<size_t>(cfg_.numUsers) * d};
      poolEmbeddings(userTable, d, index.itemHistory(id, entry.day), pooled);
      blockForwardCached(Side::kItem, itemEmbedding(id), pooled, cache);
    }
    for (int k = 0; k + 1 < numLayers(); ++k) {
      for (double v : cache.preAct[k]) {
        h = (h ^ (v > 0 ? 0x9e3779b97f4a7c15ull : 0x2545f4914f6cdd1dull)) *
            1099511628211ull;
      }
    }
  };
  fold(Side::kUser, entry.user);
  fold(Side::kItem, entry.item);
  fold(opposite(entry.side), entry.negative);
  return h;
}

HcfModel HcfModel::mirrored() const {
  Config mcfg = cfg_;
  std::swap(mcfg.numUsers, mcfg.numItems);
  HcfModel m(mcfg);
  for (int i = 0; i < cfg_.numItems; ++i) {
    auto src = itemEmbedding(i);
    auto dst = m.userEmbedding(i);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  for (int u = 0; u < cfg_.numUsers; ++u) {
    auto src = userEmbedding(u);
    auto dst = m.itemEmbedding(u);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  for (int k = 0; k < numLayers(); ++k) {
    auto wu = layerWeights(Side::kUser, k);
    auto wi = layerWeights(Side::kItem, k);
    std::copy(wu.begin(), wu.end(), m.layerWeights(Side::kItem, k).begin());
    std::copy(wi.begin(), wi.end(), m.layerWeights(Side::kUser, k).begin());
    auto bu = layerBias(Side::kUser, k);
    auto bi = layerBias(Side::kItem, k);
    std::copy(bu.begin(), bu.end(), m.layerBias(Side::kItem, k).begin());
    std::copy(bi.begin(), bi.end(), m.layerBias(Side::kUser, k).begin());
  }
  return m;
}

}  // namespace hcf
