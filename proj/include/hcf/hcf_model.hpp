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
#include <span>
#include <vector>

#include "hcf/scorer.hpp"

namespace hcf {

// Mean of the selected table rows; writes the zero vector when ids is empty.
void poolEmbeddings(std::span<const double> table, int dim, std::span<const int> ids,
                    std::span<double> out);

// History-augmented collaborative filtering network.
//
// Static user/item embedding tables feed two symmetric blocks of kernel-1
// convolutions. A block sees two channels per embedding component: the
// entity's static embedding and the mean embedding of its recent
// counterparts (items for a user, users for an item). Kernel size 1 keeps
// every component independent: component l of the output depends only on
// component l of the inputs, with layer parameters shared across
// components. The (u, i, t) score is the scalar product of the two dynamic
// embeddings.
//
// With no hidden channels a block is the single affine map
// alpha * static + beta * history + gamma. Hidden layers use ReLU; the
// final layer is always identity with one output channel.
class HcfModel : public BprModel {
 public:
  struct Config {
    int numUsers = 0;
    int numItems = 0;
    int dim = 32;
    int historyCapacity = 20;
    std::vector<int> hiddenChannels = {8, 8};
    // Ablation switch: when true, pooled-history members receive no
    // gradient through the history channel.
    bool stopHistoryGradient = false;
    uint64_t seed = 1;
  };

  // Embeddings i.i.d. N(0, 0.1^2); weights Glorot-uniform; biases zero.
  // Deterministic for a given seed.
  explicit HcfModel(const Config& cfg);

  const Config& config() const { return cfg_; }
  int dim() const { return cfg_.dim; }
  int historyCapacity() const { return cfg_.historyCapacity; }
  int numLayers() const { return static_cast<int>(layerIn_.size()); }
  int layerIn(int k) const { return layerIn_[k]; }
  int layerOut(int k) const { return layerOut_[k]; }

  // Scorer.
  int numUsers() const override { return cfg_.numUsers; }
  int numItems() const override { return cfg_.numItems; }
  double score(const HistoryIndex& index, int user, int item, int day) const override;
  std::unique_ptr<DayScorer> makeDayScorer(const HistoryIndex& index, int day,
                                           const Perimeter& perimeter) const override;

  // BprModel.
  std::span<double> parameters() override { return params_; }
  std::span<const double> parameters() const override { return params_; }
  double entryLossAddGrad(const HistoryIndex& index, const TripletEntry& entry,
                          std::span<double> grad) const override;
  double entryLoss(const HistoryIndex& index, const TripletEntry& entry) const override;
  uint64_t regionHash(const HistoryIndex& index, const TripletEntry& entry) const override;
  size_t embeddingParamCount() const override { return blockOff_[0]; }

  // Parameter views (tests, serialization, mirroring).
  std::span<const double> userEmbedding(int u) const;
  std::span<double> userEmbedding(int u);
  std::span<const double> itemEmbedding(int i) const;
  std::span<double> itemEmbedding(int i);
  std::span<double> layerWeights(Side blockSide, int layer);
  std::span<const double> layerWeights(Side blockSide, int layer) const;
  std::span<double> layerBias(Side blockSide, int layer);
  std::span<const double> layerBias(Side blockSide, int layer) const;

  // Block output for explicit static/history channel vectors.
  void blockForward(Side blockSide, std::span<const double> staticVec,
                    std::span<const double> historyVec, std::span<double> out) const;

  // Dynamic embedding of an entity at a day. For a user the history channel
  // pools item embeddings; for an item it pools user embeddings.
  void dynamicEmbedding(const HistoryIndex& index, Side side, int id, int day,
                        std::span<double> out) const;

  // Role-swapped copy: tables and blocks exchanged, same arithmetic.
  HcfModel mirrored() const;

 private:
  struct BlockCache;
  void blockForwardCached(Side blockSide, std::span<const double> staticVec,
                          std::span<const double> historyVec, BlockCache& cache) const;
  void blockBackward(Side blockSide, const BlockCache& cache,
                     std::span<const double> gradOut, std::span<double> grad,
                     std::span<double> dStatic, std::span<double> dHistory) const;
  void scatterHistoryGrad(std::span<const int> ids, Side pooledTable,
                          std::span<const double> dHistory, std::span<double> grad) const;

  size_t userRowOffset(int u) const;
  size_t itemRowOffset(int i) const;
  size_t weightOffset(Side side, int layer) const;
  size_t biasOffset(Side side, int layer) const;

  Config cfg_;
  std::vector<int> layerIn_, layerOut_;
  size_t blockOff_[2];      // start of user / item block parameters
  size_t blockParamCount_;  // per block
  std::vector<size_t> layerWOff_, layerBOff_;  // within a block
  std::vector<double> params_;
};

}  // namespace hcf
