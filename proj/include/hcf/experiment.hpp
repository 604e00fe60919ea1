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
#include <string>
#include <vector>

#include "hcf/config_file.hpp"
#include "hcf/evaluation.hpp"
#include "hcf/event_log.hpp"
#include "hcf/serialization.hpp"
#include "hcf/synthetic.hpp"
#include "hcf/training.hpp"

namespace hcf {

// Everything a run needs, resolvable from a flat key=value map and
// serializable back to one (fromMap(toMap(c)) == c).
struct ExperimentConfig {
  enum class DataKind { kSynthetic, kCsv };

  DataKind dataKind = DataKind::kSynthetic;
  std::string csvPath;
  SyntheticConfig synth;  // synth.seed follows the run seed

  int validDays = 30;
  int testDays = 30;

  ModelKind modelKind = ModelKind::kHcf;
  int dim = 32;
  int historyCapacity = 20;
  std::vector<int> hiddenChannels = {8, 8};
  bool stopHistoryGradient = false;

  FitConfig::Optimizer optimizer = FitConfig::Optimizer::kAdam;
  double lr = 1e-3;
  int batchSize = 256;
  int patienceEpochs = 5;
  int maxEpochs = 200;
  int negativesPerPositive = 1;
  bool excludeSameDayPositives = false;
  double weightDecay = 0;
  double lambdaReg = 0.01;
  double alphaConf = 40;
  double implicitLr = 2e-5;
  int implicitStepsPerEpoch = 10;

  std::vector<int> sweepWindows = {7, 30, 60, 90, 180, 365};

  int slideWindowDays = 30;
  std::vector<ModelKind> slideModels = {ModelKind::kMfBpr, ModelKind::kHistorical};

  int searchTrials = 20;
  double searchLrMin = 1e-4;
  double searchLrMax = 1e-2;
  double searchLambdaMin = 1e-5;
  double searchLambdaMax = 1e-1;
  std::vector<int> searchDims;  // empty keeps `dim`

  double ewmaAlpha = 0.2;
  std::string evalDays = "test";  // test | valid
  bool timing = false;  // true adds wall-clock seconds to outputs

  uint64_t seed = 1;

  // Throws ConfigError on unknown keys or invalid values.
  static ExperimentConfig fromMap(const ConfigMap& map);
  ConfigMap toMap() const;
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// Generates or ingests the configured dataset. Synthetic data is seeded
// with the run seed.
EventLog loadDataset(const ExperimentConfig& cfg);

// Last testDays are test, the validDays before them validation, the rest
// training. Throws ConfigError when no training days remain.
TemporalSplit deriveSplit(DayRange fullRange, int validDays, int testDays);

// A model fitted on one training window; `slice` defines the id space.
struct FittedModel {
  EventLog slice;
  LoadedModel model;
  FitResult fit;
};

// Slices [endDay - sizeDays + 1, endDay], builds a fresh model of
// cfg.modelKind seeded with fitSeed, and fits it. With validRange set, fits
// with early stopping on that range's symmetrized mAP; otherwise runs
// exactly fixedEpochs epochs (historical models need neither). The slice
// must contain events.
FittedModel fitWindow(const EventLog& full, int endDay, int sizeDays,
                      std::optional<DayRange> validRange, const ExperimentConfig& cfg,
                      uint64_t fitSeed, int fixedEpochs);

// Scores a fitted model over `days`. Queries and histories come from the
// full log projected onto the model's id space; the perimeter is the
// training slice's entity set.
MetricsReport evaluateWindow(const FittedModel& fitted, const EventLog& full,
                             DayRange days, const ExperimentConfig& cfg);

// Fits cfg.modelKind on the whole training range with early stopping on the
// validation range (the `train` subcommand).
FittedModel runTraining(const EventLog& full, const ExperimentConfig& cfg);

// Scores a deserialized model against fresh data, matching entities by the
// stored vocabulary names (the `eval` subcommand). The model file must
// carry vocabularies.
MetricsReport evaluateLoaded(const LoadedModel& loaded, const EventLog& full,
                             DayRange days, const ExperimentConfig& cfg);

struct SweepRow {
  int windowDays = 0;
  std::string status;  // ok | clamped | empty
  double validMapUser = 0, validMapItem = 0, validMapSym = 0;
  double testMapUser = 0, testMapItem = 0, testMapSym = 0;
  int epochs = 0;
  double seconds = 0;
  DayRange fitWindow;    // training window of the validation fit
  DayRange refitWindow;  // training window of the test refit
};

struct SweepResult {
  TemporalSplit split;
  std::vector<SweepRow> rows;
};

// For each window size: fit ending at the last training day, score on the
// validation range, then refit on the window directly preceding the test
// range for the same number of epochs and score on the test range.
SweepResult runWindowSweep(const EventLog& full, const ExperimentConfig& cfg);

struct SlideDay {
  int day = 0;
  DayRange window;
  double mapUser = 0, mapItem = 0, mapSym = 0;
  int64_t userQueries = 0, itemQueries = 0;
};

struct SlideRow {
  ModelKind kind = ModelKind::kMfBpr;
  int windowDays = 0;
  int epochs = 0;  // selected once on the validation range
  double mapUser = 0, mapItem = 0, mapSym = 0;
  double seconds = 0;
  std::vector<SlideDay> days;
};

struct SlideResult {
  TemporalSplit split;
  std::vector<SlideRow> rows;
};

// Daily retraining: for each test day, a fresh model fitted on the
// immediately preceding window predicts that day's queries. Epoch counts
// are fixed beforehand by one early-stopped fit on the validation range.
// All test-day APs aggregate into one mAP per side before symmetrizing.
SlideResult runSlidingStudy(const EventLog& full, const ExperimentConfig& cfg);

struct SearchTrial {
  int trial = 0;
  double lr = 0;
  double lambda = 0;
  int dim = 0;
  double validMapSym = 0;
  int epochs = 0;
};

struct SearchResult {
  std::vector<SearchTrial> trials;
  size_t bestIndex = 0;
};

// Random search over log-uniform lr and lambda (and dim when searchDims is
// set), each trial fitted on the full training range with early stopping.
SearchResult runRandomSearch(const EventLog& full, const ExperimentConfig& cfg);

// --- file exports -----------------------------------------------------

void writeSweepCsv(const SweepResult& result, const std::string& path, bool timing);
void writeSlideCsv(const SlideResult& result, const std::string& path, bool timing);
void writeSlideDailyCsv(const SlideRow& row, double ewmaAlpha, const std::string& path);
void writeDailyCsv(const std::vector<DailyPoint>& series, double ewmaAlpha,
                   const std::string& path);
void writeTraceCsv(const std::vector<TraceRow>& trace, const std::string& path,
                   bool timing);
void writeSearchCsv(const SearchResult& result, const std::string& path);

// Git-style blob hash (SHA-1 over "blob <len>\0" + content).
std::string gitBlobSha1(const std::string& path);

// Run manifest: command, resolved config echo, and input-file hashes.
void writeManifest(const ExperimentConfig& cfg, const std::string& command,
                   const std::vector<std::string>& inputPaths, const std::string& path);

}  // namespace hcf
