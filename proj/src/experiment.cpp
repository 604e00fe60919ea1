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

#include "hcf/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "hcf/errors.hpp"
#include "hcf/rng.hpp"

namespace hcf {

namespace {

// Seed-stream tags keeping every fit's randomness independent.
constexpr uint64_t kTagSweepFit = 1;
constexpr uint64_t kTagSweepRefit = 2;
constexpr uint64_t kTagSlideFit = 3;
constexpr uint64_t kTagSlideDay = 4;
constexpr uint64_t kTagSearchParams = 5;
constexpr uint64_t kTagSearchFit = 6;
constexpr uint64_t kTagTrain = 7;

double elapsedSeconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ModelKind parseModelKind(const std::string& name) {
  if (name == "hcf") return ModelKind::kHcf;
  if (name == "mf_bpr") return ModelKind::kMfBpr;
  if (name == "mf_implicit") return ModelKind::kMfImplicit;
  if (name == "historical") return ModelKind::kHistorical;
  throw ConfigError("unknown model kind '" + name +
                    "' (expected hcf, mf_bpr, mf_implicit or historical)");
}

const std::set<std::string>& knownKeys() {
  static const std::set<std::string> keys = {
      "data.kind", "data.csv",
      "synth.users", "synth.items", "synth.latent_dim", "synth.drift_std",
      "synth.events_per_day", "synth.days", "synth.temperature",
      "split.valid_days", "split.test_days",
      "model.kind", "model.dim", "model.history", "model.hidden",
      "model.stop_history_gradient",
      "train.optimizer", "train.lr", "train.batch", "train.patience",
      "train.max_epochs", "train.negatives", "train.exclude_same_day",
      "train.weight_decay", "train.lambda", "train.alpha_conf",
      "train.implicit_lr", "train.implicit_steps",
      "sweep.windows",
      "slide.window", "slide.models",
      "search.trials", "search.lr_min", "search.lr_max", "search.lambda_min",
      "search.lambda_max", "search.dims",
      "eval.ewma_alpha", "eval.days",
      "out.timing",
      "seed",
  };
  return keys;
}

}  // namespace

ExperimentConfig ExperimentConfig::fromMap(const ConfigMap& map) {
  for (const auto& [key, value] : map) {
    if (!knownKeys().count(key)) throw ConfigError("unknown config key: " + key);
  }

  ExperimentConfig cfg;
  const std::string dataKind = getString(map, "data.kind", "synthetic");
  if (dataKind == "synthetic") {
    cfg.dataKind = DataKind::kSynthetic;
  } else if (dataKind == "csv") {
    cfg.dataKind = DataKind::kCsv;
  } else {
    throw ConfigError("data.kind: expected synthetic or csv, got '" + dataKind + "'");
  }
  cfg.csvPath = getString(map, "data.csv", "");

  cfg.synth.numUsers = getInt(map, "synth.users", cfg.synth.numUsers);
  cfg.synth.numItems = getInt(map, "synth.items", cfg.synth.numItems);
  cfg.synth.latentDim = getInt(map, "synth.latent_dim", cfg.synth.latentDim);
  cfg.synth.driftStd = getDouble(map, "synth.drift_std", cfg.synth.driftStd);
  cfg.synth.eventsPerDay = getDouble(map, "synth.events_per_day", cfg.synth.eventsPerDay);
  cfg.synth.numDays = getInt(map, "synth.days", cfg.synth.numDays);
  cfg.synth.temperature = getDouble(map, "synth.temperature", cfg.synth.temperature);

  cfg.validDays = getInt(map, "split.valid_days", cfg.validDays);
  cfg.testDays = getInt(map, "split.test_days", cfg.testDays);

  cfg.modelKind = parseModelKind(getString(map, "model.kind", "hcf"));
  cfg.dim = getInt(map, "model.dim", cfg.dim);
  cfg.historyCapacity = getInt(map, "model.history", cfg.historyCapacity);
  cfg.hiddenChannels = getIntList(map, "model.hidden", cfg.hiddenChannels);
  cfg.stopHistoryGradient =
      getBool(map, "model.stop_history_gradient", cfg.stopHistoryGradient);

  const std::string optimizer = getString(map, "train.optimizer", "adam");
  if (optimizer == "adam") {
    cfg.optimizer = FitConfig::Optimizer::kAdam;
  } else if (optimizer == "sgd") {
    cfg.optimizer = FitConfig::Optimizer::kSgd;
  } else {
    throw ConfigError("train.optimizer: expected adam or sgd, got '" + optimizer + "'");
  }
  cfg.lr = getDouble(map, "train.lr", cfg.lr);
  cfg.batchSize = getInt(map, "train.batch", cfg.batchSize);
  cfg.patienceEpochs = getInt(map, "train.patience", cfg.patienceEpochs);
  cfg.maxEpochs = getInt(map, "train.max_epochs", cfg.maxEpochs);
  cfg.negativesPerPositive = getInt(map, "train.negatives", cfg.negativesPerPositive);
  cfg.excludeSameDayPositives =
      getBool(map, "train.exclude_same_day", cfg.excludeSameDayPositives);
  cfg.weightDecay = getDouble(map, "train.weight_decay", cfg.weightDecay);
  cfg.lambdaReg = getDouble(map, "train.lambda", cfg.lambdaReg);
  cfg.alphaConf = getDouble(map, "train.alpha_conf", cfg.alphaConf);
  cfg.implicitLr = getDouble(map, "train.implicit_lr", cfg.implicitLr);
  cfg.implicitStepsPerEpoch = getInt(map, "train.implicit_steps", cfg.implicitStepsPerEpoch);

  cfg.sweepWindows = getIntList(map, "sweep.windows", cfg.sweepWindows);

  cfg.slideWindowDays = getInt(map, "slide.window", cfg.slideWindowDays);
  std::vector<std::string> slideNames;
  for (ModelKind kind : cfg.slideModels) slideNames.push_back(modelKindName(kind));
  slideNames = getStringList(map, "slide.models", slideNames);
  cfg.slideModels.clear();
  for (const std::string& name : slideNames) cfg.slideModels.push_back(parseModelKind(name));

  cfg.searchTrials = getInt(map, "search.trials", cfg.searchTrials);
  cfg.searchLrMin = getDouble(map, "search.lr_min", cfg.searchLrMin);
  cfg.searchLrMax = getDouble(map, "search.lr_max", cfg.searchLrMax);
  cfg.searchLambdaMin = getDouble(map, "search.lambda_min", cfg.searchLambdaMin);
  cfg.searchLambdaMax = getDouble(map, "search.lambda_max", cfg.searchLambdaMax);
  cfg.searchDims = getIntList(map, "search.dims", cfg.searchDims);

  cfg.ewmaAlpha = getDouble(map, "eval.ewma_alpha", cfg.ewmaAlpha);
  cfg.evalDays = getString(map, "eval.days", cfg.evalDays);
  cfg.timing = getBool(map, "out.timing", cfg.timing);
  cfg.seed = getUint64(map, "seed", cfg.seed);
  cfg.synth.seed = cfg.seed;

  cfg.validate();
  return cfg;
}

ConfigMap ExperimentConfig::toMap() const {
  ConfigMap map;
  map["data.kind"] = dataKind == DataKind::kSynthetic ? "synthetic" : "csv";
  map["data.csv"] = csvPath;
  map["synth.users"] = std::to_string(synth.numUsers);
  map["synth.items"] = std::to_string(synth.numItems);
  map["synth.latent_dim"] = std::to_string(synth.latentDim);
  map["synth.drift_std"] = formatDouble(synth.driftStd);
  map["synth.events_per_day"] = formatDouble(synth.eventsPerDay);
  map["synth.days"] = std::to_string(synth.numDays);
  map["synth.temperature"] = formatDouble(synth.temperature);
  map["split.valid_days"] = std::to_string(validDays);
  map["split.test_days"] = std::to_string(testDays);
  map["model.kind"] = modelKindName(modelKind);
  map["model.dim"] = std::to_string(dim);
  map["model.history"] = std::to_string(historyCapacity);
  map["model.hidden"] = formatIntList(hiddenChannels);
  map["model.stop_history_gradient"] = stopHistoryGradient ? "true" : "false";
  map["train.optimizer"] = optimizer == FitConfig::Optimizer::kAdam ? "adam" : "sgd";
  map["train.lr"] = formatDouble(lr);
  map["train.batch"] = std::to_string(batchSize);
  map["train.patience"] = std::to_string(patienceEpochs);
  map["train.max_epochs"] = std::to_string(maxEpochs);
  map["train.negatives"] = std::to_string(negativesPerPositive);
  map["train.exclude_same_day"] = excludeSameDayPositives ? "true" : "false";
  map["train.weight_decay"] = formatDouble(weightDecay);
  map["train.lambda"] = formatDouble(lambdaReg);
  map["train.alpha_conf"] = formatDouble(alphaConf);
  map["train.implicit_lr"] = formatDouble(implicitLr);
  map["train.implicit_steps"] = std::to_string(implicitStepsPerEpoch);
  map["sweep.windows"] = formatIntList(sweepWindows);
  map["slide.window"] = std::to_string(slideWindowDays);
  std::vector<std::string> slideNames;
  for (ModelKind kind : slideModels) slideNames.push_back(modelKindName(kind));
  map["slide.models"] = formatStringList(slideNames);
  map["search.trials"] = std::to_string(searchTrials);
  map["search.lr_min"] = formatDouble(searchLrMin);
  map["search.lr_max"] = formatDouble(searchLrMax);
  map["search.lambda_min"] = formatDouble(searchLambdaMin);
  map["search.lambda_max"] = formatDouble(searchLambdaMax);
  map["search.dims"] = formatIntList(searchDims);
  map["eval.ewma_alpha"] = formatDouble(ewmaAlpha);
  map["eval.days"] = evalDays;
  map["out.timing"] = timing ? "true" : "false";
  map["seed"] = std::to_string(seed);
  return map;
}

void ExperimentConfig::validate() const {
  if (dataKind == DataKind::kCsv && csvPath.empty()) {
    throw ConfigError("data.kind=csv requires data.csv");
  }
  synth.validate();
  if (validDays < 1 || testDays < 1) {
    throw ConfigError("split.valid_days and split.test_days must be >= 1");
  }
  if (dim < 1) throw ConfigError("model.dim must be >= 1");
  if (historyCapacity < 1) throw ConfigError("model.history must be >= 1");
  for (int h : hiddenChannels) {
    if (h < 1) throw ConfigError("model.hidden entries must be >= 1");
  }
  if (lr <= 0 || implicitLr <= 0) throw ConfigError("learning rates must be > 0");
  if (batchSize < 1) throw ConfigError("train.batch must be >= 1");
  if (patienceEpochs < 0) throw ConfigError("train.patience must be >= 0");
  if (maxEpochs < 1) throw ConfigError("train.max_epochs must be >= 1");
  if (negativesPerPositive < 1) throw ConfigError("train.negatives must be >= 1");
  if (weightDecay < 0 || lambdaReg < 0) throw ConfigError("penalties must be >= 0");
  if (implicitStepsPerEpoch < 1) throw ConfigError("train.implicit_steps must be >= 1");
  if (sweepWindows.empty()) throw ConfigError("sweep.windows must not be empty");
  for (int w : sweepWindows) {
    if (w < 7) throw ConfigError("sweep.windows entries must be >= 7 days");
  }
  if (slideWindowDays < 7) throw ConfigError("slide.window must be >= 7 days");
  if (slideModels.empty()) throw ConfigError("slide.models must not be empty");
  if (searchTrials < 1) throw ConfigError("search.trials must be >= 1");
  if (searchLrMin <= 0 || searchLrMax < searchLrMin) {
    throw ConfigError("search learning-rate range is invalid");
  }
  if (searchLambdaMin <= 0 || searchLambdaMax < searchLambdaMin) {
    throw ConfigError("search lambda range is invalid");
  }
  for (int d : searchDims) {
    if (d < 1) throw ConfigError("search.dims entries must be >= 1");
  }
  if (ewmaAlpha <= 0 || ewmaAlpha > 1) throw ConfigError("eval.ewma_alpha must be in (0, 1]");
  if (evalDays != "test" && evalDays != "valid") {
    throw ConfigError("eval.days must be test or valid");
  }
}

EventLog loadDataset(const ExperimentConfig& cfg) {
  if (cfg.dataKind == ExperimentConfig::DataKind::kCsv) {
    return ingestCsv(cfg.csvPath);
  }
  SyntheticConfig synth = cfg.synth;
  synth.seed = cfg.seed;
  return generateSynthetic(synth);
}

TemporalSplit deriveSplit(DayRange fullRange, int validDays, int testDays) {
  TemporalSplit split;
  split.test = {fullRange.last - testDays + 1, fullRange.last};
  split.valid = {split.test.first - validDays, split.test.first - 1};
  split.train = {fullRange.first, split.valid.first - 1};
  if (split.train.length() < 1) {
    throw ConfigError("no training days remain before the validation/test ranges");
  }
  split.validate();
  return split;
}

FittedModel fitWindow(const EventLog& full, int endDay, int sizeDays,
                      std::optional<DayRange> validRange, const ExperimentConfig& cfg,
                      uint64_t fitSeed, int fixedEpochs) {
  FittedModel out;
  out.slice = sliceWindow(full, endDay, sizeDays);
  if (out.slice.events().empty()) throw DataError("training window has no events");
  out.model.kind = cfg.modelKind;
  out.model.vocab = {out.slice.userNames(), out.slice.itemNames()};

  std::optional<EventLog> validLog;
  if (validRange) {
    validLog = projectOnto(full, out.slice)
                   .filterDays(validRange->first, validRange->last);
  }
  const EventLog* validPtr = validLog ? &*validLog : nullptr;

  FitConfig fitCfg;
  fitCfg.optimizer = cfg.optimizer;
  fitCfg.lr = cfg.lr;
  fitCfg.batchSize = cfg.batchSize;
  fitCfg.negativesPerPositive = cfg.negativesPerPositive;
  fitCfg.patienceEpochs = cfg.patienceEpochs;
  fitCfg.maxEpochs = cfg.maxEpochs;
  fitCfg.fixedEpochs = fixedEpochs;
  fitCfg.weightDecay = cfg.weightDecay;
  fitCfg.historyCapacity = cfg.historyCapacity;
  fitCfg.excludeSameDayPositives = cfg.excludeSameDayPositives;
  fitCfg.seed = fitSeed;

  switch (cfg.modelKind) {
    case ModelKind::kHcf: {
      HcfModel::Config mc;
      mc.numUsers = out.slice.numUsers();
      mc.numItems = out.slice.numItems();
      mc.dim = cfg.dim;
      mc.historyCapacity = cfg.historyCapacity;
      mc.hiddenChannels = cfg.hiddenChannels;
      mc.stopHistoryGradient = cfg.stopHistoryGradient;
      mc.seed = fitSeed;
      out.model.hcf = std::make_unique<HcfModel>(mc);
      out.fit = fitBpr(*out.model.hcf, out.slice, validPtr, fitCfg);
      break;
    }
    case ModelKind::kMfBpr:
    case ModelKind::kMfImplicit: {
      MfModel::Config mc;
      mc.numUsers = out.slice.numUsers();
      mc.numItems = out.slice.numItems();
      mc.dim = cfg.dim;
      mc.objective = cfg.modelKind == ModelKind::kMfBpr ? MfModel::Objective::kBpr
                                                        : MfModel::Objective::kImplicit;
      mc.lambdaReg = cfg.lambdaReg;
      mc.alphaConf = cfg.alphaConf;
      mc.seed = fitSeed;
      out.model.mf = std::make_unique<MfModel>(mc);
      if (cfg.modelKind == ModelKind::kMfBpr) {
        out.fit = fitBpr(*out.model.mf, out.slice, validPtr, fitCfg);
      } else {
        ImplicitFitConfig icfg;
        icfg.lr = cfg.implicitLr;
        icfg.stepsPerEpoch = cfg.implicitStepsPerEpoch;
        icfg.patienceEpochs = cfg.patienceEpochs;
        icfg.maxEpochs = cfg.maxEpochs;
        icfg.fixedEpochs = fixedEpochs;
        out.fit = fitImplicit(*out.model.mf, out.slice, validPtr, icfg);
      }
      break;
    }
    case ModelKind::kHistorical: {
      out.model.historical = std::make_unique<HistoricalModel>(out.slice);
      if (validRange) {
        const EventLog projected = projectOnto(full, out.slice);
        const HistoryIndex index(projected, 1);
        const MetricsReport report = evaluate(*out.model.historical, index, projected,
                                              *validRange, perimeterOf(out.slice));
        out.fit.bestValidMapUser = report.mapUser;
        out.fit.bestValidMapItem = report.mapItem;
        out.fit.bestValidMapSym = report.mapSym;
      }
      break;
    }
  }
  return out;
}

MetricsReport evaluateWindow(const FittedModel& fitted, const EventLog& full,
                             DayRange days, const ExperimentConfig& cfg) {
  const EventLog projected = projectOnto(full, fitted.slice);
  const HistoryIndex index(projected, cfg.historyCapacity);
  return evaluate(fitted.model.scorer(), index, projected, days,
                  perimeterOf(fitted.slice));
}

FittedModel runTraining(const EventLog& full, const ExperimentConfig& cfg) {
  cfg.validate();
  const TemporalSplit split = deriveSplit(full.dayRange(), cfg.validDays, cfg.testDays);
  return fitWindow(full, split.train.last, split.train.length(), split.valid, cfg,
                   deriveSeed(cfg.seed, kTagTrain, 0), 0);
}

MetricsReport evaluateLoaded(const LoadedModel& loaded, const EventLog& full,
                             DayRange days, const ExperimentConfig&) {
  if (loaded.vocab.userNames.empty() && loaded.vocab.itemNames.empty()) {
    throw DataError("model file carries no vocabularies; cannot match entities");
  }
  const EventLog target({}, loaded.vocab.userNames, loaded.vocab.itemNames);
  const EventLog projected = projectOnto(full, target);
  const int capacity = loaded.hcf ? loaded.hcf->historyCapacity() : 1;
  const HistoryIndex index(projected, capacity);
  Perimeter perimeter;
  perimeter.users.resize(loaded.vocab.userNames.size());
  perimeter.items.resize(loaded.vocab.itemNames.size());
  std::iota(perimeter.users.begin(), perimeter.users.end(), 0);
  std::iota(perimeter.items.begin(), perimeter.items.end(), 0);
  return evaluate(loaded.scorer(), index, projected, days, perimeter);
}

SweepResult runWindowSweep(const EventLog& full, const ExperimentConfig& cfg) {
  cfg.validate();
  SweepResult result;
  result.split = deriveSplit(full.dayRange(), cfg.validDays, cfg.testDays);
  const TemporalSplit& split = result.split;

  for (int w : cfg.sweepWindows) {
    const auto start = std::chrono::steady_clock::now();
    SweepRow row;
    row.windowDays = w;
    row.fitWindow = {std::max(split.train.first, split.train.last - w + 1),
                     split.train.last};
    row.refitWindow = {std::max(split.train.first, split.valid.last - w + 1),
                       split.valid.last};
    const bool clamped =
        w > split.train.length() || w > split.train.length() + split.valid.length();

    if (sliceWindow(full, split.train.last, w).events().empty()) {
      row.status = "empty";
      result.rows.push_back(row);
      continue;
    }

    const FittedModel fitted =
        fitWindow(full, split.train.last, w, split.valid, cfg,
                  deriveSeed(cfg.seed, kTagSweepFit, static_cast<uint64_t>(w)), 0);
    row.validMapUser = fitted.fit.bestValidMapUser;
    row.validMapItem = fitted.fit.bestValidMapItem;
    row.validMapSym = fitted.fit.bestValidMapSym;
    row.epochs = fitted.fit.bestEpoch;

    const FittedModel refitted =
        fitWindow(full, split.valid.last, w, std::nullopt, cfg,
                  deriveSeed(cfg.seed, kTagSweepRefit, static_cast<uint64_t>(w)),
                  fitted.fit.bestEpoch);
    const MetricsReport test = evaluateWindow(refitted, full, split.test, cfg);
    row.testMapUser = test.mapUser;
    row.testMapItem = test.mapItem;
    row.testMapSym = test.mapSym;

    row.status = clamped ? "clamped" : "ok";
    row.seconds = elapsedSeconds(start);
    result.rows.push_back(row);
  }
  return result;
}

SlideResult runSlidingStudy(const EventLog& full, const ExperimentConfig& cfg) {
  cfg.validate();
  SlideResult result;
  result.split = deriveSplit(full.dayRange(), cfg.validDays, cfg.testDays);
  const TemporalSplit& split = result.split;
  const int w = cfg.slideWindowDays;

  for (size_t algoIdx = 0; algoIdx < cfg.slideModels.size(); ++algoIdx) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig algoCfg = cfg;
    algoCfg.modelKind = cfg.slideModels[algoIdx];

    SlideRow row;
    row.kind = algoCfg.modelKind;
    row.windowDays = w;

    if (algoCfg.modelKind != ModelKind::kHistorical) {
      const FittedModel validFit =
          fitWindow(full, split.train.last, w, split.valid, algoCfg,
                    deriveSeed(cfg.seed, kTagSlideFit, algoIdx), 0);
      row.epochs = std::max(1, validFit.fit.bestEpoch);
    }

    double sumUser = 0, sumItem = 0;
    int64_t countUser = 0, countItem = 0;
    const uint64_t algoSeed = deriveSeed(cfg.seed, kTagSlideDay, algoIdx);
    for (int day = split.test.first; day <= split.test.last; ++day) {
      SlideDay slideDay;
      slideDay.day = day;
      slideDay.window = {std::max(full.dayRange().first, day - w), day - 1};
      if (sliceWindow(full, day - 1, w).events().empty()) {
        row.days.push_back(slideDay);
        continue;
      }
      const FittedModel fitted =
          fitWindow(full, day - 1, w, std::nullopt, algoCfg,
                    deriveSeed(algoSeed, static_cast<uint64_t>(day)), row.epochs);
      const MetricsReport report =
          evaluateWindow(fitted, full, DayRange{day, day}, algoCfg);
      slideDay.mapUser = report.mapUser;
      slideDay.mapItem = report.mapItem;
      slideDay.mapSym = report.mapSym;
      slideDay.userQueries = report.userQueries;
      slideDay.itemQueries = report.itemQueries;
      sumUser += report.mapUser * static_cast<double>(report.userQueries);
      sumItem += report.mapItem * static_cast<double>(report.itemQueries);
      countUser += report.userQueries;
      countItem += report.itemQueries;
      row.days.push_back(slideDay);
    }

    row.mapUser = countUser ? sumUser / static_cast<double>(countUser) : 0.0;
    row.mapItem = countItem ? sumItem / static_cast<double>(countItem) : 0.0;
    row.mapSym = harmonicMean(row.mapUser, row.mapItem);
    row.seconds = elapsedSeconds(start);
    result.rows.push_back(std::move(row));
  }
  return result;
}

SearchResult runRandomSearch(const EventLog& full, const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.modelKind == ModelKind::kHistorical) {
    throw ConfigError("random search needs a trainable model kind");
  }
  const TemporalSplit split = deriveSplit(full.dayRange(), cfg.validDays, cfg.testDays);

  SearchResult result;
  double bestScore = -1;
  for (int trial = 0; trial < cfg.searchTrials; ++trial) {
    auto paramRng =
        makeEngine(deriveSeed(cfg.seed, kTagSearchParams, static_cast<uint64_t>(trial)));
    const double lr =
        std::exp(std::log(cfg.searchLrMin) +
                 uniformDouble(paramRng) * (std::log(cfg.searchLrMax) -
                                            std::log(cfg.searchLrMin)));
    const double lambda =
        std::exp(std::log(cfg.searchLambdaMin) +
                 uniformDouble(paramRng) * (std::log(cfg.searchLambdaMax) -
                                            std::log(cfg.searchLambdaMin)));
    ExperimentConfig trialCfg = cfg;
    if (!cfg.searchDims.empty()) {
      trialCfg.dim = cfg.searchDims[boundedRand(paramRng, cfg.searchDims.size())];
    }
    if (cfg.modelKind == ModelKind::kMfImplicit) {
      trialCfg.implicitLr = lr;
      trialCfg.lambdaReg = lambda;
    } else {
      trialCfg.lr = lr;
      trialCfg.weightDecay = lambda;
    }

    const FittedModel fitted =
        fitWindow(full, split.train.last, split.train.length(), split.valid, trialCfg,
                  deriveSeed(cfg.seed, kTagSearchFit, static_cast<uint64_t>(trial)), 0);

    SearchTrial record;
    record.trial = trial;
    record.lr = lr;
    record.lambda = lambda;
    record.dim = trialCfg.dim;
    record.validMapSym = fitted.fit.bestValidMapSym;
    record.epochs = fitted.fit.bestEpoch;
    result.trials.push_back(record);
    if (record.validMapSym > bestScore) {
      bestScore = record.validMapSym;
      result.bestIndex = result.trials.size() - 1;
    }
  }
  return result;
}

namespace {

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write output file: " + path);
  return out;
}

std::string secondsField(double seconds, bool timing) {
  return formatDouble(timing ? seconds : 0.0);
}

}  // namespace

void writeSweepCsv(const SweepResult& result, const std::string& path, bool timing) {
  auto out = openOut(path);
  out << "window_days,status,valid_map_user,valid_map_item,valid_map_sym,"
         "test_map_user,test_map_item,test_map_sym,epochs,seconds\n";
  for (const auto& row : result.rows) {
    out << row.windowDays << ',' << row.status << ',' << formatDouble(row.validMapUser)
        << ',' << formatDouble(row.validMapItem) << ',' << formatDouble(row.validMapSym)
        << ',' << formatDouble(row.testMapUser) << ',' << formatDouble(row.testMapItem)
        << ',' << formatDouble(row.testMapSym) << ',' << row.epochs << ','
        << secondsField(row.seconds, timing) << '\n';
  }
}

void writeSlideCsv(const SlideResult& result, const std::string& path, bool timing) {
  auto out = openOut(path);
  out << "algorithm,window_days,epochs,map_user,map_item,map_sym,seconds\n";
  for (const auto& row : result.rows) {
    out << modelKindName(row.kind) << ',' << row.windowDays << ',' << row.epochs << ','
        << formatDouble(row.mapUser) << ',' << formatDouble(row.mapItem) << ','
        << formatDouble(row.mapSym) << ',' << secondsField(row.seconds, timing) << '\n';
  }
}

void writeSlideDailyCsv(const SlideRow& row, double ewmaAlpha, const std::string& path) {
  std::vector<DailyPoint> series;
  series.reserve(row.days.size());
  for (const auto& d : row.days) {
    series.push_back({d.day, d.mapUser, d.mapItem, d.mapSym});
  }
  writeDailyCsv(series, ewmaAlpha, path);
}

void writeDailyCsv(const std::vector<DailyPoint>& series, double ewmaAlpha,
                   const std::string& path) {
  auto out = openOut(path);
  out << "day,map_u,map_i,map_sym,ewma_map_sym\n";
  std::vector<double> symSeries;
  symSeries.reserve(series.size());
  for (const auto& p : series) symSeries.push_back(p.mapSym);
  const std::vector<double> smooth = ewma(symSeries, ewmaAlpha);
  for (size_t k = 0; k < series.size(); ++k) {
    out << series[k].day << ',' << formatDouble(series[k].mapUser) << ','
        << formatDouble(series[k].mapItem) << ',' << formatDouble(series[k].mapSym)
        << ',' << formatDouble(smooth[k]) << '\n';
  }
}

void writeTraceCsv(const std::vector<TraceRow>& trace, const std::string& path,
                   bool timing) {
  auto out = openOut(path);
  out << "epoch,train_loss,valid_map_u,valid_map_i,valid_map_sym,seconds\n";
  for (const auto& row : trace) {
    out << row.epoch << ',' << formatDouble(row.trainLoss) << ','
        << formatDouble(row.validMapUser) << ',' << formatDouble(row.validMapItem)
        << ',' << formatDouble(row.validMapSym) << ','
        << secondsField(row.seconds, timing) << '\n';
  }
}

void writeSearchCsv(const SearchResult& result, const std::string& path) {
  auto out = openOut(path);
  out << "trial,lr,lambda,dim,valid_map_sym,epochs,best\n";
  for (size_t k = 0; k < result.trials.size(); ++k) {
    const auto& t = result.trials[k];
    out << t.trial << ',' << formatDouble(t.lr) << ',' << formatDouble(t.lambda) << ','
        << t.dim << ',' << formatDouble(t.validMapSym) << ',' << t.epochs << ','
        << (k == result.bestIndex ? 1 : 0) << '\n';
  }
}

std::string gitBlobSha1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot hash input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  const std::string header = "blob " + std::to_string(content.size()) + '\0';

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digestLen = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, content.data(), content.size());
  EVP_DigestFinal_ex(ctx, digest, &digestLen);
  EVP_MD_CTX_free(ctx);

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * digestLen);
  for (unsigned int k = 0; k < digestLen; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xF];
  }
  return out;
}

void writeManifest(const ExperimentConfig& cfg, const std::string& command,
                   const std::vector<std::string>& inputPaths, const std::string& path) {
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["config"] = nlohmann::json::object();
  for (const auto& [key, value] : cfg.toMap()) manifest["config"][key] = value;
  manifest["inputs"] = nlohmann::json::object();
  for (const std::string& input : inputPaths) {
    manifest["inputs"][input] = gitBlobSha1(input);
  }
  auto out = openOut(path);
  out << manifest.dump(2) << '\n';
}

}  // namespace hcf
