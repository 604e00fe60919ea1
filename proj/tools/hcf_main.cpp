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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcf/errors.hpp"
#include "hcf/event_log.hpp"
#include "hcf/experiment.hpp"
#include "hcf/gradient_check.hpp"
#include "hcf/rng.hpp"
#include "hcf/serialization.hpp"
#include "hcf/training.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string configPath;
  std::vector<std::string> overrides;
  std::string outDir = ".";
};

void addCommon(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--config", opts.configPath, "key=value config file");
  sub->add_option("--set", opts.overrides, "override one config key (key=value)")
      ->take_all();
  sub->add_option("--out", opts.outDir, "output directory (created if missing)");
}

hcf::ExperimentConfig resolveConfig(const CommonOpts& opts) {
  hcf::ConfigMap map;
  if (!opts.configPath.empty()) map = hcf::parseConfigFile(opts.configPath);
  for (const std::string& assignment : opts.overrides) {
    hcf::applyOverride(map, assignment);
  }
  return hcf::ExperimentConfig::fromMap(map);
}

std::string outPath(const CommonOpts& opts, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(opts.outDir, ec);
  if (ec) throw hcf::DataError("cannot create output directory: " + opts.outDir);
  return (std::filesystem::path(opts.outDir) / name).string();
}

void writeReport(const json& report, const CommonOpts& opts) {
  const std::string path = outPath(opts, "report.json");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw hcf::DataError("cannot write output file: " + path);
  out << report.dump(2) << '\n';
}

std::vector<std::string> manifestInputs(const CommonOpts& opts,
                                        const hcf::ExperimentConfig& cfg,
                                        std::vector<std::string> extra = {}) {
  std::vector<std::string> inputs;
  if (!opts.configPath.empty()) inputs.push_back(opts.configPath);
  if (cfg.dataKind == hcf::ExperimentConfig::DataKind::kCsv) {
    inputs.push_back(cfg.csvPath);
  }
  inputs.insert(inputs.end(), extra.begin(), extra.end());
  return inputs;
}

json logSummary(const hcf::EventLog& log) {
  json j;
  j["events"] = log.events().size();
  j["users"] = log.numUsers();
  j["items"] = log.numItems();
  if (!log.events().empty()) {
    j["first_day"] = log.dayRange().first;
    j["last_day"] = log.dayRange().last;
  }
  return j;
}

json metricsJson(const hcf::MetricsReport& report) {
  json j;
  j["map_user"] = report.mapUser;
  j["map_item"] = report.mapItem;
  j["map_sym"] = report.mapSym;
  j["user_queries"] = report.userQueries;
  j["item_queries"] = report.itemQueries;
  j["degenerate"] = report.degenerate;
  return j;
}

hcf::DayRange evalRange(const hcf::ExperimentConfig& cfg, const hcf::EventLog& full) {
  const hcf::TemporalSplit split =
      hcf::deriveSplit(full.dayRange(), cfg.validDays, cfg.testDays);
  return cfg.evalDays == "valid" ? split.valid : split.test;
}

int runDataset(const CommonOpts& opts, const std::string& command) {
  const hcf::ExperimentConfig cfg = resolveConfig(opts);
  if (command == "ingest" && cfg.dataKind != hcf::ExperimentConfig::DataKind::kCsv) {
    throw hcf::ConfigError("ingest requires data.kind=csv and data.csv");
  }
  const hcf::EventLog log = hcf::loadDataset(cfg);
  hcf::writeCsv(log, outPath(opts, "events.csv"));

  json report;
  report["command"] = command;
  report["data"] = logSummary(log);
  writeReport(report, opts);
  hcf::writeManifest(cfg, command, manifestInputs(opts, cfg),
                     outPath(opts, "manifest.json"));
  return 0;
}

int runTrain(const CommonOpts& opts) {
  const hcf::ExperimentConfig cfg = resolveConfig(opts);
  const hcf::EventLog full = hcf::loadDataset(cfg);
  const hcf::FittedModel fitted = hcf::runTraining(full, cfg);

  const std::string tag = hcf::modelKindName(cfg.modelKind);
  const std::string modelPath = outPath(opts, "model-" + tag + ".bin");
  switch (cfg.modelKind) {
    case hcf::ModelKind::kHcf:
      hcf::saveHcfModel(*fitted.model.hcf, modelPath, fitted.model.vocab);
      break;
    case hcf::ModelKind::kMfBpr:
    case hcf::ModelKind::kMfImplicit:
      hcf::saveMfModel(*fitted.model.mf, modelPath, fitted.model.vocab);
      break;
    case hcf::ModelKind::kHistorical:
      hcf::saveHistoricalModel(*fitted.model.historical, modelPath, fitted.model.vocab);
      break;
  }
  hcf::writeTraceCsv(fitted.fit.trace, outPath(opts, "trace.csv"), cfg.timing);

  const hcf::DayRange days = evalRange(cfg, full);
  const hcf::MetricsReport metrics = hcf::evaluateWindow(fitted, full, days, cfg);
  hcf::writeDailyCsv(metrics.dailySeries, cfg.ewmaAlpha, outPath(opts, "daily.csv"));

  json report;
  report["command"] = "train";
  report["model"] = "model-" + tag + ".bin";
  report["model_kind"] = tag;
  report["best_epoch"] = fitted.fit.bestEpoch;
  report["valid_map_user"] = fitted.fit.bestValidMapUser;
  report["valid_map_item"] = fitted.fit.bestValidMapItem;
  report["valid_map_sym"] = fitted.fit.bestValidMapSym;
  report["eval_days"] = cfg.evalDays;
  report["eval"] = metricsJson(metrics);
  writeReport(report, opts);
  hcf::writeManifest(cfg, "train", manifestInputs(opts, cfg),
                     outPath(opts, "manifest.json"));
  return 0;
}

int runEval(const CommonOpts& opts, const std::string& modelPath) {
  if (modelPath.empty()) throw hcf::ConfigError("eval requires --model");
  const hcf::ExperimentConfig cfg = resolveConfig(opts);
  const hcf::EventLog full = hcf::loadDataset(cfg);
  const hcf::LoadedModel loaded = hcf::loadModel(modelPath);

  const hcf::DayRange days = evalRange(cfg, full);
  const hcf::MetricsReport metrics = hcf::evaluateLoaded(loaded, full, days, cfg);
  hcf::writeDailyCsv(metrics.dailySeries, cfg.ewmaAlpha, outPath(opts, "daily.csv"));

  json report;
  report["command"] = "eval";
  report["model"] = modelPath;
  report["model_kind"] = hcf::modelKindName(loaded.kind);
  report["eval_days"] = cfg.evalDays;
  report["eval"] = metricsJson(metrics);
  writeReport(report, opts);
  hcf::writeManifest(cfg, "eval", manifestInputs(opts, cfg, {modelPath}),
                     outPath(opts, "manifest.json"));
  return 0;
}

int runSweep(const CommonOpts& opts) {
  const hcf::ExperimentConfig cfg = resolveConfig(opts);
  const hcf::EventLog full = hcf::loadDataset(cfg);
  const hcf::SweepResult result = hcf::runWindowSweep(full, cfg);
  hcf::writeSweepCsv(result, outPath(opts, "sweep.csv"), cfg.timing);

  json rows = json::array();
  const hcf::SweepRow* best = nullptr;
  for (const auto& row : result.rows) {
    json j;
    j["window_days"] = row.windowDays;
    j["status"] = row.status;
    j["valid_map_sym"] = row.validMapSym;
    j["test_map_sym"] = row.testMapSym;
    j["epochs"] = row.epochs;
    rows.push_back(j);
    if (row.status != "empty" && (!best || row.validMapSym > best->validMapSym)) {
      best = &row;
    }
  }
  json report;
  report["command"] = "sweep";
  report["model_kind"] = hcf::modelKindName(cfg.modelKind);
  report["rows"] = rows;
  if (best) {
    report["best_window_days"] = best->windowDays;
    report["best_valid_map_sym"] = best->validMapSym;
    report["test_map_sym_at_best"] = best->testMapSym;
  }
  writeReport(report, opts);
  hcf::writeManifest(cfg, "sweep", manifestInputs(opts, cfg),
                     outPath(opts, "manifest.json"));
  return 0;
}

int runSlide(const CommonOpts& opts) {
  const hcf::ExperimentConfig cfg = resolveConfig(opts);
  const hcf::EventLog full = hcf::loadDataset(cfg);
  const hcf::SlideResult result = hcf::runSlidingStudy(full, cfg);
  hcf::writeSlideCsv(result, outPath(opts, "slide.csv"), cfg.timing);

  json rows = json::array();
  for (const auto& row : result.rows) {
    const std::string name = hcf::modelKindName(row.kind);
    hcf::writeSlideDailyCsv(row, cfg.ewmaAlpha, outPath(opts, "daily-" + name + ".csv"));
    json j;
    j["algorithm"] = name;
    j["window_days"] = row.windowDays;
    j["epochs"] = row.epochs;
    j["map_user"] = row.mapUser;
    j["map_item"] = row.mapItem;
    j["map_sym"] = row.mapSym;
    rows.push_back(j);
  }
  json report;
  report["command"] = "slide";
  report["rows"] = rows;
  writeReport(report, opts);
  hcf::writeManifest(cfg, "slide", manifestInputs(opts, cfg),
                     outPath(opts, "manifest.json"));
  return 0;
}

int runSearch(const CommonOpts& opts) {
  const hcf::ExperimentConfig cfg = resolveConfig(opts);
  const hcf::EventLog full = hcf::loadDataset(cfg);
  const hcf::SearchResult result = hcf::runRandomSearch(full, cfg);
  hcf::writeSearchCsv(result, outPath(opts, "search.csv"));

  const hcf::SearchTrial& best = result.trials[result.bestIndex];
  json report;
  report["command"] = "search";
  report["model_kind"] = hcf::modelKindName(cfg.modelKind);
  report["trials"] = result.trials.size();
  report["best"] = {{"trial", best.trial},     {"lr", best.lr},
                    {"lambda", best.lambda},   {"dim", best.dim},
                    {"valid_map_sym", best.validMapSym}, {"epochs", best.epochs}};
  writeReport(report, opts);
  hcf::writeManifest(cfg, "search", manifestInputs(opts, cfg),
                     outPath(opts, "manifest.json"));
  return 0;
}

struct GradcheckOpts {
  int seeds = 20;
  double epsilon = 1e-5;
  double tolerance = 1e-4;
};

int runGradcheck(const CommonOpts& opts, const GradcheckOpts& gc) {
  const hcf::ExperimentConfig cfg = resolveConfig(opts);
  if (gc.seeds < 1) throw hcf::ConfigError("--seeds must be >= 1");
  if (gc.tolerance <= 0) throw hcf::ConfigError("--tolerance must be > 0");

  hcf::SyntheticConfig data;
  data.numUsers = 12;
  data.numItems = 16;
  data.latentDim = 4;
  data.driftStd = 0.05;
  data.eventsPerDay = 25;
  data.numDays = 20;
  const int historyCapacity = 5;
  const size_t batchSize = 12;

  double maxHcf = 0, maxBpr = 0, maxImplicit = 0;
  for (int s = 0; s < gc.seeds; ++s) {
    const uint64_t base = hcf::deriveSeed(cfg.seed, 11, static_cast<uint64_t>(s));
    data.seed = hcf::deriveSeed(base, 1);
    const hcf::EventLog log = hcf::generateSynthetic(data);
    const hcf::HistoryIndex index(log, historyCapacity);
    const hcf::Perimeter perimeter = hcf::perimeterOf(log);

    hcf::NegativeSampler sampler(index, perimeter);
    auto rng = hcf::makeEngine(hcf::deriveSeed(base, 2));
    const std::vector<hcf::Positive> positives = hcf::enumeratePositives(log);
    std::vector<hcf::TripletEntry> batch;
    for (size_t k = 0; k < positives.size() && batch.size() < batchSize; ++k) {
      if (auto entry = sampler.sample(positives[k], rng)) batch.push_back(*entry);
    }
    if (batch.empty()) throw hcf::DataError("gradcheck sampled no triplets");

    hcf::HcfModel::Config hc;
    hc.numUsers = log.numUsers();
    hc.numItems = log.numItems();
    hc.dim = 8;
    hc.historyCapacity = historyCapacity;
    hc.hiddenChannels = {8, 8};
    hc.seed = hcf::deriveSeed(base, 3);
    hcf::HcfModel hcfModel(hc);
    maxHcf = std::max(maxHcf,
                      hcf::checkBprGradients(hcfModel, index, batch, gc.epsilon).maxRelError);

    hcf::MfModel::Config mc;
    mc.numUsers = log.numUsers();
    mc.numItems = log.numItems();
    mc.dim = 8;
    mc.seed = hcf::deriveSeed(base, 4);
    hcf::MfModel bprModel(mc);
    maxBpr = std::max(maxBpr,
                      hcf::checkBprGradients(bprModel, index, batch, gc.epsilon).maxRelError);

    mc.objective = hcf::MfModel::Objective::kImplicit;
    mc.dim = 4;
    mc.seed = hcf::deriveSeed(base, 5);
    hcf::MfModel implicitModel(mc);
    maxImplicit = std::max(
        maxImplicit, hcf::checkImplicitGradients(implicitModel, log, gc.epsilon).maxRelError);
  }

  const double worst = std::max({maxHcf, maxBpr, maxImplicit});
  const bool pass = worst < gc.tolerance;
  json report;
  report["command"] = "gradcheck";
  report["seeds"] = gc.seeds;
  report["epsilon"] = gc.epsilon;
  report["tolerance"] = gc.tolerance;
  report["max_rel_error"] = {{"hcf", maxHcf},
                             {"mf_bpr", maxBpr},
                             {"mf_implicit", maxImplicit},
                             {"overall", worst}};
  report["pass"] = pass;
  writeReport(report, opts);

  std::cout << "gradcheck max relative error " << hcf::formatDouble(worst) << " over "
            << gc.seeds << " seeds: " << (pass ? "PASS" : "FAIL") << '\n';
  if (!pass) throw hcf::DivergenceError("gradient check exceeded tolerance");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"history-augmented collaborative filtering workbench"};
  app.require_subcommand(1);

  CommonOpts opts;
  GradcheckOpts gc;
  std::string modelPath;

  CLI::App* ingest = app.add_subcommand("ingest", "normalize a CSV event log");
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic event log");
  CLI::App* train = app.add_subcommand("train", "fit one model on the training split");
  CLI::App* eval = app.add_subcommand("eval", "score a saved model on fresh data");
  CLI::App* sweep = app.add_subcommand("sweep", "training-window size sweep");
  CLI::App* slide = app.add_subcommand("slide", "daily sliding-window retraining study");
  CLI::App* search = app.add_subcommand("search", "random hyperparameter search");
  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference gradient verification");

  for (CLI::App* sub : {ingest, synth, train, eval, sweep, slide, search, gradcheck}) {
    addCommon(sub, opts);
  }
  eval->add_option("--model", modelPath, "saved model file to score");
  gradcheck->add_option("--seeds", gc.seeds, "number of random restarts");
  gradcheck->add_option("--epsilon", gc.epsilon, "finite-difference step");
  gradcheck->add_option("--tolerance", gc.tolerance, "max allowed relative error");

  try {
    app.parse(argc, argv);
    if (ingest->parsed()) return runDataset(opts, "ingest");
    if (synth->parsed()) return runDataset(opts, "synth");
    if (train->parsed()) return runTrain(opts);
    if (eval->parsed()) return runEval(opts, modelPath);
    if (sweep->parsed()) return runSweep(opts);
    if (slide->parsed()) return runSlide(opts);
    if (search->parsed()) return runSearch(opts);
    if (gradcheck->parsed()) return runGradcheck(opts, gc);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const hcf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const hcf::DivergenceError& e) {
    std::cerr << "numerical divergence: " << e.what() << '\n';
    return 3;
  } catch (const hcf::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
