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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hcf/baselines.hpp"
#include "hcf/errors.hpp"
#include "hcf/evaluation.hpp"
#include "hcf/gradient_check.hpp"
#include "hcf/history_index.hpp"
#include "hcf/numeric.hpp"
#include "hcf/rng.hpp"
#include "hcf/training.hpp"
#include "testutil.hpp"

using namespace hcf;

TEST_CASE("historical counts match a group-by oracle") {
  auto rng = makeEngine(53);
  const EventLog log = testutil::randomLog(rng, 6, 7, 12, 300);
  const HistoricalModel model(log);

  std::map<std::pair<int, int>, double> oracle;
  for (const auto& e : log.events()) oracle[{e.user, e.item}] += 1.0;

  const HistoryIndex index(log, 1);
  for (int u = 0; u < log.numUsers(); ++u) {
    for (int i = 0; i < log.numItems(); ++i) {
      const auto it = oracle.find({u, i});
      const double want = it == oracle.end() ? 0.0 : it->second;
      CHECK(model.count(u, i) == want);
      // Day is irrelevant to a count model.
      CHECK(model.score(index, u, i, 0) == want);
      CHECK(model.score(index, u, i, 99) == want);
    }
  }

  const auto rows = model.countRows();
  CHECK(rows.size() == oracle.size());
  for (size_t k = 1; k < rows.size(); ++k) CHECK(rows[k - 1] < rows[k]);
  const HistoricalModel back =
      HistoricalModel::fromCounts(log.numUsers(), log.numItems(), rows);
  for (const auto& row : rows) {
    CHECK(back.count(static_cast<int>(row[0]), static_cast<int>(row[1])) == row[2]);
  }
  CHECK_THROWS_AS(HistoricalModel::fromCounts(6, 7, {{0.0, 0.0, 0.5}}), DataError);

  CHECK_THROWS_AS(model.count(-1, 0), std::out_of_range);
  CHECK_THROWS_AS(model.count(0, 7), std::out_of_range);
}

TEST_CASE("a window adding one duplicate of every pair keeps rankings") {
  // Days [3, 6] hold the base pairs; days [0, 2] repeat each pair once.
  std::vector<Interaction> base{{3, 0, 0}, {4, 0, 1}, {4, 0, 1}, {5, 1, 2}, {6, 2, 0}};
  std::vector<Interaction> all = base;
  all.push_back({0, 0, 0});
  all.push_back({1, 0, 1});
  all.push_back({1, 1, 2});
  all.push_back({2, 2, 0});

  const auto users = testutil::names("u", 3);
  const auto items = testutil::names("i", 3);
  const EventLog small(std::move(base), users, items);
  const EventLog large(std::move(all), users, items);
  REQUIRE(perimeterOf(small).users == perimeterOf(large).users);
  REQUIRE(perimeterOf(small).items == perimeterOf(large).items);

  const HistoricalModel a(small);
  const HistoricalModel b(large);

  // Counts shift by one but every pairwise order is preserved.
  for (int u = 0; u < 3; ++u) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const bool before = a.count(u, i) < a.count(u, j);
        const bool after = b.count(u, i) < b.count(u, j);
        CHECK(before == after);
      }
    }
  }

  // Identical mAP on a shared evaluation set.
  EventLog evalLog({{8, 0, 1}, {8, 1, 2}, {9, 2, 0}}, users, items);
  const HistoryIndex index(evalLog, 1);
  const Perimeter perimeter = perimeterOf(small);
  const MetricsReport ra = evaluate(a, index, evalLog, {8, 9}, perimeter);
  const MetricsReport rb = evaluate(b, index, evalLog, {8, 9}, perimeter);
  CHECK(ra.mapUser == rb.mapUser);
  CHECK(ra.mapItem == rb.mapItem);
  CHECK(ra.mapSym == rb.mapSym);
}

TEST_CASE("mf factors score by dot product") {
  MfModel::Config cfg;
  cfg.numUsers = 4;
  cfg.numItems = 5;
  cfg.dim = 3;
  cfg.seed = 5;
  const MfModel model(cfg);
  CHECK(model.parameters().size() == (4u + 5u) * 3u);
  CHECK(model.embeddingParamCount() == model.parameters().size());

  EventLog log({{0, 0, 0}}, testutil::names("u", 4), testutil::names("i", 5));
  const HistoryIndex index(log, 1);
  for (int u = 0; u < 4; ++u) {
    for (int i = 0; i < 5; ++i) {
      CHECK(model.score(index, u, i, 3) == dot(model.userFactor(u), model.itemFactor(i)));
    }
  }
  CHECK_THROWS_AS(model.score(index, 4, 0, 0), std::out_of_range);

  const MfModel again(cfg);
  CHECK(std::vector<double>(model.parameters().begin(), model.parameters().end()) ==
        std::vector<double>(again.parameters().begin(), again.parameters().end()));
}

TEST_CASE("mf bpr entry loss and gradients") {
  auto rng = makeEngine(59);
  const EventLog log = testutil::randomLog(rng, 5, 6, 10, 120);
  const HistoryIndex index(log, 3);

  MfModel::Config cfg;
  cfg.numUsers = 5;
  cfg.numItems = 6;
  cfg.dim = 4;
  cfg.seed = 13;
  MfModel model(cfg);

  const TripletEntry entry{4, 1, 2, 3, Side::kUser};
  CHECK(model.entryLoss(index, entry) ==
        doctest::Approx(bprLoss(dot(model.userFactor(1), model.itemFactor(2)),
                                dot(model.userFactor(1), model.itemFactor(3))))
            .epsilon(1e-15));

  NegativeSampler sampler(index, perimeterOf(log));
  std::vector<TripletEntry> batch;
  for (const auto& pos : enumeratePositives(log)) {
    if (auto e = sampler.sample(pos, rng)) batch.push_back(*e);
    if (batch.size() == 12) break;
  }
  REQUIRE(batch.size() == 12);
  CHECK(checkBprGradients(model, index, batch).maxRelError < 1e-4);
}

TEST_CASE("implicit loss at zero factors sums the confidences") {
  auto rng = makeEngine(61);
  const EventLog log = testutil::randomLog(rng, 5, 6, 8, 100);

  MfModel::Config cfg;
  cfg.numUsers = 5;
  cfg.numItems = 6;
  cfg.dim = 3;
  cfg.objective = MfModel::Objective::kImplicit;
  cfg.alphaConf = 40;
  cfg.lambdaReg = 0.01;
  cfg.seed = 3;
  MfModel model(cfg);
  std::fill(model.parameters().begin(), model.parameters().end(), 0.0);

  std::map<std::pair<int, int>, double> counts;
  for (const auto& e : log.events()) counts[{e.user, e.item}] += 1.0;
  double want = 0;
  for (const auto& [pair, r] : counts) want += 1.0 + cfg.alphaConf * r;
  CHECK(model.implicitLoss(log) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("implicit gradients match central differences") {
  auto rng = makeEngine(67);
  const EventLog log = testutil::randomLog(rng, 5, 6, 8, 90);
  MfModel::Config cfg;
  cfg.numUsers = 5;
  cfg.numItems = 6;
  cfg.dim = 3;
  cfg.objective = MfModel::Objective::kImplicit;
  cfg.seed = 29;
  MfModel model(cfg);
  CHECK(checkImplicitGradients(model, log).maxRelError < 1e-4);
}

TEST_CASE("implicit full-batch steps reduce the objective") {
  auto rng = makeEngine(71);
  const EventLog log = testutil::randomLog(rng, 6, 8, 10, 200);
  MfModel::Config cfg;
  cfg.numUsers = 6;
  cfg.numItems = 8;
  cfg.dim = 4;
  cfg.objective = MfModel::Objective::kImplicit;
  cfg.seed = 31;
  MfModel model(cfg);

  std::vector<double> losses;
  for (int step = 0; step < 30; ++step) losses.push_back(mfImplicitStep(model, log, 2e-5));
  CHECK(losses.back() < losses.front());
  CHECK(model.implicitLoss(log) < losses.back());

  MfModel::Config bprCfg = cfg;
  bprCfg.objective = MfModel::Objective::kBpr;
  MfModel bprModel(bprCfg);
  CHECK_THROWS_AS(mfImplicitStep(bprModel, log, 1e-3), ConfigError);
}

TEST_CASE("implicit training diverges loudly under a huge step") {
  auto rng = makeEngine(73);
  const EventLog log = testutil::randomLog(rng, 5, 6, 8, 150);
  MfModel::Config cfg;
  cfg.numUsers = 5;
  cfg.numItems = 6;
  cfg.dim = 3;
  cfg.objective = MfModel::Objective::kImplicit;
  cfg.seed = 37;
  MfModel model(cfg);
  CHECK_THROWS_AS(
      [&] {
        for (int k = 0; k < 200; ++k) mfImplicitStep(model, log, 1e6);
      }(),
      DivergenceError);
}
