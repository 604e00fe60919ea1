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

#include "hcf/event_log.hpp"
#include "hcf/scorer.hpp"

namespace hcf {

// One ranking task: rank the full opposite-side perimeter for `anchor` on
// `day`. `relevant` holds the distinct in-perimeter counterparts of the
// anchor's events that day (never empty; inactive anchors get no query).
struct Query {
  int day = 0;
  int anchor = 0;
  Side side = Side::kUser;
  std::vector<int> relevant;  // sorted ascending
};

struct DailyPoint {
  int day = 0;
  double mapUser = 0;
  double mapItem = 0;
  double mapSym = 0;
};

struct MetricsReport {
  double mapUser = 0;
  double mapItem = 0;
  double mapSym = 0;
  int64_t userQueries = 0;
  int64_t itemQueries = 0;
  bool degenerate = false;  // no queries on either side
  std::vector<DailyPoint> dailySeries;
};

// 2ab/(a+b), with the limit value 0 when a+b = 0.
double harmonicMean(double a, double b);

// Mean over relevant ids of precision at their rank. `ranking` is the
// best-first candidate order with ties already broken; `relevant` must be a
// non-empty subset of it.
double averagePrecision(std::span<const int> ranking, const std::vector<int>& relevant);

// One query per (day, anchor) pair with at least one in-perimeter event in
// the day range. Events whose counterpart falls outside the perimeter are
// dropped; anchors outside the perimeter are skipped. Output is ordered by
// (day, anchor id).
std::vector<Query> buildQueries(const EventLog& log, DayRange days,
                                const Perimeter& perimeter, Side side);

// Scores every query's candidates (the full opposite-side perimeter) with
// the model at the query's day, ranks best-first with ties broken by
// ascending id, and averages AP per side. Histories come from `index`,
// which may extend past the fitted window; the strictly-before rule keeps
// the query day itself out of reach.
MetricsReport evaluate(const Scorer& model, const HistoryIndex& index,
                       const EventLog& log, DayRange days, const Perimeter& perimeter);

// s0 = x0, sk = alpha*xk + (1-alpha)*s(k-1).
std::vector<double> ewma(const std::vector<double>& xs, double alpha);

}  // namespace hcf
