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

#include "hcf/evaluation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "hcf/errors.hpp"

namespace hcf {

double harmonicMean(double a, double b) {
  if (a + b == 0) return 0.0;
  return 2.0 * a * b / (a + b);
}

double averagePrecision(std::span<const int> ranking, const std::vector<int>& relevant) {
  if (relevant.empty()) throw std::invalid_argument("average precision needs a relevant id");
  std::vector<int> sortedRelevant(relevant);
  std::sort(sortedRelevant.begin(), sortedRelevant.end());
  double sum = 0;
  int hits = 0;
  for (size_t pos = 0; pos < ranking.size(); ++pos) {
    if (std::binary_search(sortedRelevant.begin(), sortedRelevant.end(), ranking[pos])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(pos + 1);
    }
  }
  if (hits != static_cast<int>(sortedRelevant.size())) {
    throw std::invalid_argument("relevant ids must all appear in the ranking");
  }
  return sum / static_cast<double>(sortedRelevant.size());
}

std::vector<Query> buildQueries(const EventLog& log, DayRange days,
                                const Perimeter& perimeter, Side side) {
  std::map<std::pair<int, int>, std::set<int>> relevantByKey;
  for (const auto& e : log.events()) {
    if (!days.contains(e.day)) continue;
    const int anchor = side == Side::kUser ? e.user : e.item;
    const int counterpart = side == Side::kUser ? e.item : e.user;
    if (!perimeter.contains(side, anchor)) continue;
    if (!perimeter.contains(opposite(side), counterpart)) continue;
    relevantByKey[{e.day, anchor}].insert(counterpart);
  }
  std::vector<Query> queries;
  queries.reserve(relevantByKey.size());
  for (const auto& [key, rel] : relevantByKey) {
    Query q;
    q.day = key.first;
    q.anchor = key.second;
    q.side = side;
    q.relevant.assign(rel.begin(), rel.end());
    queries.push_back(std::move(q));
  }
  return queries;
}

namespace {

double scoreQuery(const DayScorer& scorer, const Query& q,
                  const std::vector<int>& candidates,
                  std::vector<std::pair<double, int>>& scratch) {
  scratch.clear();
  scratch.reserve(candidates.size());
  for (int c : candidates) {
    const double s = q.side == Side::kUser ? scorer.score(q.anchor, c)
                                           : scorer.score(c, q.anchor);
    scratch.emplace_back(s, c);
  }
  std::sort(scratch.begin(), scratch.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  double sum = 0;
  int hits = 0;
  for (size_t pos = 0; pos < scratch.size(); ++pos) {
    if (std::binary_search(q.relevant.begin(), q.relevant.end(), scratch[pos].second)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(pos + 1);
    }
  }
  return sum / static_cast<double>(q.relevant.size());
}

}  // namespace

MetricsReport evaluate(const Scorer& model, const HistoryIndex& index,
                       const EventLog& log, DayRange days, const Perimeter& perimeter) {
  const auto userQueries = buildQueries(log, days, perimeter, Side::kUser);
  const auto itemQueries = buildQueries(log, days, perimeter, Side::kItem);

  MetricsReport report;
  report.userQueries = static_cast<int64_t>(userQueries.size());
  report.itemQueries = static_cast<int64_t>(itemQueries.size());
  if (userQueries.empty() && itemQueries.empty()) {
    report.degenerate = true;
    return report;
  }

  std::set<int> activeDays;
  for (const auto& q : userQueries) activeDays.insert(q.day);
  for (const auto& q : itemQueries) activeDays.insert(q.day);

  std::vector<std::pair<double, int>> scratch;
  double userSum = 0, itemSum = 0;
  size_t uAt = 0, iAt = 0;
  for (int day : activeDays) {
    const auto scorer = model.makeDayScorer(index, day, perimeter);
    DailyPoint point;
    point.day = day;
    double dayUserSum = 0, dayItemSum = 0;
    int64_t dayUserCount = 0, dayItemCount = 0;
    while (uAt < userQueries.size() && userQueries[uAt].day == day) {
      const double ap = scoreQuery(*scorer, userQueries[uAt], perimeter.items, scratch);
      userSum += ap;
      dayUserSum += ap;
      ++dayUserCount;
      ++uAt;
    }
    while (iAt < itemQueries.size() && itemQueries[iAt].day == day) {
      const double ap = scoreQuery(*scorer, itemQueries[iAt], perimeter.users, scratch);
      itemSum += ap;
      dayItemSum += ap;
      ++dayItemCount;
      ++iAt;
    }
    point.mapUser = dayUserCount ? dayUserSum / static_cast<double>(dayUserCount) : 0.0;
    point.mapItem = dayItemCount ? dayItemSum / static_cast<double>(dayItemCount) : 0.0;
    point.mapSym = harmonicMean(point.mapUser, point.mapItem);
    report.dailySeries.push_back(point);
  }

  report.mapUser =
      userQueries.empty() ? 0.0 : userSum / static_cast<double>(userQueries.size());
  report.mapItem =
      itemQueries.empty() ? 0.0 : itemSum / static_cast<double>(itemQueries.size());
  report.mapSym = harmonicMean(report.mapUser, report.mapItem);
  return report;
}

std::vector<double> ewma(const std::vector<double>& xs, double alpha) {
  if (alpha <= 0 || alpha > 1) throw ConfigError("ewma alpha must be in (0, 1]");
  std::vector<double> out;
  out.reserve(xs.size());
  double s = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    s = k == 0 ? xs[0] : alpha * xs[k] + (1 - alpha) * s;
    out.push_back(s);
  }
  return out;
}

}  // namespace hcf
