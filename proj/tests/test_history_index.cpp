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
#include <stdexcept>
#include <vector>

#include "hcf/event_log.hpp"
#include "hcf/history_index.hpp"
#include "hcf/rng.hpp"
#include "testutil.hpp"

using namespace hcf;

namespace {

// Last min(n, available) counterpart ids strictly before `day`, oldest to
// newest, scanning the sorted event list directly.
std::vector<int> bruteHistory(const EventLog& log, Side side, int id, int day, int n) {
  std::vector<int> all;
  for (const auto& e : log.events()) {
    if (e.day >= day) continue;
    if (side == Side::kUser && e.user == id) all.push_back(e.item);
    if (side == Side::kItem && e.item == id) all.push_back(e.user);
  }
  const size_t keep = std::min<size_t>(n, all.size());
  return {all.end() - keep, all.end()};
}

}  // namespace

TEST_CASE("histories match a brute-force scan") {
  auto rng = makeEngine(17);
  for (int trial = 0; trial < 5; ++trial) {
    const EventLog log = testutil::randomLog(rng, 6, 8, 15, 150);
    for (int n : {1, 3, 7, 100}) {
      const HistoryIndex index(log, n);
      for (int day = 0; day <= 15; ++day) {
        for (int u = 0; u < log.numUsers(); ++u) {
          const auto got = index.userHistory(u, day);
          const auto want = bruteHistory(log, Side::kUser, u, day, n);
          CHECK(std::vector<int>(got.begin(), got.end()) == want);
        }
        for (int i = 0; i < log.numItems(); ++i) {
          const auto got = index.itemHistory(i, day);
          const auto want = bruteHistory(log, Side::kItem, i, day, n);
          CHECK(std::vector<int>(got.begin(), got.end()) == want);
        }
      }
    }
  }
}

TEST_CASE("same-day events are excluded, duplicates kept") {
  EventLog log({{2, 0, 1}, {2, 0, 2}, {4, 0, 1}, {4, 0, 1}, {5, 0, 3}},
               testutil::names("u", 1), testutil::names("i", 4));
  const HistoryIndex index(log, 10);

  const auto atTwo = index.userHistory(0, 2);
  CHECK(atTwo.empty());  // day-2 events invisible on day 2

  const auto atFour = index.userHistory(0, 4);
  CHECK(std::vector<int>(atFour.begin(), atFour.end()) == std::vector<int>{1, 2});

  const auto atFive = index.userHistory(0, 5);  // day-4 duplicate kept twice
  CHECK(std::vector<int>(atFive.begin(), atFive.end()) == std::vector<int>{1, 2, 1, 1});

  const HistoryIndex cappedIndex(log, 2);
  const auto capped = cappedIndex.userHistory(0, 5);
  CHECK(std::vector<int>(capped.begin(), capped.end()) == std::vector<int>{1, 1});

  const auto on = index.userEventsOn(0, 2);
  CHECK(std::vector<int>(on.begin(), on.end()) == std::vector<int>{1, 2});
  CHECK(index.userEventsOn(0, 3).empty());
  CHECK(index.userEventCount(0) == 5);
  CHECK(index.itemEventCount(1) == 3);
}

TEST_CASE("unknown entities throw") {
  EventLog log({{0, 0, 0}}, testutil::names("u", 2), testutil::names("i", 2));
  const HistoryIndex index(log, 3);
  CHECK_THROWS_AS(index.userHistory(2, 1), std::out_of_range);
  CHECK_THROWS_AS(index.itemHistory(-1, 1), std::out_of_range);
  CHECK(index.userHistory(1, 1).empty());  // known but inactive: empty history
}

TEST_CASE("histories never read the future") {
  auto rng = makeEngine(23);
  const EventLog log = testutil::randomLog(rng, 5, 7, 20, 200);
  const int probeDay = 10;
  const HistoryIndex before(log, 8);

  // Scramble every event at day >= probeDay.
  std::vector<Interaction> mutated = log.events();
  for (auto& e : mutated) {
    if (e.day >= probeDay) {
      e.user = (e.user + 1) % log.numUsers();
      e.item = (e.item + 3) % log.numItems();
    }
  }
  const EventLog mutatedLog(std::move(mutated), log.userNames(), log.itemNames());
  const HistoryIndex after(mutatedLog, 8);

  for (int u = 0; u < log.numUsers(); ++u) {
    for (int day = 0; day <= probeDay; ++day) {
      const auto a = before.userHistory(u, day);
      const auto b = after.userHistory(u, day);
      CHECK(std::vector<int>(a.begin(), a.end()) == std::vector<int>(b.begin(), b.end()));
    }
  }
  for (int i = 0; i < log.numItems(); ++i) {
    for (int day = 0; day <= probeDay; ++day) {
      const auto a = before.itemHistory(i, day);
      const auto b = after.itemHistory(i, day);
      CHECK(std::vector<int>(a.begin(), a.end()) == std::vector<int>(b.begin(), b.end()));
    }
  }
}
