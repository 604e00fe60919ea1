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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "hcf/errors.hpp"
#include "hcf/event_log.hpp"
#include "testutil.hpp"

using namespace hcf;

namespace {

std::string tempFile(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  out << content;
}

}  // namespace

TEST_CASE("constructor stable-sorts by day") {
  EventLog log({{3, 0, 1}, {1, 1, 0}, {3, 1, 1}, {0, 0, 0}},
               testutil::names("u", 2), testutil::names("i", 2));
  REQUIRE(log.events().size() == 4);
  CHECK(log.events()[0] == Interaction{0, 0, 0});
  CHECK(log.events()[1] == Interaction{1, 1, 0});
  CHECK(log.events()[2] == Interaction{3, 0, 1});  // input order kept within day 3
  CHECK(log.events()[3] == Interaction{3, 1, 1});
  CHECK(log.dayRange() == DayRange{0, 3});
  CHECK(log.userId("u1") == 1);
  CHECK(log.itemId("nope") == -1);
}

TEST_CASE("constructor rejects out-of-range ids") {
  CHECK_THROWS_AS(EventLog({{0, 2, 0}}, testutil::names("u", 2), testutil::names("i", 1)),
                  DataError);
  CHECK_THROWS_AS(EventLog({{0, 0, -1}}, testutil::names("u", 1), testutil::names("i", 1)),
                  DataError);
}

TEST_CASE("ingestCsv maps dates to offsets from the earliest date") {
  const std::string path = tempFile("hcf_ingest_basic.csv");
  writeFile(path,
            "date,user_id,item_id\n"
            "2020-01-03,alice,milk\n"
            "2020-01-01,bob,eggs\n"
            "2020-01-03,alice,milk\n"  // duplicate row kept
            "2020-03-01,alice,eggs\n");
  const EventLog log = ingestCsv(path);
  REQUIRE(log.events().size() == 4);
  CHECK(log.dayRange().first == 0);
  CHECK(log.events()[0].day == 0);  // 2020-01-01
  CHECK(log.events()[1].day == 2);  // 2020-01-03
  CHECK(log.events()[2].day == 2);
  CHECK(log.events()[3].day == 60);  // leap year: Jan 31 + Feb 29 days after Jan 1
  CHECK(log.numUsers() == 2);
  CHECK(log.numItems() == 2);
  CHECK(log.events()[1].user == log.userId("alice"));
  CHECK(log.events()[1].item == log.itemId("milk"));
  std::remove(path.c_str());
}

TEST_CASE("ingestCsv reports malformed rows with line numbers") {
  const std::string path = tempFile("hcf_ingest_bad.csv");
  writeFile(path, "date,user_id,item_id\n2020-01-01,a,b\nnot-a-date,a,b\n");
  CHECK_THROWS_WITH_AS(ingestCsv(path), doctest::Contains("line 3"), DataError);

  writeFile(path, "date,user_id,item_id\n2020-01-01,missing-field\n");
  CHECK_THROWS_WITH_AS(ingestCsv(path), doctest::Contains("line 2"), DataError);

  writeFile(path, "date,user_id,item_id\n");
  CHECK_THROWS_AS(ingestCsv(path), DataError);

  CHECK_THROWS_AS(ingestCsv(tempFile("hcf_no_such_file.csv")), DataError);
  std::remove(path.c_str());
}

TEST_CASE("writeCsv then ingestCsv round-trips a log") {
  auto rng = makeEngine(3);
  EventLog log = testutil::randomLog(rng, 8, 9, 15, 200);
  // Anchor day zero so the re-ingested offsets line up.
  auto events = log.events();
  events.push_back({0, 0, 0});
  log = EventLog(std::move(events), log.userNames(), log.itemNames());

  const std::string path = tempFile("hcf_roundtrip.csv");
  writeCsv(log, path);
  const EventLog back = ingestCsv(path);
  REQUIRE(back.events().size() == log.events().size());
  for (size_t k = 0; k < log.events().size(); ++k) {
    const Interaction& a = log.events()[k];
    const Interaction& b = back.events()[k];
    CHECK(a.day == b.day);
    CHECK(log.userName(a.user) == back.userName(b.user));
    CHECK(log.itemName(a.item) == back.itemName(b.item));
  }
  std::remove(path.c_str());
}

TEST_CASE("filterDays keeps the id space") {
  auto rng = makeEngine(4);
  const EventLog log = testutil::randomLog(rng, 5, 6, 20, 100);
  const EventLog mid = log.filterDays(5, 10);
  CHECK(mid.numUsers() == log.numUsers());
  CHECK(mid.numItems() == log.numItems());
  for (const auto& e : mid.events()) {
    CHECK(e.day >= 5);
    CHECK(e.day <= 10);
  }
  size_t expected = 0;
  for (const auto& e : log.events()) expected += e.day >= 5 && e.day <= 10;
  CHECK(mid.events().size() == expected);
}

TEST_CASE("sliceWindow re-densifies ids and records parents") {
  EventLog log({{0, 0, 0}, {1, 2, 3}, {2, 2, 1}, {5, 4, 3}},
               testutil::names("u", 5), testutil::names("i", 4));
  const EventLog slice = sliceWindow(log, 2, 2);  // days [1, 2]
  REQUIRE(slice.events().size() == 2);
  CHECK(slice.numUsers() == 1);  // only u2 active
  CHECK(slice.numItems() == 2);  // i1, i3
  CHECK(slice.userName(0) == "u2");
  CHECK(slice.parentUserIds() == std::vector<int>{2});
  CHECK(slice.parentItemIds() == std::vector<int>{1, 3});  // ascending parent order
  CHECK(slice.events()[0] == Interaction{1, 0, 1});        // (u2, i3)
  CHECK(slice.events()[1] == Interaction{2, 0, 0});        // (u2, i1)

  // Window clamps to available days.
  const EventLog all = sliceWindow(log, 5, 100);
  CHECK(all.events().size() == 4);
  const EventLog none = sliceWindow(log, -1, 3);
  CHECK(none.events().empty());
}

TEST_CASE("projectOnto maps by name and drops unknown entities") {
  EventLog full({{0, 0, 0}, {1, 1, 1}, {2, 2, 0}, {3, 1, 0}},
                testutil::names("u", 3), testutil::names("i", 2));
  const EventLog target = sliceWindow(full, 1, 2);  // u0, u1 / i0, i1
  REQUIRE(target.numUsers() == 2);
  const EventLog proj = projectOnto(full, target);
  CHECK(proj.numUsers() == target.numUsers());
  CHECK(proj.numItems() == target.numItems());
  // Event at day 2 involves u2, unknown to the slice: dropped.
  REQUIRE(proj.events().size() == 3);
  CHECK(proj.events()[2].day == 3);
  CHECK(proj.userName(proj.events()[2].user) == "u1");
  CHECK(proj.itemName(proj.events()[2].item) == "i0");
}

TEST_CASE("transposeLog swaps roles and is an involution") {
  auto rng = makeEngine(5);
  const EventLog log = testutil::randomLog(rng, 4, 7, 10, 60);
  const EventLog t = transposeLog(log);
  CHECK(t.numUsers() == log.numItems());
  CHECK(t.numItems() == log.numUsers());
  REQUIRE(t.events().size() == log.events().size());
  for (size_t k = 0; k < log.events().size(); ++k) {
    CHECK(t.events()[k].day == log.events()[k].day);
    CHECK(t.events()[k].user == log.events()[k].item);
    CHECK(t.events()[k].item == log.events()[k].user);
  }
  const EventLog tt = transposeLog(t);
  CHECK(tt.events() == log.events());
  CHECK(tt.userNames() == log.userNames());
  CHECK(tt.itemNames() == log.itemNames());
}

TEST_CASE("mergeLogs concatenates event sets over one id space") {
  auto rng = makeEngine(6);
  const EventLog log = testutil::randomLog(rng, 5, 5, 20, 80);
  const EventLog a = log.filterDays(0, 9);
  const EventLog b = log.filterDays(10, 19);
  const EventLog merged = mergeLogs(a, b);
  CHECK(merged.events() == log.events());
  CHECK(merged.numUsers() == log.numUsers());

  const EventLog other({{0, 0, 0}}, testutil::names("x", 1), testutil::names("i", 5));
  CHECK_THROWS_AS(mergeLogs(a, other), DataError);
}

TEST_CASE("TemporalSplit validates ordering") {
  TemporalSplit ok{{0, 9}, {10, 12}, {13, 15}};
  CHECK_NOTHROW(ok.validate());
  TemporalSplit overlap{{0, 10}, {10, 12}, {13, 15}};
  CHECK_THROWS_AS(overlap.validate(), ConfigError);
  // Gaps respect the ordering invariant, only overlap and reversal do not.
  TemporalSplit gap{{0, 9}, {11, 12}, {14, 15}};
  CHECK_NOTHROW(gap.validate());
  TemporalSplit reversed{{10, 12}, {0, 9}, {13, 15}};
  CHECK_THROWS_AS(reversed.validate(), ConfigError);
  TemporalSplit emptyValid{{0, 9}, {10, 9}, {10, 15}};
  CHECK_THROWS_AS(emptyValid.validate(), ConfigError);
}

TEST_CASE("perimeterOf collects sorted distinct entities") {
  EventLog log({{0, 3, 1}, {1, 1, 4}, {2, 3, 4}}, testutil::names("u", 5),
               testutil::names("i", 6));
  const Perimeter p = perimeterOf(log);
  CHECK(p.users == std::vector<int>{1, 3});
  CHECK(p.items == std::vector<int>{1, 4});
  CHECK(p.containsUser(3));
  CHECK_FALSE(p.containsUser(0));
  CHECK(p.contains(Side::kItem, 4));
  CHECK_FALSE(p.contains(Side::kItem, 5));
  CHECK(p.side(Side::kUser) == p.users);
}
