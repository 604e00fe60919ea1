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

#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hcf/config_file.hpp"
#include "hcf/errors.hpp"

using namespace hcf;

TEST_CASE("config text parsing") {
  const ConfigMap map = parseConfigText(
      "# leading comment\n"
      "\n"
      "model.kind = hcf   # trailing comment\n"
      "  train.lr=0.01\t\n"
      "model.kind = mf_bpr\n"
      "sweep.windows = 7, 30 , 60\n");
  CHECK(map.size() == 3);
  CHECK(map.at("model.kind") == "mf_bpr");  // later assignment wins
  CHECK(map.at("train.lr") == "0.01");
  CHECK(map.at("sweep.windows") == "7, 30 , 60");

  CHECK_THROWS_WITH_AS(parseConfigText("a = 1\nno equals sign\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parseConfigText("a = 1\nb = 2\n = 3\n"),
                       doctest::Contains("line 3"), ConfigError);
  CHECK_THROWS_AS(parseConfigFile("/no/such/config.cfg"), ConfigError);
}

TEST_CASE("overrides follow the cli key=value form") {
  ConfigMap map;
  applyOverride(map, "train.lr=0.5");
  applyOverride(map, " seed = 9 ");
  CHECK(map.at("train.lr") == "0.5");
  CHECK(map.at("seed") == "9");
  applyOverride(map, "train.lr=0.25");
  CHECK(map.at("train.lr") == "0.25");
  CHECK_THROWS_AS(applyOverride(map, "no-equals"), ConfigError);
  CHECK_THROWS_AS(applyOverride(map, "=5"), ConfigError);
}

TEST_CASE("typed accessors parse fully or throw naming the key") {
  ConfigMap map;
  map["i"] = "42";
  map["ibad"] = "12x";
  map["d"] = "2.5e-3";
  map["dbad"] = "0.5.2";
  map["b"] = "true";
  map["bbad"] = "yes";
  map["list"] = "1,2,3";
  map["listbad"] = "1,two,3";
  map["strs"] = "mf_bpr, historical";
  map["u"] = "18446744073709551615";

  CHECK(getInt(map, "i", 0) == 42);
  CHECK(getInt(map, "missing", 7) == 7);
  CHECK(getDouble(map, "d", 0) == 2.5e-3);
  CHECK(getBool(map, "b", false));
  CHECK(getBool(map, "missing", true));
  CHECK(getUint64(map, "u", 0) == std::numeric_limits<uint64_t>::max());
  CHECK(getIntList(map, "list", {}) == std::vector<int>{1, 2, 3});
  CHECK(getIntList(map, "missing", {5}) == std::vector<int>{5});
  CHECK(getStringList(map, "strs", {}) ==
        std::vector<std::string>{"mf_bpr", "historical"});
  CHECK(getString(map, "strs", "") == "mf_bpr, historical");

  CHECK_THROWS_WITH_AS(getInt(map, "ibad", 0), doctest::Contains("ibad"), ConfigError);
  CHECK_THROWS_WITH_AS(getDouble(map, "dbad", 0), doctest::Contains("dbad"), ConfigError);
  CHECK_THROWS_WITH_AS(getBool(map, "bbad", false), doctest::Contains("bbad"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(getIntList(map, "listbad", {}), doctest::Contains("listbad"),
                       ConfigError);
}

TEST_CASE("doubles format to shortest exact round-trip strings") {
  const std::vector<double> values{0.0, 0.1, 1.0 / 3.0, 2.5e-3, 1e300, 5e-324,
                                   -0.07920792079207921, 123456789.123456789};
  for (const double v : values) {
    const std::string s = formatDouble(v);
    double back = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(res.ec == std::errc());
    CHECK(back == v);
  }
  CHECK(formatDouble(0.25) == "0.25");
  CHECK(formatDouble(1e-3) == "0.001");

  CHECK(formatIntList({7, 30, 60}) == "7,30,60");
  CHECK(formatIntList({}) == "");
  CHECK(formatStringList({"a", "b"}) == "a,b");
}
