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

#include "hcf/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hcf/errors.hpp"

namespace hcf {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> splitList(const std::string& value) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) parts.push_back(t);
  }
  return parts;
}

}  // namespace

ConfigMap parseConfigText(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineNo) +
                        ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineNo) + ": empty key");
    }
    map[key] = value;
  }
  return map;
}

ConfigMap parseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parseConfigText(buffer.str());
}

void applyOverride(ConfigMap& map, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty()) {
    throw ConfigError("override must be key=value: " + assignment);
  }
  map[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string getString(const ConfigMap& map, const std::string& key,
                      const std::string& fallback) {
  const auto it = map.find(key);
  return it == map.end() ? fallback : it->second;
}

bool getBool(const ConfigMap& map, const std::string& key, bool fallback) {
  const auto it = map.find(key);
  if (it == map.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + it->second + "'");
}

int getInt(const ConfigMap& map, const std::string& key, int fallback) {
  const auto it = map.find(key);
  if (it == map.end()) return fallback;
  int value = 0;
  const auto& s = it->second;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(key + ": expected an integer, got '" + s + "'");
  }
  return value;
}

uint64_t getUint64(const ConfigMap& map, const std::string& key, uint64_t fallback) {
  const auto it = map.find(key);
  if (it == map.end()) return fallback;
  uint64_t value = 0;
  const auto& s = it->second;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(key + ": expected an unsigned integer, got '" + s + "'");
  }
  return value;
}

double getDouble(const ConfigMap& map, const std::string& key, double fallback) {
  const auto it = map.find(key);
  if (it == map.end()) return fallback;
  double value = 0;
  const auto& s = it->second;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  }
  return value;
}

std::vector<int> getIntList(const ConfigMap& map, const std::string& key,
                            const std::vector<int>& fallback) {
  const auto it = map.find(key);
  if (it == map.end()) return fallback;
  std::vector<int> values;
  for (const std::string& part : splitList(it->second)) {
    int value = 0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), value);
    if (res.ec != std::errc() || res.ptr != part.data() + part.size()) {
      throw ConfigError(key + ": expected integers, got '" + part + "'");
    }
    values.push_back(value);
  }
  return values;
}

std::vector<std::string> getStringList(const ConfigMap& map, const std::string& key,
                                       const std::vector<std::string>& fallback) {
  const auto it = map.find(key);
  if (it == map.end()) return fallback;
  return splitList(it->second);
}

std::string formatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string formatIntList(const std::vector<int>& v) {
  std::string out;
  for (size_t k = 0; k < v.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(v[k]);
  }
  return out;
}

std::string formatStringList(const std::vector<std::string>& v) {
  std::string out;
  for (size_t k = 0; k < v.size(); ++k) {
    if (k) out += ",";
    out += v[k];
  }
  return out;
}

}  // namespace hcf
