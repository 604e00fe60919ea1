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
#include <map>
#include <string>
#include <vector>

namespace hcf {

// Flat `section.key = value` configuration, `#` comments, blank lines
// ignored. Later assignments win. Keys are ordered so echoes are stable.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parseConfigFile(const std::string& path);
ConfigMap parseConfigText(const std::string& text);

// Applies a `key=value` override (the CLI --set form).
void applyOverride(ConfigMap& map, const std::string& assignment);

// Typed accessors; throw ConfigError naming the key on a parse failure.
std::string getString(const ConfigMap& map, const std::string& key,
                      const std::string& fallback);
bool getBool(const ConfigMap& map, const std::string& key, bool fallback);
int getInt(const ConfigMap& map, const std::string& key, int fallback);
uint64_t getUint64(const ConfigMap& map, const std::string& key, uint64_t fallback);
double getDouble(const ConfigMap& map, const std::string& key, double fallback);
std::vector<int> getIntList(const ConfigMap& map, const std::string& key,
                            const std::vector<int>& fallback);
std::vector<std::string> getStringList(const ConfigMap& map, const std::string& key,
                                       const std::vector<std::string>& fallback);

// Shortest decimal strings that parse back to the same value exactly.
std::string formatDouble(double v);
std::string formatIntList(const std::vector<int>& v);
std::string formatStringList(const std::vector<std::string>& v);

}  // namespace hcf
