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

#include "hcf/event_log.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hcf/errors.hpp"

namespace hcf {

namespace {

// ISO-8601 calendar date -> serial day count (days since 1970-01-01).
// Returns false on anything that is not a valid YYYY-MM-DD date.
bool parseIsoDate(const std::string& text, long& serialOut) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  for (size_t k = 0; k < text.size(); ++k) {
    if (k == 4 || k == 7) continue;
    if (text[k] < '0' || text[k] > '9') return false;
  }
  const int y = std::stoi(text.substr(0, 4));
  const unsigned m = static_cast<unsigned>(std::stoi(text.substr(5, 2)));
  const unsigned d = static_cast<unsigned>(std::stoi(text.substr(8, 2)));
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return false;
  serialOut = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return true;
}

std::string formatDate(long serial) {
  const std::chrono::year_month_day ymd{
      std::chrono::sys_days{std::chrono::days{serial}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

EventLog::EventLog(std::vector<Interaction> events, std::vector<std::string> userNames,
                   std::vector<std::string> itemNames)
    : events_(std::move(events)),
      userNames_(std::move(userNames)),
      itemNames_(std::move(itemNames)) {
  for (const auto& e : events_) {
    if (e.day < 0 || e.user < 0 || e.user >= numUsers() || e.item < 0 ||
        e.item >= numItems()) {
      throw DataError("event out of range of the vocabularies");
    }
  }
  std::stable_sort(events_.begin(), events_.end(),
                   [](const Interaction& a, const Interaction& b) { return a.day < b.day; });
  if (!events_.empty()) {
    dayRange_ = {events_.front().day, events_.back().day};
  }
  buildLookups();
}

void EventLog::buildLookups() {
  userIdByName_.clear();
  itemIdByName_.clear();
  userIdByName_.reserve(userNames_.size());
  itemIdByName_.reserve(itemNames_.size());
  for (int u = 0; u < numUsers(); ++u) userIdByName_[userNames_[u]] = u;
  for (int i = 0; i < numItems(); ++i) itemIdByName_[itemNames_[i]] = i;
}

int EventLog::userId(const std::string& name) const {
  auto it = userIdByName_.find(name);
  return it == userIdByName_.end() ? -1 : it->second;
}

int EventLog::itemId(const std::string& name) const {
  auto it = itemIdByName_.find(name);
  return it == itemIdByName_.end() ? -1 : it->second;
}

EventLog EventLog::filterDays(int firstDay, int lastDay) const {
  EventLog out;
  out.userNames_ = userNames_;
  out.itemNames_ = itemNames_;
  out.parentUserIds_ = parentUserIds_;
  out.parentItemIds_ = parentItemIds_;
  for (const auto& e : events_) {
    if (e.day >= firstDay && e.day <= lastDay) out.events_.push_back(e);
  }
  if (!out.events_.empty()) {
    out.dayRange_ = {out.events_.front().day, out.events_.back().day};
  }
  out.buildLookups();
  return out;
}

void TemporalSplit::validate() const {
  if (train.last < train.first || valid.last < valid.first || test.last < test.first) {
    throw ConfigError("temporal split has an empty range");
  }
  if (!(train.last < valid.first && valid.first <= valid.last && valid.last < test.first)) {
    throw ConfigError("temporal split must satisfy train < valid < test");
  }
}

bool Perimeter::containsUser(int u) const {
  return std::binary_search(users.begin(), users.end(), u);
}

bool Perimeter::containsItem(int i) const {
  return std::binary_search(items.begin(), items.end(), i);
}

EventLog ingestCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file, no events");
  {
    auto header = splitCsvLine(line);
    if (header.size() != 3 || header[0] != "date" || header[1] != "user_id" ||
        header[2] != "item_id") {
      throw DataError(path + ": line 1: expected header date,user_id,item_id");
    }
  }

  struct RawRow {
    long serial;
    int user;
    int item;
  };
  std::vector<RawRow> rows;
  std::vector<std::string> userNames, itemNames;
  std::unordered_map<std::string, int> userIds, itemIds;
  auto intern = [](std::unordered_map<std::string, int>& ids, std::vector<std::string>& names,
                   const std::string& name) {
    auto [it, inserted] = ids.try_emplace(name, static_cast<int>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  };

  long minSerial = 0;
  bool haveMin = false;
  size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty() || line == "\r") continue;
    auto fields = splitCsvLine(line);
    if (fields.size() != 3 || fields[1].empty() || fields[2].empty()) {
      throw DataError(path + ": line " + std::to_string(lineNo) +
                      ": expected 3 columns date,user_id,item_id");
    }
    long serial;
    if (!parseIsoDate(fields[0], serial)) {
      throw DataError(path + ": line " + std::to_string(lineNo) + ": bad date '" +
                      fields[0] + "' (want YYYY-MM-DD)");
    }
    rows.push_back({serial, intern(userIds, userNames, fields[1]),
                    intern(itemIds, itemNames, fields[2])});
    if (!haveMin || serial < minSerial) {
      minSerial = serial;
      haveMin = true;
    }
  }
  if (rows.empty()) throw DataError(path + ": empty file, no events");

  std::vector<Interaction> events;
  events.reserve(rows.size());
  for (const auto& r : rows) {
    events.push_back({static_cast<int>(r.serial - minSerial), r.user, r.item});
  }
  return EventLog(std::move(events), std::move(userNames), std::move(itemNames));
}

void writeCsv(const EventLog& log, const std::string& path, const std::string& baseDate) {
  long base;
  if (!parseIsoDate(baseDate, base)) throw ConfigError("bad base date " + baseDate);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "date,user_id,item_id\n";
  for (const auto& e : log.events()) {
    out << formatDate(base + e.day) << ',' << log.userName(e.user) << ','
        << log.itemName(e.item) << '\n';
  }
}

EventLog sliceWindow(const EventLog& log, int endDay, int sizeDays) {
  if (sizeDays < 1) throw ConfigError("window size must be >= 1 day");
  const int startDay = endDay - sizeDays + 1;

  std::vector<char> userIn(log.numUsers(), 0), itemIn(log.numItems(), 0);
  std::vector<Interaction> kept;
  for (const auto& e : log.events()) {
    if (e.day < startDay || e.day > endDay) continue;
    kept.push_back(e);
    userIn[e.user] = 1;
    itemIn[e.item] = 1;
  }

  // Local ids in ascending parent-id order.
  EventLog out;
  std::vector<int> userMap(log.numUsers(), -1), itemMap(log.numItems(), -1);
  for (int u = 0; u < log.numUsers(); ++u) {
    if (!userIn[u]) continue;
    userMap[u] = static_cast<int>(out.userNames_.size());
    out.userNames_.push_back(log.userName(u));
    out.parentUserIds_.push_back(u);
  }
  for (int i = 0; i < log.numItems(); ++i) {
    if (!itemIn[i]) continue;
    itemMap[i] = static_cast<int>(out.itemNames_.size());
    out.itemNames_.push_back(log.itemName(i));
    out.parentItemIds_.push_back(i);
  }
  out.events_.reserve(kept.size());
  for (const auto& e : kept) {
    out.events_.push_back({e.day, userMap[e.user], itemMap[e.item]});
  }
  if (!out.events_.empty()) {
    out.dayRange_ = {out.events_.front().day, out.events_.back().day};
  }
  out.buildLookups();
  return out;
}

Perimeter perimeterOf(const EventLog& log) {
  std::vector<char> userIn(log.numUsers(), 0), itemIn(log.numItems(), 0);
  for (const auto& e : log.events()) {
    userIn[e.user] = 1;
    itemIn[e.item] = 1;
  }
  Perimeter p;
  for (int u = 0; u < log.numUsers(); ++u) {
    if (userIn[u]) p.users.push_back(u);
  }
  for (int i = 0; i < log.numItems(); ++i) {
    if (itemIn[i]) p.items.push_back(i);
  }
  return p;
}

EventLog projectOnto(const EventLog& log, const EventLog& target) {
  // Precompute source-id -> target-id by name.
  std::vector<int> userMap(log.numUsers(), -1), itemMap(log.numItems(), -1);
  for (int u = 0; u < log.numUsers(); ++u) userMap[u] = target.userId(log.userName(u));
  for (int i = 0; i < log.numItems(); ++i) itemMap[i] = target.itemId(log.itemName(i));

  EventLog out;
  out.userNames_ = target.userNames_;
  out.itemNames_ = target.itemNames_;
  out.parentUserIds_ = target.parentUserIds_;
  out.parentItemIds_ = target.parentItemIds_;
  for (const auto& e : log.events()) {
    const int u = userMap[e.user], i = itemMap[e.item];
    if (u < 0 || i < 0) continue;
    out.events_.push_back({e.day, u, i});
  }
  if (!out.events_.empty()) {
    out.dayRange_ = {out.events_.front().day, out.events_.back().day};
  }
  out.buildLookups();
  return out;
}

EventLog transposeLog(const EventLog& log) {
  EventLog out;
  out.userNames_ = log.itemNames_;
  out.itemNames_ = log.userNames_;
  out.parentUserIds_ = log.parentItemIds_;
  out.parentItemIds_ = log.parentUserIds_;
  out.events_.reserve(log.events().size());
  for (const auto& e : log.events()) out.events_.push_back({e.day, e.item, e.user});
  out.dayRange_ = log.dayRange_;
  out.buildLookups();
  return out;
}

EventLog mergeLogs(const EventLog& a, const EventLog& b) {
  if (a.numUsers() != b.numUsers() || a.numItems() != b.numItems()) {
    throw DataError("mergeLogs: logs do not share an id space");
  }
  std::vector<Interaction> events = a.events_;
  events.insert(events.end(), b.events_.begin(), b.events_.end());
  EventLog out(std::move(events), a.userNames_, a.itemNames_);
  out.parentUserIds_ = a.parentUserIds_;
  out.parentItemIds_ = a.parentItemIds_;
  return out;
}

}  // namespace hcf
