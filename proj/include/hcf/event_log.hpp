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

#include <string>
#include <unordered_map>
#include <vector>

namespace hcf {

// Which side of the bipartite user/item relation an id refers to.
enum class Side { kUser, kItem };

inline Side opposite(Side s) { return s == Side::kUser ? Side::kItem : Side::kUser; }

// One implicit-feedback event: user interacted with item on the given day.
// Days are non-negative integer offsets from the corpus' earliest date.
struct Interaction {
  int day = 0;
  int user = 0;
  int item = 0;

  bool operator==(const Interaction&) const = default;
};

struct DayRange {
  int first = 0;
  int last = -1;  // empty when last < first

  bool contains(int day) const { return day >= first && day <= last; }
  int length() const { return last - first + 1; }
  bool operator==(const DayRange&) const = default;
};

// Chronologically sorted interaction log with dense, contiguous id
// vocabularies. Immutable after construction; safe for concurrent reads.
//
// Events are stably sorted by day, so within-day order follows input order.
// Slices carry a back-map to the parent log's dense ids; local ids preserve
// the parent's ascending order so that tie-breaking on ids is consistent
// across nested windows.
class EventLog {
 public:
  EventLog() = default;

  // `events` may arrive unsorted; the constructor stable-sorts by day.
  // Throws DataError if any id is out of range of the name vectors.
  EventLog(std::vector<Interaction> events, std::vector<std::string> userNames,
           std::vector<std::string> itemNames);

  bool empty() const { return events_.empty(); }
  const std::vector<Interaction>& events() const { return events_; }
  int numUsers() const { return static_cast<int>(userNames_.size()); }
  int numItems() const { return static_cast<int>(itemNames_.size()); }
  DayRange dayRange() const { return dayRange_; }

  const std::vector<std::string>& userNames() const { return userNames_; }
  const std::vector<std::string>& itemNames() const { return itemNames_; }
  const std::string& userName(int u) const { return userNames_.at(u); }
  const std::string& itemName(int i) const { return itemNames_.at(i); }

  // Dense id lookup by external name, -1 if unknown.
  int userId(const std::string& name) const;
  int itemId(const std::string& name) const;

  // Local dense id -> dense id in the log this one was sliced from.
  // Empty for logs that are not slices.
  const std::vector<int>& parentUserIds() const { return parentUserIds_; }
  const std::vector<int>& parentItemIds() const { return parentItemIds_; }

  // Events with day in [first, last], same vocabularies and id space.
  EventLog filterDays(int firstDay, int lastDay) const;

 private:
  friend EventLog sliceWindow(const EventLog&, int, int);
  friend EventLog projectOnto(const EventLog&, const EventLog&);
  friend EventLog transposeLog(const EventLog&);
  friend EventLog mergeLogs(const EventLog&, const EventLog&);

  void buildLookups();

  std::vector<Interaction> events_;
  std::vector<std::string> userNames_;
  std::vector<std::string> itemNames_;
  std::unordered_map<std::string, int> userIdByName_;
  std::unordered_map<std::string, int> itemIdByName_;
  std::vector<int> parentUserIds_;
  std::vector<int> parentItemIds_;
  DayRange dayRange_;
};

// Ordered train < valid < test day ranges; contiguous, no overlap.
struct TemporalSplit {
  DayRange train;
  DayRange valid;
  DayRange test;

  // Throws ConfigError when the ordering invariant is violated.
  void validate() const;
};

// The users and items observed in a training window: the only entities a
// model trained on that window can score, and hence the scoring universe.
struct Perimeter {
  std::vector<int> users;  // sorted ascending
  std::vector<int> items;  // sorted ascending

  bool containsUser(int u) const;
  bool containsItem(int i) const;
  bool contains(Side s, int id) const {
    return s == Side::kUser ? containsUser(id) : containsItem(id);
  }
  const std::vector<int>& side(Side s) const { return s == Side::kUser ? users : items; }
};

// Parses `date,user_id,item_id` CSV (ISO-8601 dates). Dates map to day
// indices by offset from the earliest date in the file. Duplicate rows are
// kept. Throws DataError on malformed rows (with line number) or when the
// file holds no events.
EventLog ingestCsv(const std::string& path);

// Writes the log back out in the same CSV format, `baseDate` being day 0.
void writeCsv(const EventLog& log, const std::string& path,
              const std::string& baseDate = "2020-01-01");

// Events with day in [endDay - sizeDays + 1, endDay], vocabularies
// restricted to the entities present in the slice and remapped to
// contiguous local ids (in parent-id order). The slice may be empty.
EventLog sliceWindow(const EventLog& log, int endDay, int sizeDays);

// Exactly the users and items with at least one event in the log.
Perimeter perimeterOf(const EventLog& log);

// Re-expresses `log` in `target`'s id space, dropping events whose user or
// item (matched by name) is absent from `target`'s vocabularies. Used to
// carry validation/test events into a training window's perimeter.
EventLog projectOnto(const EventLog& log, const EventLog& target);

// Role-swapped copy: every (t, u, i) becomes (t, i, u).
EventLog transposeLog(const EventLog& log);

// Concatenates two logs that share an id space (caller's responsibility)
// and re-sorts stably, `a` before `b` within a day.
EventLog mergeLogs(const EventLog& a, const EventLog& b);

}  // namespace hcf
