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

#include <span>
#include <vector>

#include "hcf/event_log.hpp"

namespace hcf {

// Per-entity chronological event timelines answering "the last n counterpart
// ids strictly before day t". Histories are event multisets: an item
// requested twice contributes two entries. Same-day events are always
// excluded from that day's own history, including earlier events of the same
// day (day is the finest trusted time unit).
//
// Immutable after build; concurrent reads are safe. Queries are
// O(log E + n) via binary search on the day column.
class HistoryIndex {
 public:
  // O(|events|) given the log's chronological sort. n >= 1.
  HistoryIndex(const EventLog& log, int capacity);

  int capacity() const { return capacity_; }
  int numUsers() const { return static_cast<int>(userDays_.size()); }
  int numItems() const { return static_cast<int>(itemDays_.size()); }

  // Item ids of the last min(n, n') events of u with day' < day, oldest to
  // newest. Throws std::out_of_range on an unknown entity.
  std::span<const int> userHistory(int u, int day) const;
  // User ids, mirror of userHistory.
  std::span<const int> itemHistory(int i, int day) const;

  // Counterpart ids of the entity's events exactly on `day` (used by the
  // optional same-day-positive exclusion in the sampler).
  std::span<const int> userEventsOn(int u, int day) const;
  std::span<const int> itemEventsOn(int i, int day) const;

  // Total number of events recorded for the entity.
  int userEventCount(int u) const;
  int itemEventCount(int i) const;

 private:
  std::span<const int> lastBefore(const std::vector<int>& days,
                                  const std::vector<int>& ids, int day) const;
  static std::span<const int> onDay(const std::vector<int>& days,
                                    const std::vector<int>& ids, int day);

  int capacity_;
  // Parallel arrays per entity: event days (sorted) and counterpart ids.
  std::vector<std::vector<int>> userDays_, userIds_;
  std::vector<std::vector<int>> itemDays_, itemIds_;
};

}  // namespace hcf
