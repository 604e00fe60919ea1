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

#include "hcf/history_index.hpp"

#include <algorithm>
#include <stdexcept>

#include "hcf/errors.hpp"

namespace hcf {

HistoryIndex::HistoryIndex(const EventLog& log, int capacity) : capacity_(capacity) {
  if (capacity < 1) throw ConfigError("history capacity must be >= 1");
  userDays_.resize(log.numUsers());
  userIds_.resize(log.numUsers());
  itemDays_.resize(log.numItems());
  itemIds_.resize(log.numItems());
  for (const auto& e : log.events()) {
    userDays_[e.user].push_back(e.day);
    userIds_[e.user].push_back(e.item);
    itemDays_[e.item].push_back(e.day);
    itemIds_[e.item].push_back(e.user);
  }
}

std::span<const int> HistoryIndex::lastBefore(const std::vector<int>& days,
                                              const std::vector<int>& ids,
                                              int day) const {
  // First event with day' >= day bounds the strict past.
  const auto end = std::lower_bound(days.begin(), days.end(), day);
  const size_t endIdx = static_cast<size_t>(end - days.begin());
  const size_t startIdx = endIdx > static_cast<size_t>(capacity_)
                              ? endIdx - static_cast<size_t>(capacity_)
                              : 0;
  return {ids.data() + startIdx, endIdx - startIdx};
}

std::span<const int> HistoryIndex::onDay(const std::vector<int>& days,
                                         const std::vector<int>& ids, int day) {
  const auto lo = std::lower_bound(days.begin(), days.end(), day);
  const auto hi = std::upper_bound(lo, days.end(), day);
  return {ids.data() + (lo - days.begin()), static_cast<size_t>(hi - lo)};
}

std::span<const int> HistoryIndex::userHistory(int u, int day) const {
  if (u < 0 || u >= numUsers()) throw std::out_of_range("unknown user id");
  return lastBefore(userDays_[u], userIds_[u], day);
}

std::span<const int> HistoryIndex::itemHistory(int i, int day) const {
  if (i < 0 || i >= numItems()) throw std::out_of_range("unknown item id");
  return lastBefore(itemDays_[i], itemIds_[i], day);
}

std::span<const int> HistoryIndex::userEventsOn(int u, int day) const {
  if (u < 0 || u >= numUsers()) throw std::out_of_range("unknown user id");
  return onDay(userDays_[u], userIds_[u], day);
}

std::span<const int> HistoryIndex::itemEventsOn(int i, int day) const {
  if (i < 0 || i >= numItems()) throw std::out_of_range("unknown item id");
  return onDay(itemDays_[i], itemIds_[i], day);
}

int HistoryIndex::userEventCount(int u) const {
  if (u < 0 || u >= numUsers()) throw std::out_of_range("unknown user id");
  return static_cast<int>(userDays_[u].size());
}

int HistoryIndex::itemEventCount(int i) const {
  if (i < 0 || i >= numItems()) throw std::out_of_range("unknown item id");
  return static_cast<int>(itemDays_[i].size());
}

}  // namespace hcf
