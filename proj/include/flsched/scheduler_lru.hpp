// Copyright 2026 The flsched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <deque>
#include <vector>

#include "flsched/schedule.hpp"

namespace flsched {

/// Recency order over clients; the front is the least recently used.
class LruCache {
  public:
    /// All clients 1..N in ascending id order.
    explicit LruCache(int num_clients);
    explicit LruCache(std::vector<ClientId> order);

    const std::deque<ClientId>& order() const { return order_; }
    std::size_t size() const { return order_.size(); }

    /// Moves `client` to the back; throws if it is not cached.
    void touch(ClientId client);

    /// True when the order has no duplicates and every id lies in [1, max_id].
    bool well_formed(int max_id) const;

    std::vector<ClientId> to_vector() const { return {order_.begin(), order_.end()}; }

  private:
    std::deque<ClientId> order_;
};

/// Picks up to K_min eligible clients in cache order and moves them, in selection
/// order, to the back of the cache.
std::vector<ClientId> lru_select(const SlotGrid& eligible, SlotIndex slot, LruCache& cache, int min_clients);

/// Same slot pick as the greedy heuristic (no relaxation); participants come from
/// lru_select() in chronological slot order so the cache evolves in time order.
/// `cache` carries state across calls (e.g. across days).
Schedule lru_schedule(const EligibilityMatrix& eligibility, const ScheduleConfig& cfg,
                      const ResponseTracker& tracker, LruCache& cache);

}  // namespace flsched
