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

#include "flsched/scheduler_lru.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace flsched {

LruCache::LruCache(int num_clients) {
    if (num_clients < 1) throw std::invalid_argument("lru cache: need at least one client");
    for (int c = 1; c <= num_clients; ++c) order_.push_back(ClientId{c});
}

LruCache::LruCache(std::vector<ClientId> order) : order_(order.begin(), order.end()) {
    std::unordered_set<int> seen;
    for (const auto c : order_) {
        if (!seen.insert(c.value).second) throw std::invalid_argument("lru cache: duplicate client id");
    }
}

void LruCache::touch(ClientId client) {
    const auto it = std::find(order_.begin(), order_.end(), client);
    if (it == order_.end()) throw std::invalid_argument("lru cache: client not cached");
    order_.erase(it);
    order_.push_back(client);
}

bool LruCache::well_formed(int max_id) const {
    std::unordered_set<int> seen;
    for (const auto c : order_) {
        if (c.value < 1 || c.value > max_id || !seen.insert(c.value).second) return false;
    }
    return static_cast<int>(order_.size()) <= max_id;
}

std::vector<ClientId> lru_select(const SlotGrid& eligible, SlotIndex slot, LruCache& cache, int min_clients) {
    std::vector<ClientId> chosen;
    for (const auto c : cache.order()) {
        if (static_cast<int>(chosen.size()) >= min_clients) break;
        if (eligible.contains(c) && eligible(slot, c)) chosen.push_back(c);
    }
    for (const auto c : chosen) cache.touch(c);
    return chosen;
}

Schedule lru_schedule(const EligibilityMatrix& eligibility, const ScheduleConfig& cfg,
                      const ResponseTracker& tracker, LruCache& cache) {
    cfg.validate(eligibility.clients());
    const auto counts = eligible_count_per_slot(eligibility.eligible);
    auto slots = select_slots(counts, cfg.rounds_per_day, cfg.min_gap, cfg.min_clients);
    std::sort(slots.begin(), slots.end());

    Schedule schedule;
    schedule.day = eligibility.day;
    schedule.effective_min_clients = cfg.min_clients;
    schedule.effective_gap = cfg.min_gap;
    for (const auto slot : slots) {
        ScheduledRound round;
        round.slot = slot;
        round.participants = lru_select(eligibility.eligible, slot, cache, cfg.min_clients);
        round.short_round = static_cast<int>(round.participants.size()) < cfg.min_clients;
        round.effective_min_clients = cfg.min_clients;
        round.effective_gap = cfg.min_gap;
        if (round.participants.empty()) continue;
        round.agg_minutes = aggregation_time(round.participants, tracker);
        schedule.rounds.push_back(std::move(round));
    }
    schedule.cache_final = cache.to_vector();
    return schedule;
}

}  // namespace flsched
