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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flsched/availability.hpp"
#include "flsched/eligibility.hpp"
#include "flsched/predictor.hpp"

namespace flsched {

struct ScheduleConfig {
    int rounds_per_day = 24;               // R
    int min_gap = 2;                       // G, slots between any two selected slots
    int min_clients = 10;                  // K_min
    std::optional<double> unique_threshold;  // alpha_u; S/10 when unset
    int max_relaxations = 5;
    std::optional<double> selection_rate;  // beta; caps each round at ceil(beta * N)

    double unique_threshold_for(int slots) const;
    std::optional<int> participant_cap(int num_clients) const;
    void validate(int num_clients) const;
};

struct ScheduledRound {
    SlotIndex slot;
    std::vector<ClientId> participants;
    double agg_minutes = 0.0;  // Agg_s = max expected duration among participants
    int effective_min_clients = 0;
    int effective_gap = 0;
    bool short_round = false;  // fewer eligible clients than K_min were available
};

struct Schedule {
    int day = 1;
    std::vector<ScheduledRound> rounds;  // chronological
    std::vector<ClientId> uncovered_unique;
    int effective_min_clients = 0;
    int effective_gap = 0;
    int relaxations_used = 0;
    std::optional<std::vector<ClientId>> cache_final;  // LRU only

    std::vector<SlotIndex> selected_slots() const;
};

/// Column sums: element s-1 counts the clients eligible at slot s.
std::vector<int> eligible_count_per_slot(const SlotGrid& eligible);

/// Per-client number of eligible slots (index = client - 1).
std::vector<int> eligible_slots_per_client(const SlotGrid& eligible);

/// Clients whose eligible-slot count is strictly below `threshold`.
std::vector<ClientId> unique_clients(const SlotGrid& eligible, double threshold);

/// Greedy slot pick shared by every policy: slots ordered by eligible count descending
/// (ascending index on ties); a slot is taken when its count reaches `min_clients` and it
/// is at least `min_gap` away from every slot already taken. Stops after `rounds`.
/// Returned in acceptance order.
std::vector<SlotIndex> select_slots(const std::vector<int>& counts, int rounds, int min_gap,
                                    int min_clients);

/// Max expected duration over the participants; throws on an empty set.
double aggregation_time(const std::vector<ClientId>& participants, const ResponseTracker& tracker);

std::string schedule_to_json(const Schedule& schedule);
void save_schedule(const std::filesystem::path& path, const Schedule& schedule);
Schedule load_schedule(const std::filesystem::path& path);

}  // namespace flsched
