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

#include "flsched/scheduler_gh.hpp"

#include <algorithm>
#include <set>

namespace flsched {
namespace {

struct Attempt {
    Schedule schedule;
    std::size_t covered = 0;
};

Attempt plan_once(const EligibilityMatrix& e, const std::vector<int>& counts,
                  const std::vector<int>& per_client, const std::vector<ClientId>& unique,
                  int min_clients, int min_gap, const ScheduleConfig& cfg,
                  const ResponseTracker& tracker) {
    auto slots = select_slots(counts, cfg.rounds_per_day, min_gap, min_clients);
    std::sort(slots.begin(), slots.end());
    const auto cap = cfg.participant_cap(e.clients());
    const std::set<int> unique_ids = [&] {
        std::set<int> ids;
        for (const auto c : unique) ids.insert(c.value);
        return ids;
    }();
    const auto rarest_first = [&](ClientId a, ClientId b) {
        if (per_client[a.value - 1] != per_client[b.value - 1]) {
            return per_client[a.value - 1] < per_client[b.value - 1];
        }
        return a.value < b.value;
    };

    Attempt attempt;
    attempt.schedule.day = e.day;
    attempt.schedule.effective_min_clients = min_clients;
    attempt.schedule.effective_gap = min_gap;
    std::set<int> covered;

    for (const auto slot : slots) {
        std::vector<ClientId> priority;
        std::vector<ClientId> rest;
        for (int c = 1; c <= e.clients(); ++c) {
            if (!e(slot, ClientId{c})) continue;
            const bool wanted = unique_ids.contains(c) && !covered.contains(c);
            (wanted ? priority : rest).push_back(ClientId{c});
        }
        std::sort(priority.begin(), priority.end(), rarest_first);
        std::sort(rest.begin(), rest.end(), rarest_first);

        std::vector<ClientId> chosen = priority;
        if (cap && static_cast<int>(chosen.size()) > *cap) chosen.resize(*cap);
        for (const auto c : rest) {
            if (static_cast<int>(chosen.size()) >= min_clients) break;
            chosen.push_back(c);
        }
        for (const auto c : chosen) {
            if (unique_ids.contains(c.value)) covered.insert(c.value);
        }
        std::sort(chosen.begin(), chosen.end());

        ScheduledRound round;
        round.slot = slot;
        round.agg_minutes = aggregation_time(chosen, tracker);
        round.participants = std::move(chosen);
        round.effective_min_clients = min_clients;
        round.effective_gap = min_gap;
        round.short_round = static_cast<int>(round.participants.size()) < min_clients;
        attempt.schedule.rounds.push_back(std::move(round));
    }

    attempt.covered = covered.size();
    for (const auto c : unique) {
        if (!covered.contains(c.value)) attempt.schedule.uncovered_unique.push_back(c);
    }
    return attempt;
}

}  // namespace

Schedule gh_schedule(const EligibilityMatrix& eligibility, const ScheduleConfig& cfg,
                     const ResponseTracker& tracker) {
    cfg.validate(eligibility.clients());
    const auto counts = eligible_count_per_slot(eligibility.eligible);
    const auto per_client = eligible_slots_per_client(eligibility.eligible);
    const auto unique = unique_clients(eligibility.eligible, cfg.unique_threshold_for(eligibility.slots()));

    int min_clients = cfg.min_clients;
    int min_gap = cfg.min_gap;
    Attempt best = plan_once(eligibility, counts, per_client, unique, min_clients, min_gap, cfg, tracker);
    Attempt last = best;

    for (int step = 0; step < cfg.max_relaxations && !last.schedule.uncovered_unique.empty(); ++step) {
        const bool can_k = min_clients > 1;
        const bool can_g = min_gap > 0;
        if (!can_k && !can_g) break;
        const bool prefer_k = step % 2 == 0;
        if ((prefer_k && can_k) || !can_g) {
            --min_clients;
        } else {
            --min_gap;
        }
        last = plan_once(eligibility, counts, per_client, unique, min_clients, min_gap, cfg, tracker);
        last.schedule.relaxations_used = step + 1;
        if (last.covered > best.covered) best = last;
    }
    return best.schedule;
}

}  // namespace flsched
