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

#include "flsched/eligibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flsched {

int EligibilityMatrix::window_at(SlotIndex slot, ClientId client) const {
    if (!eligible.contains(slot) || !eligible.contains(client)) {
        throw std::out_of_range("eligibility window index out of range");
    }
    return window[static_cast<std::size_t>(client.value - 1) * slots() + (slot.value - 1)];
}

int slots_needed(double expected_minutes, int buffer_slots, int minutes_per_slot) {
    if (minutes_per_slot <= 0) throw std::invalid_argument("slots_needed: slot width must be > 0");
    if (buffer_slots < 0) throw std::invalid_argument("slots_needed: buffer must be >= 0");
    if (!(expected_minutes >= 0.0) || !std::isfinite(expected_minutes)) {
        throw std::invalid_argument("slots_needed: expected duration must be finite and >= 0");
    }
    const auto work = static_cast<int>(std::ceil(expected_minutes / minutes_per_slot));
    return std::max(1, work + buffer_slots);
}

int slots_needed(ClientId client, const ResponseTracker& tracker, int buffer_slots, int minutes_per_slot) {
    return slots_needed(tracker.expected_duration(client), buffer_slots, minutes_per_slot);
}

EligibilityMatrix build_eligibility(const PredictedAvailabilityMatrix& pa, const ResponseTracker& tracker,
                                    int buffer_slots, int minutes_per_slot) {
    const int slots = pa.grid.slots();
    const int clients = pa.grid.clients();
    EligibilityMatrix out{pa.day, SlotGrid(slots, clients), {}, {}};
    out.window.reserve(static_cast<std::size_t>(slots) * clients);
    out.slots_needed.reserve(clients);
    for (int c = 1; c <= clients; ++c) {
        const ClientId client{c};
        const int need = slots_needed(client, tracker, buffer_slots, minutes_per_slot);
        out.slots_needed.push_back(need);
        const auto runs = run_lengths(pa.grid, client);
        auto row = out.eligible.client_row(client);
        for (int s = 0; s < slots; ++s) row[s] = runs[s] >= need ? 1 : 0;
        out.window.insert(out.window.end(), runs.begin(), runs.end());
    }
    return out;
}

EligibilityMatrix eligibility_from_grid(int day, SlotGrid eligible) {
    EligibilityMatrix out{day, std::move(eligible), {}, {}};
    for (int c = 1; c <= out.clients(); ++c) {
        const auto runs = run_lengths(out.eligible, ClientId{c});
        out.window.insert(out.window.end(), runs.begin(), runs.end());
        out.slots_needed.push_back(1);
    }
    return out;
}

}  // namespace flsched
