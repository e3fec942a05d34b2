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

#include <vector>

#include "flsched/availability.hpp"
#include "flsched/predictor.hpp"

namespace flsched {

/// E_i(s) plus the predicted-available run length that produced it.
struct EligibilityMatrix {
    int day = 1;
    SlotGrid eligible;
    /// window[(client-1)*S + (slot-1)]: consecutive predicted-available slots from s.
    std::vector<int> window;
    /// Slots each client needs, including the buffer (index = client - 1).
    std::vector<int> slots_needed;

    int slots() const { return eligible.slots(); }
    int clients() const { return eligible.clients(); }
    bool operator()(SlotIndex slot, ClientId client) const { return eligible(slot, client); }
    int window_at(SlotIndex slot, ClientId client) const;
};

/// ceil(C_expected(i) / dt) + buffer_slots, never less than one slot.
int slots_needed(double expected_minutes, int buffer_slots, int minutes_per_slot);
int slots_needed(ClientId client, const ResponseTracker& tracker, int buffer_slots, int minutes_per_slot);

/// E_i(s) = 1 iff the predicted run from s covers the client's slots_needed.
EligibilityMatrix build_eligibility(const PredictedAvailabilityMatrix& pa, const ResponseTracker& tracker,
                                    int buffer_slots, int minutes_per_slot);

/// Wraps a bare 0/1 grid (e.g. one loaded from disk) with window data recomputed from
/// the grid itself; useful when only E is available.
EligibilityMatrix eligibility_from_grid(int day, SlotGrid eligible);

}  // namespace flsched
