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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "flsched/availability.hpp"
#include "flsched/random.hpp"

namespace flsched {

struct Heartbeat {
    int day = 1;
    ClientId client;
    double minute_of_day = 1.0;  // in (0, 1440]
    bool available = false;

    friend bool operator==(const Heartbeat&, const Heartbeat&) = default;
};

using HeartbeatStream = std::vector<Heartbeat>;

struct IngestConfig {
    int minutes_per_slot = 2;
    int validity_window = 5;             // W_i in slots, applied to every client...
    std::vector<int> per_client_window;  // ...unless overridden here (index = client - 1)
    double loss_fraction = 0.02;         // epsilon
    int cadence = 5;                     // slots between periodic beats from simulated clients

    int window_for(ClientId client) const;
    void validate(int num_clients) const;
};

struct IngestResult {
    AvailabilityMatrix matrix;
    std::size_t accepted = 0;
    std::size_t rejected = 0;  // unknown client, other day, or timestamp outside (0, 1440]
};

/// Replays one day's beats onto an all-zero grid. A beat at slot s with status b sets
/// [s, min(s + W_i, S)] to b; a newer beat for the same client takes over from its own
/// slot onward, and for two beats in one slot the later timestamp wins. Beats are
/// replayed in (slot, timestamp) order, so arrival order does not matter.
IngestResult build_daily_matrix(const HeartbeatStream& beats, const IngestConfig& cfg, int day,
                                int num_clients);

/// Drops each beat independently with probability `loss_fraction`, which must be in [0, 1).
HeartbeatStream drop_heartbeats(const HeartbeatStream& beats, double loss_fraction, Rng& rng);

/// What a simulated client population would send for a ground-truth day: one beat
/// every `cadence` slots from slot 1, plus one at every slot where the status changes.
/// Beat timestamps sit at the end of their slot.
HeartbeatStream emit_heartbeats_from_trace(const AvailabilityMatrix& truth, int cadence,
                                           int minutes_per_slot);

// JSON-lines: one `{"day":..,"client":..,"t_min":..,"status":..}` object per line.
void write_heartbeats_jsonl(std::ostream& out, const HeartbeatStream& beats);
HeartbeatStream read_heartbeats_jsonl(std::istream& in);
void save_heartbeats(const std::filesystem::path& path, const HeartbeatStream& beats);
HeartbeatStream load_heartbeats(const std::filesystem::path& path);

}  // namespace flsched
