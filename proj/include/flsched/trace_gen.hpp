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

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "flsched/availability.hpp"
#include "flsched/random.hpp"

namespace flsched {

/// Knobs for synthetic week-long availability traces and device profiles.
struct TraceConfig {
    int num_clients = 100;
    int num_days = 7;
    int minutes_per_slot = 2;
    std::uint64_t seed = 1;

    // Reference-day availability. Each client draws one Bernoulli per block of
    // `block_minutes`; a block equal to the slot width gives i.i.d. slots.
    double base_availability_prob = 0.3;
    double night_factor = 1.5;
    int night_start_hour = 22;
    int night_end_hour = 6;
    int block_minutes = 30;

    // Day-to-day drift: each client/hour is inverted relative to the previous day.
    double hourly_flip_prob = 0.20;

    // Short disconnections: Poisson count per client per day, each forcing
    // ceil(blip_offline_minutes / dt) slots offline after an online moment.
    double blip_mean_per_day = 2.0;
    int blip_online_seconds = 30;
    int blip_offline_minutes = 10;

    // Device heterogeneity.
    std::array<double, 3> tier_probs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    std::array<double, 3> tier_compute_minutes{4.0, 8.0, 16.0};
    double comm_median_minutes = 2.0;
    double comm_sigma = 0.5;
    double min_profile_minutes = 0.5;
    double max_profile_minutes = 30.0;

    int slots_per_day() const { return SlotClock(minutes_per_slot).slots_per_day(); }
    int blip_slots() const;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct HardwareProfile {
    double compute_minutes = 8.0;
    double upload_minutes = 2.0;
    double download_minutes = 2.0;

    /// Download + compute + upload.
    double response_minutes() const { return download_minutes + compute_minutes + upload_minutes; }

    friend bool operator==(const HardwareProfile&, const HardwareProfile&) = default;
};

/// True when the slot's starting hour falls in [night_start, night_end), wrapping midnight.
bool is_night_slot(const TraceConfig& cfg, SlotIndex slot);

AvailabilityMatrix generate_reference_day(const TraceConfig& cfg, Rng& rng);

/// Copies `prev` and inverts each (client, hour) block with probability hourly_flip_prob.
AvailabilityMatrix evolve_day(const AvailabilityMatrix& prev, const TraceConfig& cfg, Rng& rng);

/// Forces `length` slots from `start` offline for one client (clipped at slot S).
void apply_blip(SlotGrid& grid, ClientId client, SlotIndex start, int length);

AvailabilityMatrix inject_blips(const AvailabilityMatrix& matrix, const TraceConfig& cfg, Rng& rng);

std::vector<HardwareProfile> assign_profiles(const TraceConfig& cfg, Rng& rng);

/// Ground truth for a whole scenario: one matrix per day plus per-client profiles.
struct Trace {
    std::vector<AvailabilityMatrix> days;
    std::vector<HardwareProfile> profiles;
};

/// Day 1 is the reference day; each later day evolves the previous blip-free pattern,
/// and every day gets its own blips. Fully determined by cfg.seed.
Trace generate_trace(const TraceConfig& cfg);

void save_profiles(const std::filesystem::path& path, const std::vector<HardwareProfile>& profiles);
std::vector<HardwareProfile> load_profiles(const std::filesystem::path& path);

}  // namespace flsched
