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

#include "flsched/availability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace flsched {

SlotClock::SlotClock(int minutes_per_slot) : minutes_per_slot_(minutes_per_slot) {
    if (minutes_per_slot <= 0 || kMinutesPerDay % minutes_per_slot != 0) {
        throw std::domain_error("slot width must be a positive divisor of 1440, got " +
                                std::to_string(minutes_per_slot));
    }
}

SlotIndex slot_of_timestamp(double minute_of_day, int minutes_per_slot) {
    const SlotClock clock(minutes_per_slot);
    if (!(minute_of_day > 0.0) || minute_of_day > kMinutesPerDay) {
        throw std::domain_error("timestamp must lie in (0, 1440] minutes, got " +
                                std::to_string(minute_of_day));
    }
    const auto slot = static_cast<int>(std::ceil(minute_of_day / clock.minutes_per_slot()));
    return SlotIndex{std::clamp(slot, 1, clock.slots_per_day())};
}

SlotGrid::SlotGrid(int slots, int clients, bool fill) : slots_(slots), clients_(clients) {
    if (slots <= 0 || clients <= 0) {
        throw std::invalid_argument("grid dimensions must be positive");
    }
    cells_.assign(static_cast<std::size_t>(slots) * static_cast<std::size_t>(clients),
                  fill ? 1 : 0);
}

std::size_t SlotGrid::offset(SlotIndex slot, ClientId client) const {
    if (!contains(slot) || !contains(client)) {
        throw std::out_of_range("grid index (slot " + std::to_string(slot.value) + ", client " +
                                std::to_string(client.value) + ") out of range");
    }
    return static_cast<std::size_t>(client.value - 1) * static_cast<std::size_t>(slots_) +
           static_cast<std::size_t>(slot.value - 1);
}

std::span<const std::uint8_t> SlotGrid::client_row(ClientId client) const {
    return {cells_.data() + offset(SlotIndex{1}, client), static_cast<std::size_t>(slots_)};
}

std::span<std::uint8_t> SlotGrid::client_row(ClientId client) {
    return {cells_.data() + offset(SlotIndex{1}, client), static_cast<std::size_t>(slots_)};
}

std::size_t SlotGrid::count_ones() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

std::size_t hamming_distance(const SlotGrid& a, const SlotGrid& b) {
    if (a.slots() != b.slots() || a.clients() != b.clients()) {
        throw std::invalid_argument("hamming_distance: shape mismatch");
    }
    std::size_t diff = 0;
    for (int c = 1; c <= a.clients(); ++c) {
        const auto ra = a.client_row(ClientId{c});
        const auto rb = b.client_row(ClientId{c});
        for (std::size_t s = 0; s < ra.size(); ++s) {
            diff += ra[s] != rb[s] ? 1 : 0;
        }
    }
    return diff;
}

int consecutive_run_length(const SlotGrid& grid, ClientId client, SlotIndex start) {
    if (!grid.contains(start)) {
        throw std::out_of_range("run start slot out of range");
    }
    const auto row = grid.client_row(client);
    int run = 0;
    for (auto s = static_cast<std::size_t>(start.value - 1); s < row.size() && row[s] != 0; ++s) {
        ++run;
    }
    return run;
}

std::vector<int> run_lengths(const SlotGrid& grid, ClientId client) {
    const auto row = grid.client_row(client);
    std::vector<int> runs(row.size(), 0);
    int next = 0;
    for (std::size_t s = row.size(); s-- > 0;) {
        next = row[s] != 0 ? next + 1 : 0;
        runs[s] = next;
    }
    return runs;
}

}  // namespace flsched
