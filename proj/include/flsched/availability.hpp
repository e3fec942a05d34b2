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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace flsched {

inline constexpr int kMinutesPerDay = 1440;

/// 1-indexed time slot within a day, in [1, S].
struct SlotIndex {
    int value = 1;
    auto operator<=>(const SlotIndex&) const = default;
};

/// 1-indexed client identifier, in [1, N]; stable across every day of a scenario.
struct ClientId {
    int value = 1;
    auto operator<=>(const ClientId&) const = default;
};

/// Slot width and the derived slots-per-day count. The width must divide 1440.
class SlotClock {
  public:
    explicit SlotClock(int minutes_per_slot = 2);

    int minutes_per_slot() const { return minutes_per_slot_; }
    int slots_per_day() const { return kMinutesPerDay / minutes_per_slot_; }

    /// Starting minute-of-day of a slot (slot 1 starts at minute 0).
    int start_minute(SlotIndex slot) const { return (slot.value - 1) * minutes_per_slot_; }

  private:
    int minutes_per_slot_;
};

/// Maps a minute-of-day timestamp in (0, 1440] to its slot, ceil(t / dt).
/// Throws std::domain_error for out-of-range t or a width that does not divide 1440.
SlotIndex slot_of_timestamp(double minute_of_day, int minutes_per_slot);

/// Dense S x N binary grid with 1-indexed accessors. Storage is client-major so a
/// client's day is contiguous.
class SlotGrid {
  public:
    SlotGrid() = default;
    SlotGrid(int slots, int clients, bool fill = false);

    int slots() const { return slots_; }
    int clients() const { return clients_; }

    bool operator()(SlotIndex slot, ClientId client) const {
        return cells_[offset(slot, client)] != 0;
    }
    void set(SlotIndex slot, ClientId client, bool value) {
        cells_[offset(slot, client)] = value ? 1 : 0;
    }

    /// The S cells of one client, slot 1 first.
    std::span<const std::uint8_t> client_row(ClientId client) const;
    std::span<std::uint8_t> client_row(ClientId client);

    bool contains(SlotIndex slot) const { return slot.value >= 1 && slot.value <= slots_; }
    bool contains(ClientId client) const { return client.value >= 1 && client.value <= clients_; }

    std::size_t count_ones() const;

    friend bool operator==(const SlotGrid&, const SlotGrid&) = default;

  private:
    std::size_t offset(SlotIndex slot, ClientId client) const;

    int slots_ = 0;
    int clients_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// Number of cells that differ; throws std::invalid_argument on shape mismatch.
std::size_t hamming_distance(const SlotGrid& a, const SlotGrid& b);

/// One day's S x N availability grid A_i^(d)(s).
struct AvailabilityMatrix {
    int day = 1;
    SlotGrid grid;

    friend bool operator==(const AvailabilityMatrix&, const AvailabilityMatrix&) = default;
};

using DailyAvailabilityMatrix = AvailabilityMatrix;
/// Next-day forecast PA; same shape and binarity as the history it came from.
using PredictedAvailabilityMatrix = AvailabilityMatrix;

/// Length of the run of 1-cells for `client` starting at `start` inclusive. Stops at
/// the first 0 or at slot S; runs never wrap past midnight.
int consecutive_run_length(const SlotGrid& grid, ClientId client, SlotIndex start);

/// All run lengths for one client in a single reverse pass; element s-1 holds the run
/// starting at slot s.
std::vector<int> run_lengths(const SlotGrid& grid, ClientId client);

}  // namespace flsched
