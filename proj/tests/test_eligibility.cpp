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

#include <gtest/gtest.h>

#include "flsched/eligibility.hpp"
#include "support.hpp"

namespace flsched {
namespace {

using testing::random_grid;

PredictedAvailabilityMatrix pa_of(SlotGrid grid) { return {2, std::move(grid)}; }

TEST(SlotsNeeded, ExpectedPlusBuffer) {
    EXPECT_EQ(slots_needed(10.0, 2, 2), 7);
    EXPECT_EQ(slots_needed(9.0, 2, 2), 7);   // 4.5 slots round up
    EXPECT_EQ(slots_needed(1e-9, 0, 2), 1);
    EXPECT_EQ(slots_needed(0.0, 0, 2), 1);   // never below one slot
    EXPECT_EQ(slots_needed(ClientId{4}, ResponseTracker(10.0), 2, 2), 7);
    EXPECT_THROW(slots_needed(10.0, -1, 2), std::invalid_argument);
    EXPECT_THROW(slots_needed(10.0, 2, 0), std::invalid_argument);
}

TEST(Eligibility, AllOnesBoundary) {
    const auto e = build_eligibility(pa_of(SlotGrid(720, 2, true)), ResponseTracker(10.0), 2, 2);
    for (int s = 1; s <= 720; ++s) {
        EXPECT_EQ(e(SlotIndex{s}, ClientId{1}), s <= 714) << s;
    }
    EXPECT_EQ(e.slots_needed, (std::vector<int>{7, 7}));
    EXPECT_EQ(e.window_at(SlotIndex{714}, ClientId{2}), 7);
    EXPECT_EQ(e.day, 2);
}

TEST(Eligibility, AllZerosGiveNothing) {
    const auto e = build_eligibility(pa_of(SlotGrid(720, 3)), ResponseTracker(10.0), 2, 2);
    EXPECT_EQ(e.eligible.count_ones(), 0u);
}

TEST(Eligibility, ExactRunOfSevenOnlyAtItsStart) {
    SlotGrid pa(20, 1);
    for (int s = 1; s <= 7; ++s) pa.set(SlotIndex{s}, ClientId{1}, true);
    const auto e = build_eligibility(pa_of(pa), ResponseTracker(10.0), 2, 2);
    EXPECT_TRUE(e(SlotIndex{1}, ClientId{1}));
    EXPECT_EQ(e.eligible.count_ones(), 1u);
}

TEST(Eligibility, UsesEachClientsOwnHistory) {
    ResponseTracker t(10.0);
    t.record_response(ClientId{2}, 2.0);  // one slot of work plus two buffer
    const auto e = build_eligibility(pa_of(SlotGrid(10, 2, true)), t, 2, 2);
    EXPECT_EQ(e.slots_needed, (std::vector<int>{7, 3}));
    EXPECT_EQ(e.eligible.count_ones(), 4u + 8u);
}

TEST(Eligibility, MatchesPerCellScan) {
    testing::Gen g(31);
    for (int trial = 0; trial < 300; ++trial) {
        const auto pa = random_grid(g, 20, 5, 0.7);
        ResponseTracker t(1.0 + static_cast<double>(g() % 12));
        for (int c = 1; c <= 5; ++c) {
            if (g() % 2) t.record_response(ClientId{c}, 0.5 + static_cast<double>(g() % 20));
        }
        const int buffer = static_cast<int>(g() % 3);
        const auto e = build_eligibility(pa_of(pa), t, buffer, 2);
        ASSERT_EQ(e.eligible, testing::naive_eligibility(pa, e.slots_needed));
        for (int c = 1; c <= 5; ++c) {
            for (int s = 1; s <= 20; ++s) {
                ASSERT_EQ(e.window_at(SlotIndex{s}, ClientId{c}), testing::naive_run(pa, c, s));
            }
        }
    }
}

TEST(Eligibility, MonotoneInBufferAndExpectedDuration) {
    testing::Gen g(32);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pa = pa_of(random_grid(g, 40, 4, 0.8));
        const double c_small = 1.0 + static_cast<double>(g() % 10);
        const int k = static_cast<int>(g() % 3);
        const auto base = build_eligibility(pa, ResponseTracker(c_small), k, 2);
        const auto more_k = build_eligibility(pa, ResponseTracker(c_small), k + 1, 2);
        const auto more_c = build_eligibility(pa, ResponseTracker(c_small + 3.0), k, 2);
        for (int c = 1; c <= 4; ++c) {
            for (int s = 1; s <= 40; ++s) {
                const SlotIndex slot{s};
                const ClientId id{c};
                ASSERT_FALSE(!base(slot, id) && more_k(slot, id));
                ASSERT_FALSE(!base(slot, id) && more_c(slot, id));
            }
        }
    }
}

TEST(Eligibility, EligibleCellsSitOnPredictedWindows) {
    testing::Gen g(33);
    const auto pa = random_grid(g, 60, 6, 0.75);
    const auto e = build_eligibility(pa_of(pa), ResponseTracker(6.0), 1, 2);
    for (int c = 1; c <= 6; ++c) {
        for (int s = 1; s <= 60; ++s) {
            if (!e(SlotIndex{s}, ClientId{c})) continue;
            for (int t = s; t < s + e.slots_needed[c - 1]; ++t) ASSERT_TRUE(pa(SlotIndex{t}, ClientId{c}));
        }
    }
}

TEST(Eligibility, FromBareGridRecomputesWindows) {
    const auto e = eligibility_from_grid(4, testing::grid_from_rows({"1", "1", "0", "1"}));
    EXPECT_EQ(e.day, 4);
    EXPECT_EQ(e.window_at(SlotIndex{1}, ClientId{1}), 2);
    EXPECT_EQ(e.window_at(SlotIndex{3}, ClientId{1}), 0);
    EXPECT_THROW(e.window_at(SlotIndex{5}, ClientId{1}), std::out_of_range);
}

}  // namespace
}  // namespace flsched
