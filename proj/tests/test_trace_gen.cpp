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

#include <algorithm>
#include <cmath>

#include "flsched/trace_gen.hpp"
#include "support.hpp"

namespace flsched {
namespace {

TraceConfig small_config() {
    TraceConfig cfg;
    cfg.num_clients = 100;
    cfg.num_days = 2;
    return cfg;
}

double rate(const SlotGrid& g, const TraceConfig& cfg, bool night) {
    double on = 0, total = 0;
    for (int c = 1; c <= g.clients(); ++c) {
        for (int s = 1; s <= g.slots(); ++s) {
            if (is_night_slot(cfg, SlotIndex{s}) != night) continue;
            on += g(SlotIndex{s}, ClientId{c});
            total += 1;
        }
    }
    return on / total;
}

TEST(ReferenceDay, NightAndDayRates) {
    const auto cfg = small_config();
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto rng = make_rng(seed, "test");
        const auto day = generate_reference_day(cfg, rng);
        EXPECT_NEAR(rate(day.grid, cfg, true), 0.45, 0.03) << "seed " << seed;
        EXPECT_NEAR(rate(day.grid, cfg, false), 0.30, 0.03) << "seed " << seed;
    }
}

TEST(ReferenceDay, NightWindowWrapsMidnight) {
    const TraceConfig cfg;
    const SlotClock clock(cfg.minutes_per_slot);
    EXPECT_TRUE(is_night_slot(cfg, SlotIndex{1}));             // 00:00
    EXPECT_TRUE(is_night_slot(cfg, SlotIndex{179}));           // 05:56
    EXPECT_FALSE(is_night_slot(cfg, SlotIndex{181}));          // 06:00
    EXPECT_FALSE(is_night_slot(cfg, SlotIndex{22 * 30}));      // 21:58
    EXPECT_TRUE(is_night_slot(cfg, SlotIndex{22 * 30 + 1}));   // 22:00
    EXPECT_EQ(clock.slots_per_day(), 720);
}

TEST(ReferenceDay, DegenerateProbabilities) {
    auto cfg = small_config();
    cfg.base_availability_prob = 0.0;
    auto rng = make_rng(1, "test");
    EXPECT_EQ(generate_reference_day(cfg, rng).grid.count_ones(), 0u);

    cfg.base_availability_prob = 1.0;
    cfg.night_factor = 1.0;
    const auto ones = generate_reference_day(cfg, rng);
    EXPECT_EQ(ones.grid.count_ones(), static_cast<std::size_t>(720 * 100));
}

TEST(ReferenceDay, ConfigValidation) {
    TraceConfig cfg;
    cfg.base_availability_prob = 0.8;  // 0.8 * 1.5 > 1
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = TraceConfig{};
    cfg.night_factor = 0.5;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = TraceConfig{};
    cfg.hourly_flip_prob = 1.5;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = TraceConfig{};
    cfg.minutes_per_slot = 7;
    EXPECT_THROW(cfg.validate(), std::domain_error);
}

TEST(EvolveDay, ZeroFlipIsIdentity) {
    auto cfg = small_config();
    cfg.hourly_flip_prob = 0.0;
    auto rng = make_rng(4, "test");
    const auto d1 = generate_reference_day(cfg, rng);
    const auto d2 = evolve_day(d1, cfg, rng);
    EXPECT_EQ(d2.grid, d1.grid);
    EXPECT_EQ(d2.day, 2);
}

TEST(EvolveDay, CertainFlipInvertsEverything) {
    auto cfg = small_config();
    cfg.hourly_flip_prob = 1.0;
    auto rng = make_rng(4, "test");
    const auto d1 = generate_reference_day(cfg, rng);
    const auto d2 = evolve_day(d1, cfg, rng);
    EXPECT_EQ(hamming_distance(d1.grid, d2.grid), static_cast<std::size_t>(720 * 100));
}

TEST(EvolveDay, HammingNearFlipExpectation) {
    // Flips are per (client, hour), so enough clients are needed for a 5% band.
    auto cfg = small_config();
    cfg.num_clients = 1200;
    auto rng = make_rng(9, "test");
    const auto d1 = generate_reference_day(cfg, rng);
    const auto d2 = evolve_day(d1, cfg, rng);
    const double expected = 0.2 * 720 * 1200;
    EXPECT_NEAR(static_cast<double>(hamming_distance(d1.grid, d2.grid)), expected, 0.05 * expected);
}

TEST(EvolveDay, ChangesOnlyWholeHours) {
    const auto cfg = small_config();
    auto rng = make_rng(10, "test");
    const auto d1 = generate_reference_day(cfg, rng);
    const auto d2 = evolve_day(d1, cfg, rng);
    const int per_hour = 60 / cfg.minutes_per_slot;
    for (int c = 1; c <= cfg.num_clients; ++c) {
        for (int h = 0; h < 24; ++h) {
            // Within one hour every cell either flipped or none did.
            int flipped = 0;
            for (int k = 1; k <= per_hour; ++k) {
                const SlotIndex s{h * per_hour + k};
                flipped += d1.grid(s, ClientId{c}) != d2.grid(s, ClientId{c});
            }
            ASSERT_TRUE(flipped == 0 || flipped == per_hour) << "client " << c << " hour " << h;
        }
    }
}

TEST(Blips, ForcesFiveSlotsOffAtTwoMinuteSlots) {
    const TraceConfig cfg;
    EXPECT_EQ(cfg.blip_slots(), 5);
    SlotGrid g(720, 1, true);
    apply_blip(g, ClientId{1}, SlotIndex{100}, cfg.blip_slots());
    for (int s = 100; s <= 104; ++s) EXPECT_FALSE(g(SlotIndex{s}, ClientId{1}));
    EXPECT_TRUE(g(SlotIndex{99}, ClientId{1}));
    EXPECT_TRUE(g(SlotIndex{105}, ClientId{1}));
    EXPECT_EQ(g.count_ones(), 715u);
}

TEST(Blips, ZeroMeanIsIdentity) {
    auto cfg = small_config();
    cfg.blip_mean_per_day = 0.0;
    auto rng = make_rng(3, "test");
    const auto day = generate_reference_day(cfg, rng);
    EXPECT_EQ(inject_blips(day, cfg, rng).grid, day.grid);
}

TEST(Blips, EachInjectedBlipIsWholeOnFullRow) {
    // Single always-on client at one blip per day on average: a lone blip that does
    // not hit the day edge leaves exactly five zeros.
    auto cfg = small_config();
    cfg.num_clients = 1;
    cfg.blip_mean_per_day = 1.0;
    int exactly_one = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto rng = make_rng(seed, "test");
        const AvailabilityMatrix full{1, SlotGrid(720, 1, true)};
        const auto out = inject_blips(full, cfg, rng);
        const auto zeros = 720 - out.grid.count_ones();
        EXPECT_LE(zeros, 720u);
        if (zeros == 5) ++exactly_one;
    }
    EXPECT_GT(exactly_one, 40);  // P(one blip) = e^-1 ~ 0.37 of 200 draws
}

TEST(Profiles, DegenerateTierGivesExactCompute) {
    auto cfg = small_config();
    cfg.tier_probs = {1.0, 0.0, 0.0};
    auto rng = make_rng(1, "test");
    for (const auto& p : assign_profiles(cfg, rng)) EXPECT_EQ(p.compute_minutes, 4.0);
}

TEST(Profiles, MedianResponseInRange) {
    const auto cfg = small_config();
    auto rng = make_rng(2, "test");
    auto profiles = assign_profiles(cfg, rng);
    std::vector<double> totals;
    for (const auto& p : profiles) totals.push_back(p.response_minutes());
    std::nth_element(totals.begin(), totals.begin() + 50, totals.end());
    EXPECT_GE(totals[50], 5.0);
    EXPECT_LE(totals[50], 15.0);
}

TEST(Profiles, ClampedToRange) {
    auto cfg = small_config();
    cfg.comm_median_minutes = 200.0;  // every draw far above the cap
    cfg.tier_compute_minutes = {100.0, 100.0, 100.0};
    auto rng = make_rng(3, "test");
    for (const auto& p : assign_profiles(cfg, rng)) {
        EXPECT_EQ(p.compute_minutes, 30.0);
        EXPECT_EQ(p.upload_minutes, 30.0);
        EXPECT_EQ(p.download_minutes, 30.0);
    }
}

TEST(Trace, IdenticalSeedIdenticalTrace) {
    auto cfg = small_config();
    cfg.num_days = 3;
    cfg.seed = 77;
    const auto a = generate_trace(cfg);
    const auto b = generate_trace(cfg);
    ASSERT_EQ(a.days.size(), 3u);
    for (std::size_t d = 0; d < a.days.size(); ++d) {
        EXPECT_EQ(a.days[d].grid, b.days[d].grid);
        EXPECT_EQ(a.days[d].day, static_cast<int>(d) + 1);
    }
    EXPECT_EQ(a.profiles, b.profiles);
    cfg.seed = 78;
    EXPECT_NE(generate_trace(cfg).days[0].grid, a.days[0].grid);
}

TEST(Trace, ProfilesRoundTripThroughJson) {
    testing::TempDir dir("profiles");
    auto cfg = small_config();
    const auto trace = generate_trace(cfg);
    save_profiles(dir.path() / "profiles.json", trace.profiles);
    EXPECT_EQ(load_profiles(dir.path() / "profiles.json"), trace.profiles);
}

}  // namespace
}  // namespace flsched
