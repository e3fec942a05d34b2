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

#include "flsched/simulator.hpp"
#include "support.hpp"

namespace flsched {
namespace {

std::vector<ClientId> clients(std::initializer_list<int> ids) {
    std::vector<ClientId> out;
    for (int c : ids) out.push_back(ClientId{c});
    return out;
}

HardwareProfile profile(double download, double compute, double upload) { return {compute, upload, download}; }

ScenarioConfig small_scenario() {
    ScenarioConfig cfg;
    cfg.trace.num_clients = 40;
    cfg.trace.num_days = 3;
    cfg.schedule.min_clients = 4;
    cfg.schedule.rounds_per_day = 8;
    cfg.schedule.selection_rate = std::nullopt;
    return cfg;
}

TEST(ExecuteRound, DropoutLosesTimeUntilFirstGap) {
    // Ten minutes of work needs five 2-minute slots; only three are available.
    SlotGrid g(20, 2);
    for (int s = 1; s <= 3; ++s) g.set(SlotIndex{s}, ClientId{1}, true);
    for (int s = 1; s <= 6; ++s) g.set(SlotIndex{s}, ClientId{2}, true);
    const std::vector<HardwareProfile> profiles{profile(2, 6, 2), profile(1, 7, 1)};
    const auto out = execute_round(SlotIndex{1}, clients({1, 2}), {1, g}, profiles, 9.0, 2);
    EXPECT_EQ(out.dropped, clients({1}));
    EXPECT_EQ(out.completed, clients({2}));
    EXPECT_EQ(out.successful, clients({2}));
    EXPECT_DOUBLE_EQ(out.lost_minutes, 6.0);
    EXPECT_DOUBLE_EQ(out.used_minutes, 9.0);
    EXPECT_DOUBLE_EQ(out.elapsed_minutes, 15.0);
    EXPECT_DOUBLE_EQ(out.round_duration, 9.0);
    EXPECT_DOUBLE_EQ(out.completion_rate(), 0.5);
    EXPECT_DOUBLE_EQ(out.dropout_rate(), 0.5);
}

TEST(ExecuteRound, LateCompleterIsNotSuccessful) {
    const std::vector<HardwareProfile> profiles{profile(2, 8, 2)};
    const auto out = execute_round(SlotIndex{1}, clients({1}), {1, SlotGrid(20, 1, true)}, profiles, 10.0, 2);
    EXPECT_EQ(out.completed, clients({1}));
    EXPECT_TRUE(out.successful.empty());
    EXPECT_DOUBLE_EQ(out.successful_rate(), 0.0);
    EXPECT_DOUBLE_EQ(out.round_duration, 10.0);
}

TEST(ExecuteRound, DayEndCountsAsUnavailable) {
    const std::vector<HardwareProfile> profiles{profile(1, 8, 1)};
    const auto out = execute_round(SlotIndex{18}, clients({1}), {1, SlotGrid(20, 1, true)}, profiles, 10.0, 2);
    EXPECT_EQ(out.dropped, clients({1}));
    EXPECT_DOUBLE_EQ(out.lost_minutes, 6.0);
    EXPECT_THROW(execute_round(SlotIndex{21}, clients({1}), {1, SlotGrid(20, 1, true)}, profiles, 1.0, 2),
                 std::invalid_argument);
    EXPECT_THROW(execute_round(SlotIndex{1}, clients({2}), {1, SlotGrid(20, 1, true)}, profiles, 1.0, 2),
                 std::invalid_argument);
}

TEST(ExecuteRound, UsedPlusLostEqualsElapsed) {
    testing::Gen g(61);
    std::uniform_real_distribution<double> minutes(0.5, 30.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto grid = testing::random_grid(g, 60, 8, 0.8);
        std::vector<HardwareProfile> profiles;
        for (int c = 0; c < 8; ++c) profiles.push_back(profile(minutes(g), minutes(g), minutes(g)));
        const SlotIndex slot{1 + static_cast<int>(g() % 60)};
        const auto out = execute_round(slot, clients({1, 2, 3, 4, 5, 6, 7, 8}), {1, grid}, profiles, 20.0, 2);
        ASSERT_NEAR(out.used_minutes + out.lost_minutes, out.elapsed_minutes, 1e-9);
        ASSERT_EQ(out.completed.size() + out.dropped.size(), out.selected.size());
    }
}

TEST(UniqueParticipation, CountsClientsAbsentFromRecentRounds) {
    const std::vector<std::vector<ClientId>> rounds{clients({1, 2}), clients({2, 3}), clients({1, 4}),
                                                    clients({5}), clients({1, 2})};
    EXPECT_EQ(unique_participation(rounds, 3), (std::vector<int>{2, 1, 1, 1, 0}));
    EXPECT_EQ(unique_participation(rounds, 1), (std::vector<int>{2, 1, 2, 1, 2}));
    EXPECT_THROW(unique_participation(rounds, 0), std::invalid_argument);
}

TEST(Policies, NamesRoundTrip) {
    for (auto p : {Policy::kGh, Policy::kLru, Policy::kRandom, Policy::kCapability}) {
        EXPECT_EQ(parse_policy(policy_name(p)), p);
    }
    EXPECT_THROW(parse_policy("fifo"), std::invalid_argument);
    EXPECT_EQ(PredictorChoice::parse("oracle").kind, PredictorKind::kOracle);
    const auto ext = PredictorChoice::parse("external:/tmp/pa");
    EXPECT_EQ(ext.kind, PredictorKind::kExternal);
    EXPECT_EQ(ext.external_source, "/tmp/pa");
    EXPECT_EQ(ext.str(), "external:/tmp/pa");
    EXPECT_THROW(PredictorChoice::parse("external:"), std::invalid_argument);
    EXPECT_THROW(PredictorChoice::parse("cnn"), std::invalid_argument);
}

TEST(Scenario, BaselineRoundSizeIsTenPercent) {
    ScenarioConfig cfg;
    EXPECT_EQ(cfg.baseline_clients_per_round(), 10);
    cfg.schedule.selection_rate = std::nullopt;
    EXPECT_EQ(cfg.baseline_clients_per_round(), 10);
    const auto m = run_scenario(small_scenario(), Policy::kRandom, 1);
    ASSERT_FALSE(m.rounds.empty());
    for (const auto& r : m.rounds) EXPECT_EQ(r.selected.size(), 4u);  // ceil(0.1 * 40)
}

TEST(Scenario, CapabilityBaselineOnlyPicksFastClients) {
    const auto cfg = small_scenario();
    const auto m = run_scenario(cfg, Policy::kCapability, 2);
    auto trace_cfg = cfg.trace;
    trace_cfg.seed = 2;
    const auto trace = generate_trace(trace_cfg);
    for (const auto& r : m.rounds) {
        EXPECT_EQ(r.agg_minutes, cfg.capability_deadline_minutes);
        for (const auto c : r.selected) {
            EXPECT_LE(trace.profiles[c.value - 1].response_minutes(), cfg.capability_deadline_minutes);
        }
    }
}

TEST(Scenario, OracleWithoutLossCompletesEveryRound) {
    auto cfg = small_scenario();
    cfg.predictor = PredictorChoice::parse("oracle");
    cfg.ingest.loss_fraction = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        for (auto policy : {Policy::kGh, Policy::kLru}) {
            const auto m = run_scenario(cfg, policy, seed);
            ASSERT_FALSE(m.rounds.empty());
            EXPECT_EQ(m.mean_completion(), 1.0) << policy_name(policy) << " seed " << seed;
            EXPECT_EQ(m.lost_minutes, 0.0);
        }
    }
}

TEST(Scenario, DeterministicAndConservative) {
    const auto cfg = small_scenario();
    for (auto policy : {Policy::kGh, Policy::kLru, Policy::kRandom, Policy::kCapability}) {
        const auto a = run_scenario(cfg, policy, 5);
        const auto b = run_scenario(cfg, policy, 5);
        EXPECT_EQ(metrics_to_csv(a), metrics_to_csv(b));
        EXPECT_EQ(a.unique_counts.size(), a.rounds.size());
        double used = 0, lost = 0;
        for (const auto& r : a.rounds) {
            EXPECT_NEAR(r.used_minutes + r.lost_minutes, r.elapsed_minutes, 1e-9);
            EXPECT_TRUE(r.day == 2 || r.day == 3);
            used += r.used_minutes;
            lost += r.lost_minutes;
        }
        EXPECT_NEAR(a.used_minutes, used, 1e-6);
        EXPECT_NEAR(a.lost_minutes, lost, 1e-6);
    }
}

TEST(Scenario, ObserverSeesEveryScheduledDay) {
    auto cfg = small_scenario();
    auto trace_cfg = cfg.trace;
    trace_cfg.seed = 3;
    const auto trace = generate_trace(trace_cfg);
    const auto observed = observe_trace(trace, cfg.ingest, 3);
    std::vector<int> days;
    run_scenario(cfg, Policy::kGh, 3, trace, observed, [&](const DayArtifacts& a) {
        days.push_back(a.schedule.day);
        EXPECT_EQ(a.eligibility.day, a.predicted.day);
    });
    EXPECT_EQ(days, (std::vector<int>{2, 3}));
}

TEST(Scenario, ValidationCatchesBadConfigs) {
    auto cfg = small_scenario();
    cfg.trace.num_days = 1;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = small_scenario();
    cfg.ingest.minutes_per_slot = 4;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = small_scenario();
    cfg.policies.clear();
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Metrics, CsvHasOneRowPerRound) {
    const auto m = run_scenario(small_scenario(), Policy::kLru, 1);
    const auto csv = metrics_to_csv(m);
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), m.rounds.size() + 1);
    EXPECT_EQ(csv.rfind("round,day,slot,", 0), 0u);
    EXPECT_EQ(metrics_file_name(Policy::kLru, 7), "metrics_lru_7.csv");
}

}  // namespace
}  // namespace flsched
