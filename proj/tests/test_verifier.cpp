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
#include <functional>

#include "flsched/scheduler_gh.hpp"
#include "flsched/verifier.hpp"
#include "support.hpp"

namespace flsched::verifier {
namespace {

Instance instance(int n, int k, const char* alpha, const char* beta, int p) {
    Instance inst;
    inst.clients = n;
    inst.tasks_per_job = k;
    inst.alpha = Fraction::parse(alpha);
    inst.beta = Fraction::parse(beta);
    inst.deadline = p;
    return inst;
}

TaskExecution run(int slot, int executor, int job, int task) { return {slot, ClientId{executor}, job, task}; }

CandidateSchedule packed_two_by_two() {
    return {{run(1, 1, 1, 1), run(2, 1, 1, 2), run(1, 2, 2, 1), run(2, 2, 2, 2)}};
}

// Closed-form feasibility for unit tasks: each job needs `need` distinct slots and each
// slot holds at most floor(alpha*n) clients. Wrap-around packing meets both bounds.
bool analytic_feasible(const Instance& inst) {
    const auto need = static_cast<long>((inst.beta.num * inst.tasks_per_job + inst.beta.den - 1) / inst.beta.den);
    const long cap = static_cast<long>(inst.alpha.num * inst.clients / inst.alpha.den);
    return need <= inst.deadline && need <= inst.tasks_per_job &&
           static_cast<long>(inst.clients) * need <= cap * inst.deadline;
}

// Dumb oracle: try every assignment of slot subsets to every client.
bool enumerate_feasible(const Instance& inst) {
    const int p = inst.deadline;
    const auto need = (inst.beta.num * inst.tasks_per_job + inst.beta.den - 1) / inst.beta.den;
    std::vector<unsigned> pick(inst.clients, 0);
    const std::function<bool(int)> rec = [&](int c) -> bool {
        if (c == inst.clients) {
            for (int s = 0; s < p; ++s) {
                long active = 0;
                for (const auto m : pick) active += (m >> s) & 1u;
                if (active * inst.alpha.den > inst.alpha.num * inst.clients) return false;
            }
            return true;
        }
        for (unsigned m = 0; m < (1u << p); ++m) {
            const int size = __builtin_popcount(m);
            if (size < need || size > inst.tasks_per_job) continue;
            pick[c] = m;
            if (rec(c + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

TEST(Fraction, ParsesExactly) {
    EXPECT_EQ(Fraction::parse("1/3"), Fraction::make(1, 3));
    EXPECT_EQ(Fraction::parse("2/4"), Fraction::make(1, 2));
    EXPECT_EQ(Fraction::parse("0.25"), Fraction::make(1, 4));
    EXPECT_EQ(Fraction::parse("1"), Fraction::make(1, 1));
    EXPECT_EQ(Fraction::parse(".5"), Fraction::make(1, 2));
    EXPECT_EQ(Fraction::parse("1/3").str(), "1/3");
    EXPECT_THROW(Fraction::parse("x"), std::invalid_argument);
    EXPECT_THROW(Fraction::parse("1/0"), std::invalid_argument);
    EXPECT_THROW(Fraction::parse("-1/2"), std::invalid_argument);
}

TEST(Instance, ExactComparisons) {
    const auto inst = instance(3, 3, "1/3", "1/3", 3);
    EXPECT_EQ(inst.min_tasks_per_job(), 1);
    EXPECT_FALSE(inst.exceeds_active_limit(1));
    EXPECT_TRUE(inst.exceeds_active_limit(2));
    EXPECT_EQ(instance(1, 10, "1", "0.1", 1).min_tasks_per_job(), 1);
    EXPECT_EQ(instance(1, 7, "1", "1/2", 1).min_tasks_per_job(), 4);
    EXPECT_THROW(instance(0, 1, "1", "1", 1).validate(), std::invalid_argument);
    EXPECT_THROW(instance(1, 1, "3/2", "1", 1).validate(), std::invalid_argument);
    EXPECT_THROW(instance(1, 1, "0", "1", 1).validate(), std::invalid_argument);
}

TEST(Verify, FullyPackedScheduleIsAccepted) {
    const auto v = verify(instance(2, 2, "1", "1", 2), packed_two_by_two());
    EXPECT_TRUE(v.accepted);
    EXPECT_FALSE(v.violation.has_value());
}

TEST(Verify, TaskOnForeignClientBreaksPinning) {
    auto phi = packed_two_by_two();
    // Swap which client runs the first task of each job.
    phi.executions[0] = run(1, 2, 1, 1);
    phi.executions[2] = run(1, 1, 2, 1);
    const auto v = verify(instance(2, 2, "1", "1", 2), phi);
    ASSERT_FALSE(v.accepted);
    EXPECT_EQ(v.violation->condition, Condition::kPinning);
    EXPECT_EQ(v.violation->slot, 1);
}

TEST(Verify, TooManyActiveClients) {
    const CandidateSchedule phi{{run(1, 1, 1, 1), run(1, 2, 2, 1), run(2, 3, 3, 1)}};
    const auto v = verify(instance(3, 1, "1/3", "1", 2), phi);
    ASSERT_FALSE(v.accepted);
    EXPECT_EQ(v.violation->condition, Condition::kActiveLimit);
    EXPECT_EQ(v.violation->slot, 1);
}

TEST(Verify, DeadlineAndProgress) {
    const auto late = verify(instance(1, 1, "1", "1", 2), {{run(3, 1, 1, 1)}});
    ASSERT_FALSE(late.accepted);
    EXPECT_EQ(late.violation->condition, Condition::kDeadline);

    const auto empty = verify(instance(2, 2, "1", "1/2", 2), {});
    ASSERT_FALSE(empty.accepted);
    EXPECT_EQ(empty.violation->condition, Condition::kJobProgress);
    EXPECT_EQ(empty.violation->client, 1);

    // beta = 1/2 of K = 2 asks for one task per job.
    const auto half = verify(instance(2, 2, "1", "1/2", 2), {{run(1, 1, 1, 2), run(2, 2, 2, 1)}});
    EXPECT_TRUE(half.accepted);
}

TEST(Verify, FirstViolatedConditionIsReported) {
    // Late and overfull and pinned wrongly: deadline wins.
    const CandidateSchedule phi{{run(5, 1, 2, 1), run(5, 2, 1, 1)}};
    EXPECT_EQ(verify(instance(2, 1, "1/2", "1", 3), phi).violation->condition, Condition::kDeadline);
    for (auto c : {Condition::kDeadline, Condition::kActiveLimit, Condition::kPinning}) {
        EXPECT_TRUE(check_condition(instance(2, 1, "1/2", "1", 3), phi, c).has_value());
    }
    EXPECT_FALSE(check_condition(instance(2, 1, "1/2", "1", 3), phi, Condition::kJobProgress).has_value());
}

TEST(Verify, StructuralErrorsAreNotRejections) {
    const auto inst = instance(2, 2, "1", "1", 2);
    EXPECT_THROW(verify(inst, {{run(0, 1, 1, 1)}}), MalformedSchedule);
    EXPECT_THROW(verify(inst, {{run(1, 3, 1, 1)}}), MalformedSchedule);
    EXPECT_THROW(verify(inst, {{run(1, 1, 3, 1)}}), MalformedSchedule);
    EXPECT_THROW(verify(inst, {{run(1, 1, 1, 3)}}), MalformedSchedule);
    EXPECT_THROW(verify(inst, {{run(1, 1, 1, 1), run(2, 1, 1, 1)}}), MalformedSchedule);
    EXPECT_THROW(verify(inst, {{run(1, 1, 1, 1), run(1, 1, 1, 2)}}), MalformedSchedule);
}

TEST(BruteForce, SmallExamples) {
    const auto single = brute_force_schedule(instance(1, 1, "1", "1", 1));
    ASSERT_TRUE(single.has_value());
    EXPECT_EQ(single->executions, (std::vector<TaskExecution>{run(1, 1, 1, 1)}));

    EXPECT_FALSE(brute_force_schedule(instance(1, 3, "1", "1", 2)).has_value());

    const auto inst = instance(2, 2, "1/2", "1", 3);
    const auto phi = brute_force_schedule(inst);
    EXPECT_EQ(phi.has_value(), enumerate_feasible(inst));
    EXPECT_FALSE(phi.has_value());  // 4 unit tasks, one client per slot, 3 slots
}

TEST(BruteForce, RefusesLargeInstances) {
    EXPECT_THROW(brute_force_schedule(instance(5, 5, "1", "1", 1)), std::length_error);
    EXPECT_NO_THROW(brute_force_schedule(instance(2, 3, "1", "1", 4)));
}

TEST(BruteForce, AgreesWithIndependentOracles) {
    const char* fracs[] = {"1/3", "1/2", "1"};
    int checked = 0;
    for (int n = 1; n <= 24; ++n) {
        for (int k = 1; n * k <= 24; ++k) {
            for (int p = 1; n * k * p <= 24; ++p) {
                for (const char* a : fracs) {
                    for (const char* b : fracs) {
                        const auto inst = instance(n, k, a, b, p);
                        const auto phi = brute_force_schedule(inst);
                        ASSERT_EQ(phi.has_value(), analytic_feasible(inst))
                            << "n=" << n << " K=" << k << " p=" << p << " a=" << a << " b=" << b;
                        if (n * p <= 12) { ASSERT_EQ(phi.has_value(), enumerate_feasible(inst)); }
                        if (phi) { ASSERT_TRUE(verify(inst, *phi).accepted); }
                        if (std::string(a) == "1" && std::string(b) == "1") {
                            ASSERT_EQ(phi.has_value(), k <= p);
                        }
                        ++checked;
                    }
                }
            }
        }
    }
    EXPECT_GT(checked, 500);
}

TEST(ScheduleToCandidate, EmptyScheduleFailsProgress) {
    const AvailabilityMatrix truth{1, SlotGrid(10, 3, true)};
    const auto inst = instance(3, 1, "1", "1", 10);
    const auto phi = schedule_to_candidate(Schedule{}, truth, inst);
    EXPECT_TRUE(phi.executions.empty());
    EXPECT_EQ(verify(inst, phi).violation->condition, Condition::kJobProgress);
}

TEST(ScheduleToCandidate, FullRoundBreaksActiveLimit) {
    Schedule s;
    s.rounds.push_back({SlotIndex{2}, {ClientId{1}, ClientId{2}, ClientId{3}}, 10.0, 3, 0, false});
    const AvailabilityMatrix truth{1, SlotGrid(10, 3, true)};
    const auto inst = instance(3, 1, "1/3", "1", 10);
    const auto v = verify(inst, schedule_to_candidate(s, truth, inst));
    ASSERT_FALSE(v.accepted);
    EXPECT_EQ(v.violation->condition, Condition::kActiveLimit);
}

TEST(ScheduleToCandidate, SkipsTrulyUnavailableParticipants) {
    Schedule s;
    s.rounds.push_back({SlotIndex{1}, {ClientId{1}, ClientId{2}}, 10.0, 2, 0, false});
    s.rounds.push_back({SlotIndex{3}, {ClientId{1}}, 10.0, 1, 0, false});
    const auto truth = AvailabilityMatrix{1, testing::grid_from_rows({"10", "11", "11"})};
    const auto phi = schedule_to_candidate(s, truth, instance(2, 2, "1", "1", 3));
    EXPECT_EQ(phi.executions, (std::vector<TaskExecution>{run(1, 1, 1, 1), run(3, 1, 1, 2)}));
    EXPECT_EQ(achieved_execution_fraction(instance(2, 2, "1", "1", 3), phi), (std::vector<double>{1.0, 0.0}));
}

TEST(ScheduleToCandidate, CappedGhScheduleRespectsConditions) {
    testing::Gen g(51);
    for (int trial = 0; trial < 50; ++trial) {
        const auto grid = testing::random_grid(g, 30, 5, 0.6);
        ScheduleConfig cfg;
        cfg.rounds_per_day = 6;
        cfg.min_gap = 2;
        cfg.min_clients = 2;
        cfg.selection_rate = 0.4;  // cap of two per round
        const auto s = gh_schedule(eligibility_from_grid(1, grid), cfg, ResponseTracker());
        const auto inst = instance(5, 6, "2/5", "1/6", 30);
        const auto phi = schedule_to_candidate(s, {1, grid}, inst);
        for (auto c : {Condition::kDeadline, Condition::kActiveLimit, Condition::kPinning}) {
            ASSERT_FALSE(check_condition(inst, phi, c).has_value()) << condition_name(c);
        }
    }
}

TEST(Json, RoundTripsAndReportsCondition) {
    const auto phi = packed_two_by_two();
    EXPECT_EQ(candidate_from_json(candidate_to_json(phi)).executions, phi.executions);
    const auto inst = instance_from_json(R"({"n": 3, "K": 2, "alpha": "1/3", "beta": 0.5, "p": 4})");
    EXPECT_EQ(inst.alpha, Fraction::make(1, 3));
    EXPECT_EQ(inst.beta, Fraction::make(1, 2));
    EXPECT_THROW(instance_from_json(R"({"n": 3})"), std::invalid_argument);
    EXPECT_THROW(candidate_from_json(R"({"executions": [{"slot": 1}]})"), MalformedSchedule);
    const auto v = verify(instance(3, 1, "1/3", "1", 2), {{run(1, 1, 1, 1), run(1, 2, 2, 1), run(2, 3, 3, 1)}});
    EXPECT_NE(verdict_to_json(v).find("ii:active_limit"), std::string::npos);
}

}  // namespace
}  // namespace flsched::verifier
