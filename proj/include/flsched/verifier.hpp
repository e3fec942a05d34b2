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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flsched/availability.hpp"
#include "flsched/schedule.hpp"

namespace flsched::verifier {

/// Exact non-negative fraction, kept in lowest terms.
struct Fraction {
    std::int64_t num = 1;
    std::int64_t den = 1;

    static Fraction make(std::int64_t num, std::int64_t den);
    /// Accepts "a/b", an integer, or a decimal literal such as "0.25" (converted exactly).
    static Fraction parse(std::string_view text);

    std::string str() const;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// The scheduling decision problem: n clients, each with one job of K unit tasks;
/// at most alpha*n clients active in any slot, at least beta*K tasks per job, all by
/// deadline p, every task on its own client.
struct Instance {
    int clients = 1;        // n
    int tasks_per_job = 1;  // K
    Fraction alpha;         // global selection proportion, (0, 1]
    Fraction beta;          // local execution proportion, (0, 1]
    int deadline = 1;       // p, in slots

    void validate() const;
    /// Smallest task count satisfying count >= beta*K (tasks are atomic, so ceil).
    int min_tasks_per_job() const;
    /// True when `active` clients in one slot exceed alpha*n, compared exactly.
    bool exceeds_active_limit(int active) const;
};

/// Task T_job^task executed by `executor` during `slot`.
struct TaskExecution {
    int slot = 1;
    ClientId executor;
    int job = 1;
    int task = 1;

    friend bool operator==(const TaskExecution&, const TaskExecution&) = default;
};

struct CandidateSchedule {
    std::vector<TaskExecution> executions;
};

enum class Condition { kDeadline = 1, kActiveLimit = 2, kJobProgress = 3, kPinning = 4 };

std::string_view condition_name(Condition c);

struct Violation {
    Condition condition;
    int slot = 0;    // 0 when the condition is not slot-specific
    int client = 0;  // job or executor concerned, 0 when not client-specific
    std::string detail;
};

struct Verdict {
    bool accepted = false;
    std::optional<Violation> violation;
};

/// Raised for a candidate that is not a schedule at all (ids out of range, a task run
/// twice, a client running two tasks in one slot, slot < 1); distinct from a rejection.
class MalformedSchedule : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

void check_well_formed(const Instance& instance, const CandidateSchedule& phi);

/// First witness against one condition, or nullopt when it holds.
std::optional<Violation> check_condition(const Instance& instance, const CandidateSchedule& phi,
                                         Condition condition);

/// Checks (i) deadline, (ii) active limit, (iii) job progress, (iv) pinning in that
/// order and reports the first failure. O(p*n*K) overall.
Verdict verify(const Instance& instance, const CandidateSchedule& phi);

/// Largest n*K*p the exhaustive search accepts.
inline constexpr int kEnumerationBound = 24;

/// Exhaustive search over per-client busy-slot sets. Returns an accepting schedule or
/// nullopt when none exists; throws std::length_error above kEnumerationBound.
std::optional<CandidateSchedule> brute_force_schedule(const Instance& instance);

/// Lifts one day's heuristic plan into the formal model: each participant that is
/// truly available at its round's slot executes the next task of its own job in that
/// slot. Participations beyond K tasks are not represented.
CandidateSchedule schedule_to_candidate(const Schedule& schedule, const AvailabilityMatrix& truth,
                                        const Instance& instance);

/// Executed tasks / K for each job (index = job - 1).
std::vector<double> achieved_execution_fraction(const Instance& instance, const CandidateSchedule& phi);

// JSON for the CLI: instance {"n","K","alpha","beta","p"}; schedule
// {"executions":[{"slot","client","job","task"}]}; verdict {"accepted", "condition", ...}.
Instance instance_from_json(std::string_view text);
CandidateSchedule candidate_from_json(std::string_view text);
std::string candidate_to_json(const CandidateSchedule& phi);
std::string verdict_to_json(const Verdict& verdict);

}  // namespace flsched::verifier
