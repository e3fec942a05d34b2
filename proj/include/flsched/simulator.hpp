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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flsched/availability.hpp"
#include "flsched/eligibility.hpp"
#include "flsched/heartbeat.hpp"
#include "flsched/predictor.hpp"
#include "flsched/schedule.hpp"
#include "flsched/trace_gen.hpp"

namespace flsched {

struct RoundOutcome {
    int day = 1;
    SlotIndex slot;
    std::vector<ClientId> selected;
    std::vector<ClientId> completed;
    std::vector<ClientId> dropped;
    std::vector<ClientId> successful;  // completed within agg_minutes
    double agg_minutes = 0.0;
    double round_duration = 0.0;
    double used_minutes = 0.0;     // completers' full response times
    double lost_minutes = 0.0;     // droppers' time before their first unavailable slot
    double elapsed_minutes = 0.0;  // every selected client's elapsed time, summed independently

    double completion_rate() const;
    double successful_rate() const;
    double dropout_rate() const;
};

/// Runs one synchronous round against the ground truth. A participant needs
/// ceil(response / dt) consecutive available slots starting at `slot`; slots past the
/// end of the day count as unavailable.
RoundOutcome execute_round(SlotIndex slot, const std::vector<ClientId>& participants,
                           const AvailabilityMatrix& truth, const std::vector<HardwareProfile>& profiles,
                           double agg_minutes, int minutes_per_slot);

/// Per round: participants absent from each of the preceding `lookback` rounds.
std::vector<int> unique_participation(const std::vector<std::vector<ClientId>>& rounds, int lookback = 3);

enum class Policy { kGh, kLru, kRandom, kCapability };
std::string_view policy_name(Policy p);
Policy parse_policy(std::string_view text);

enum class PredictorKind { kPersistence, kOracle, kExternal };

struct PredictorChoice {
    PredictorKind kind = PredictorKind::kPersistence;
    std::filesystem::path external_source;  // directory of pa_day_<d>.csv, or one file
    double decay = 0.7;
    int max_history_days = 7;

    /// "persistence", "oracle" or "external:<path>".
    static PredictorChoice parse(std::string_view text);
    std::string str() const;
};

struct ScenarioConfig {
    TraceConfig trace;
    IngestConfig ingest;
    ScheduleConfig schedule{24, 2, 10, std::nullopt, 5, 0.1};
    PredictorChoice predictor;
    double initial_response_minutes = 10.0;  // C_init
    int response_window = 0;                 // 0 = mean over all samples
    int buffer_slots = 2;                    // k
    // Seed every tracker with one measured response at registration so the first
    // day's eligibility already reflects real hardware.
    bool profile_at_registration = true;
    double capability_deadline_minutes = 15.0;
    int capability_pool_factor = 2;
    int unique_lookback = 3;
    std::vector<Policy> policies{Policy::kGh, Policy::kLru, Policy::kRandom, Policy::kCapability};
    std::vector<std::uint64_t> seeds{1};
    std::filesystem::path out_dir = "out";

    /// ceil(beta * N), with beta = schedule.selection_rate or 0.1 when unset.
    int baseline_clients_per_round() const;
    void validate() const;
};

struct ScenarioMetrics {
    Policy policy = Policy::kGh;
    std::uint64_t seed = 0;
    std::vector<RoundOutcome> rounds;
    std::vector<int> unique_counts;         // aligned with rounds
    std::vector<int> participation;         // index = client - 1
    double used_minutes = 0.0;
    double lost_minutes = 0.0;

    double mean_completion() const;
    double mean_successful() const;
    double mean_dropout() const;
    double mean_unique() const;
};

/// The observed history a scheduler sees: heartbeats re-emitted from the truth,
/// thinned by the configured loss, and rebuilt per day.
std::vector<AvailabilityMatrix> observe_trace(const Trace& trace, const IngestConfig& ingest, std::uint64_t seed);

/// What a scheduling policy produced for one day; handed to an optional observer.
struct DayArtifacts {
    const PredictedAvailabilityMatrix& predicted;
    const EligibilityMatrix& eligibility;
    const Schedule& schedule;
};
using DayObserver = std::function<void(const DayArtifacts&)>;

/// Replays days 2..D of one seeded scenario under one policy.
ScenarioMetrics run_scenario(const ScenarioConfig& cfg, Policy policy, std::uint64_t seed);

/// Same, over an already generated trace and its observed history.
ScenarioMetrics run_scenario(const ScenarioConfig& cfg, Policy policy, std::uint64_t seed, const Trace& trace,
                             const std::vector<AvailabilityMatrix>& observed, const DayObserver& observer = {});

/// Per-round rows; fixed formatting so identical runs give identical bytes.
std::string metrics_to_csv(const ScenarioMetrics& m);
void save_metrics_csv(const std::filesystem::path& path, const ScenarioMetrics& m);
std::string metrics_file_name(Policy policy, std::uint64_t seed);

}  // namespace flsched
