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

#include "flsched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "flsched/eligibility.hpp"
#include "flsched/matrix_io.hpp"
#include "flsched/random.hpp"
#include "flsched/scheduler_gh.hpp"
#include "flsched/scheduler_lru.hpp"

namespace flsched {
namespace {

double safe_ratio(std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

template <typename F>
double mean_over(const std::vector<RoundOutcome>& rounds, F f) {
    if (rounds.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& r : rounds) sum += f(r);
    return sum / static_cast<double>(rounds.size());
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

double RoundOutcome::completion_rate() const { return safe_ratio(completed.size(), selected.size()); }
double RoundOutcome::successful_rate() const { return safe_ratio(successful.size(), selected.size()); }
double RoundOutcome::dropout_rate() const { return safe_ratio(dropped.size(), selected.size()); }

RoundOutcome execute_round(SlotIndex slot, const std::vector<ClientId>& participants,
                           const AvailabilityMatrix& truth, const std::vector<HardwareProfile>& profiles,
                           double agg_minutes, int minutes_per_slot) {
    const auto& grid = truth.grid;
    if (!grid.contains(slot)) throw std::invalid_argument("execute_round: slot outside the day");
    RoundOutcome out;
    out.day = truth.day;
    out.slot = slot;
    out.selected = participants;
    out.agg_minutes = agg_minutes;

    double slowest = 0.0;
    for (const auto c : participants) {
        if (!grid.contains(c) || static_cast<std::size_t>(c.value) > profiles.size()) {
            throw std::invalid_argument("execute_round: unknown client " + std::to_string(c.value));
        }
        const double response = profiles[c.value - 1].response_minutes();
        const int need = static_cast<int>(std::ceil(response / minutes_per_slot));
        int s = slot.value;
        const int end = slot.value + need;  // exclusive
        while (s < end && s <= grid.slots() && grid(SlotIndex{s}, c)) ++s;
        if (s == end) {
            out.completed.push_back(c);
            out.used_minutes += response;
            slowest = std::max(slowest, response);
            if (response <= agg_minutes) out.successful.push_back(c);
        } else {
            out.dropped.push_back(c);
            out.lost_minutes += static_cast<double>(s - slot.value) * minutes_per_slot;
        }
        // Same quantity from the run length, kept apart from the branch above.
        const int run = consecutive_run_length(grid, c, slot);
        out.elapsed_minutes += std::min(static_cast<double>(run) * minutes_per_slot, response);
    }
    out.round_duration = out.completed.empty() ? agg_minutes : std::min(agg_minutes, slowest);
    return out;
}

std::vector<int> unique_participation(const std::vector<std::vector<ClientId>>& rounds, int lookback) {
    if (lookback < 1) throw std::invalid_argument("unique_participation: lookback must be >= 1");
    std::vector<int> out;
    out.reserve(rounds.size());
    for (std::size_t r = 0; r < rounds.size(); ++r) {
        std::set<int> recent;
        const std::size_t from = r >= static_cast<std::size_t>(lookback) ? r - lookback : 0;
        for (std::size_t q = from; q < r; ++q) {
            for (const auto c : rounds[q]) recent.insert(c.value);
        }
        int fresh = 0;
        for (const auto c : rounds[r]) fresh += recent.count(c.value) == 0 ? 1 : 0;
        out.push_back(fresh);
    }
    return out;
}

std::string_view policy_name(Policy p) {
    switch (p) {
        case Policy::kGh: return "gh";
        case Policy::kLru: return "lru";
        case Policy::kRandom: return "random";
        case Policy::kCapability: return "capability";
    }
    return "unknown";
}

Policy parse_policy(std::string_view text) {
    for (const auto p : {Policy::kGh, Policy::kLru, Policy::kRandom, Policy::kCapability}) {
        if (text == policy_name(p)) return p;
    }
    throw std::invalid_argument("unknown policy '" + std::string(text) + "' (gh, lru, random, capability)");
}

PredictorChoice PredictorChoice::parse(std::string_view text) {
    PredictorChoice out;
    if (text == "persistence") return out;
    if (text == "oracle") {
        out.kind = PredictorKind::kOracle;
        return out;
    }
    constexpr std::string_view kExternal = "external:";
    if (text.substr(0, kExternal.size()) == kExternal && text.size() > kExternal.size()) {
        out.kind = PredictorKind::kExternal;
        out.external_source = std::string(text.substr(kExternal.size()));
        return out;
    }
    throw std::invalid_argument("unknown predictor '" + std::string(text) +
                                "' (persistence, oracle, external:<path>)");
}

std::string PredictorChoice::str() const {
    switch (kind) {
        case PredictorKind::kPersistence: return "persistence";
        case PredictorKind::kOracle: return "oracle";
        case PredictorKind::kExternal: return "external:" + external_source.string();
    }
    return "persistence";
}

int ScenarioConfig::baseline_clients_per_round() const {
    const double beta = schedule.selection_rate.value_or(0.1);
    return std::max(1, static_cast<int>(std::ceil(beta * trace.num_clients - 1e-9)));
}

void ScenarioConfig::validate() const {
    trace.validate();
    ingest.validate(trace.num_clients);
    schedule.validate(trace.num_clients);
    if (ingest.minutes_per_slot != trace.minutes_per_slot) {
        throw std::invalid_argument("config: ingest.minutes_per_slot must equal trace.minutes_per_slot");
    }
    if (trace.num_days < 2) throw std::invalid_argument("config: a scenario needs at least 2 days");
    if (!(initial_response_minutes > 0.0)) throw std::invalid_argument("config: c_init must be > 0");
    if (response_window < 0) throw std::invalid_argument("config: response_window must be >= 0");
    if (buffer_slots < 0) throw std::invalid_argument("config: buffer_slots must be >= 0");
    if (!(capability_deadline_minutes > 0.0)) throw std::invalid_argument("config: capability deadline must be > 0");
    if (capability_pool_factor < 1) throw std::invalid_argument("config: capability pool factor must be >= 1");
    if (unique_lookback < 1) throw std::invalid_argument("config: unique_lookback must be >= 1");
    if (!(predictor.decay > 0.0 && predictor.decay <= 1.0)) throw std::invalid_argument("config: decay in (0,1]");
    if (predictor.max_history_days < 1) throw std::invalid_argument("config: history days must be >= 1");
    if (predictor.kind == PredictorKind::kExternal && predictor.external_source.empty()) {
        throw std::invalid_argument("config: external predictor needs a path");
    }
    if (policies.empty()) throw std::invalid_argument("config: at least one policy");
    if (seeds.empty()) throw std::invalid_argument("config: at least one seed");
    if (schedule.selection_rate && baseline_clients_per_round() > trace.num_clients) {
        throw std::invalid_argument("config: baseline round size exceeds N");
    }
}

double ScenarioMetrics::mean_completion() const {
    return mean_over(rounds, [](const RoundOutcome& r) { return r.completion_rate(); });
}
double ScenarioMetrics::mean_successful() const {
    return mean_over(rounds, [](const RoundOutcome& r) { return r.successful_rate(); });
}
double ScenarioMetrics::mean_dropout() const {
    return mean_over(rounds, [](const RoundOutcome& r) { return r.dropout_rate(); });
}
double ScenarioMetrics::mean_unique() const {
    if (unique_counts.empty()) return 0.0;
    return std::accumulate(unique_counts.begin(), unique_counts.end(), 0.0) /
           static_cast<double>(unique_counts.size());
}

std::vector<AvailabilityMatrix> observe_trace(const Trace& trace, const IngestConfig& ingest, std::uint64_t seed) {
    std::vector<AvailabilityMatrix> observed;
    observed.reserve(trace.days.size());
    for (const auto& truth : trace.days) {
        auto beats = emit_heartbeats_from_trace(truth, ingest.cadence, ingest.minutes_per_slot);
        if (ingest.loss_fraction > 0.0) {
            auto rng = make_rng(seed, "ingest.loss", static_cast<std::uint64_t>(truth.day));
            beats = drop_heartbeats(beats, ingest.loss_fraction, rng);
        }
        observed.push_back(build_daily_matrix(beats, ingest, truth.day, truth.grid.clients()).matrix);
    }
    return observed;
}

namespace {

std::unique_ptr<AvailabilityPredictor> make_predictor(const PredictorChoice& choice, const AvailabilityMatrix& truth) {
    switch (choice.kind) {
        case PredictorKind::kPersistence:
            return std::make_unique<PersistencePredictor>(choice.decay, choice.max_history_days);
        case PredictorKind::kOracle: return std::make_unique<OraclePredictor>(truth);
        case PredictorKind::kExternal: return std::make_unique<ExternalPredictor>(choice.external_source);
    }
    throw std::logic_error("unreachable predictor kind");
}

struct PlannedRound {
    SlotIndex slot;
    std::vector<ClientId> participants;
    double agg_minutes = 0.0;
};

std::vector<SlotIndex> evenly_spaced_slots(int slots, int rounds) {
    std::vector<SlotIndex> out;
    for (int r = 0; r < rounds && r < slots; ++r) {
        out.push_back(SlotIndex{static_cast<int>(static_cast<long long>(r) * slots / rounds) + 1});
    }
    return out;
}

std::vector<ClientId> uniform_pick(int num_clients, int count, Rng& rng) {
    std::vector<ClientId> all;
    for (int c = 1; c <= num_clients; ++c) all.push_back(ClientId{c});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(count)));
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

ScenarioMetrics run_scenario(const ScenarioConfig& cfg, Policy policy, std::uint64_t seed) {
    auto trace_cfg = cfg.trace;
    trace_cfg.seed = seed;
    const auto trace = generate_trace(trace_cfg);
    return run_scenario(cfg, policy, seed, trace, observe_trace(trace, cfg.ingest, seed));
}

ScenarioMetrics run_scenario(const ScenarioConfig& cfg, Policy policy, std::uint64_t seed, const Trace& trace,
                             const std::vector<AvailabilityMatrix>& observed, const DayObserver& observer) {
    cfg.validate();
    if (trace.days.size() != observed.size() || trace.days.size() < 2) {
        throw std::invalid_argument("run_scenario: need matching truth and observed days (>= 2)");
    }
    const int n = trace.days.front().grid.clients();
    const int slots = trace.days.front().grid.slots();
    const int dt = cfg.trace.minutes_per_slot;
    if (static_cast<int>(trace.profiles.size()) != n) {
        throw std::invalid_argument("run_scenario: profile count differs from client count");
    }

    ResponseTracker tracker(cfg.initial_response_minutes, cfg.response_window);
    if (cfg.profile_at_registration) {
        for (int c = 1; c <= n; ++c) tracker.record_response(ClientId{c}, trace.profiles[c - 1].response_minutes());
    }
    LruCache cache(n);
    const int baseline_size = cfg.baseline_clients_per_round();

    ScenarioMetrics m;
    m.policy = policy;
    m.seed = seed;
    m.participation.assign(n, 0);

    for (std::size_t d = 1; d < trace.days.size(); ++d) {
        const auto& truth = trace.days[d];
        std::vector<PlannedRound> plan;

        if (policy == Policy::kGh || policy == Policy::kLru) {
            auto predictor = make_predictor(cfg.predictor, truth);
            predictor->fit(std::span<const AvailabilityMatrix>(observed.data(), d));
            auto pa = predictor->predict_next_day();
            pa.day = truth.day;
            const auto e = build_eligibility(pa, tracker, cfg.buffer_slots, dt);
            const auto schedule = policy == Policy::kGh ? gh_schedule(e, cfg.schedule, tracker)
                                                        : lru_schedule(e, cfg.schedule, tracker, cache);
            if (observer) observer(DayArtifacts{pa, e, schedule});
            for (const auto& r : schedule.rounds) plan.push_back({r.slot, r.participants, r.agg_minutes});
        } else {
            auto rng = make_rng(seed, policy == Policy::kRandom ? "policy.random" : "policy.capability",
                                static_cast<std::uint64_t>(truth.day));
            for (const auto slot : evenly_spaced_slots(slots, cfg.schedule.rounds_per_day)) {
                PlannedRound round{slot, {}, 0.0};
                if (policy == Policy::kRandom) {
                    round.participants = uniform_pick(n, baseline_size, rng);
                    round.agg_minutes = aggregation_time(round.participants, tracker);
                } else {
                    for (const auto c : uniform_pick(n, baseline_size * cfg.capability_pool_factor, rng)) {
                        if (static_cast<int>(round.participants.size()) >= baseline_size) break;
                        if (trace.profiles[c.value - 1].response_minutes() <= cfg.capability_deadline_minutes) {
                            round.participants.push_back(c);
                        }
                    }
                    round.agg_minutes = cfg.capability_deadline_minutes;
                }
                if (!round.participants.empty()) plan.push_back(std::move(round));
            }
        }

        for (const auto& r : plan) {
            auto outcome = execute_round(r.slot, r.participants, truth, trace.profiles, r.agg_minutes, dt);
            for (const auto c : outcome.selected) ++m.participation[c.value - 1];
            for (const auto c : outcome.completed) {
                tracker.record_response(c, trace.profiles[c.value - 1].response_minutes());
            }
            m.used_minutes += outcome.used_minutes;
            m.lost_minutes += outcome.lost_minutes;
            m.rounds.push_back(std::move(outcome));
        }
    }

    std::vector<std::vector<ClientId>> sets;
    sets.reserve(m.rounds.size());
    for (const auto& r : m.rounds) sets.push_back(r.selected);
    m.unique_counts = unique_participation(sets, cfg.unique_lookback);
    return m;
}

std::string metrics_file_name(Policy policy, std::uint64_t seed) {
    return "metrics_" + std::string(policy_name(policy)) + "_" + std::to_string(seed) + ".csv";
}

std::string metrics_to_csv(const ScenarioMetrics& m) {
    std::ostringstream out;
    out << "round,day,slot,selected,completed,dropped,successful,completion_rate,successful_rate,"
           "dropout_rate,unique,agg_minutes,round_duration,used_minutes,lost_minutes\n";
    for (std::size_t i = 0; i < m.rounds.size(); ++i) {
        const auto& r = m.rounds[i];
        out << i + 1 << ',' << r.day << ',' << r.slot.value << ',' << r.selected.size() << ','
            << r.completed.size() << ',' << r.dropped.size() << ',' << r.successful.size() << ','
            << fmt(r.completion_rate()) << ',' << fmt(r.successful_rate()) << ',' << fmt(r.dropout_rate()) << ','
            << (i < m.unique_counts.size() ? m.unique_counts[i] : 0) << ',' << fmt(r.agg_minutes) << ','
            << fmt(r.round_duration) << ',' << fmt(r.used_minutes) << ',' << fmt(r.lost_minutes) << '\n';
    }
    return out.str();
}

void save_metrics_csv(const std::filesystem::path& path, const ScenarioMetrics& m) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out << metrics_to_csv(m);
}

}  // namespace flsched
