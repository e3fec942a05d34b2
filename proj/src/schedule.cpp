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

#include "flsched/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "flsched/matrix_io.hpp"

namespace flsched {

double ScheduleConfig::unique_threshold_for(int slots) const {
    return unique_threshold.value_or(static_cast<double>(slots) / 10.0);
}

std::optional<int> ScheduleConfig::participant_cap(int num_clients) const {
    if (!selection_rate) return std::nullopt;
    // Guard against 0.07 * 100 = 7.000000000000001 rounding up to 8.
    return static_cast<int>(std::ceil(*selection_rate * num_clients - 1e-9));
}

void ScheduleConfig::validate(int num_clients) const {
    if (rounds_per_day < 1) throw std::invalid_argument("schedule config: rounds_per_day must be >= 1");
    if (min_gap < 0) throw std::invalid_argument("schedule config: min_gap must be >= 0");
    if (min_clients < 1) throw std::invalid_argument("schedule config: min_clients must be >= 1");
    if (max_relaxations < 0) throw std::invalid_argument("schedule config: max_relaxations must be >= 0");
    if (unique_threshold && *unique_threshold < 0.0) {
        throw std::invalid_argument("schedule config: unique_threshold must be >= 0");
    }
    if (selection_rate) {
        if (!(*selection_rate > 0.0 && *selection_rate <= 1.0)) {
            throw std::invalid_argument("schedule config: selection_rate must be in (0,1]");
        }
        if (*participant_cap(num_clients) < min_clients) {
            throw std::invalid_argument("schedule config: ceil(selection_rate * N) must be >= min_clients");
        }
    }
}

std::vector<SlotIndex> Schedule::selected_slots() const {
    std::vector<SlotIndex> slots;
    slots.reserve(rounds.size());
    for (const auto& r : rounds) slots.push_back(r.slot);
    return slots;
}

std::vector<int> eligible_count_per_slot(const SlotGrid& eligible) {
    std::vector<int> counts(eligible.slots(), 0);
    for (int c = 1; c <= eligible.clients(); ++c) {
        const auto row = eligible.client_row(ClientId{c});
        for (std::size_t s = 0; s < row.size(); ++s) counts[s] += row[s];
    }
    return counts;
}

std::vector<int> eligible_slots_per_client(const SlotGrid& eligible) {
    std::vector<int> counts(eligible.clients(), 0);
    for (int c = 1; c <= eligible.clients(); ++c) {
        const auto row = eligible.client_row(ClientId{c});
        counts[c - 1] = static_cast<int>(std::count(row.begin(), row.end(), std::uint8_t{1}));
    }
    return counts;
}

std::vector<ClientId> unique_clients(const SlotGrid& eligible, double threshold) {
    if (threshold < 0.0) throw std::invalid_argument("unique_clients: threshold must be >= 0");
    const auto per_client = eligible_slots_per_client(eligible);
    std::vector<ClientId> out;
    for (int c = 1; c <= eligible.clients(); ++c) {
        if (per_client[c - 1] < threshold) out.push_back(ClientId{c});
    }
    return out;
}

std::vector<SlotIndex> select_slots(const std::vector<int>& counts, int rounds, int min_gap,
                                    int min_clients) {
    std::vector<int> order(counts.size());
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return counts[a - 1] > counts[b - 1]; });

    std::vector<SlotIndex> taken;
    for (const int s : order) {
        if (static_cast<int>(taken.size()) >= rounds) break;
        if (counts[s - 1] < min_clients) break;  // sorted: nothing later qualifies
        const bool spaced = std::all_of(taken.begin(), taken.end(), [&](SlotIndex t) {
            return std::abs(t.value - s) >= min_gap;
        });
        if (spaced) taken.push_back(SlotIndex{s});
    }
    return taken;
}

double aggregation_time(const std::vector<ClientId>& participants, const ResponseTracker& tracker) {
    if (participants.empty()) throw std::invalid_argument("aggregation_time: empty participant set");
    double agg = 0.0;
    for (const auto c : participants) agg = std::max(agg, tracker.expected_duration(c));
    return agg;
}

namespace {

nlohmann::json ids_json(const std::vector<ClientId>& ids) {
    auto arr = nlohmann::json::array();
    for (const auto c : ids) arr.push_back(c.value);
    return arr;
}

std::vector<ClientId> ids_from(const nlohmann::json& arr) {
    std::vector<ClientId> ids;
    for (const auto& v : arr) ids.push_back(ClientId{v.get<int>()});
    return ids;
}

}  // namespace

std::string schedule_to_json(const Schedule& schedule) {
    nlohmann::json doc;
    doc["day"] = schedule.day;
    auto& slots = doc["slots"] = nlohmann::json::array();
    for (const auto& r : schedule.rounds) {
        slots.push_back({{"slot", r.slot.value},
                         {"participants", ids_json(r.participants)},
                         {"agg_minutes", r.agg_minutes},
                         {"effective_Kmin", r.effective_min_clients},
                         {"effective_G", r.effective_gap},
                         {"short_round", r.short_round}});
    }
    doc["uncovered_unique"] = ids_json(schedule.uncovered_unique);
    doc["relaxations_used"] = schedule.relaxations_used;
    if (schedule.cache_final) doc["cache_final"] = ids_json(*schedule.cache_final);
    return doc.dump(2);
}

void save_schedule(const std::filesystem::path& path, const Schedule& schedule) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << schedule_to_json(schedule) << '\n';
}

Schedule load_schedule(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read schedule file " + path.string());
    try {
        const auto doc = nlohmann::json::parse(in);
        Schedule s;
        s.day = doc.value("day", 1);
        for (const auto& r : doc.at("slots")) {
            ScheduledRound round;
            round.slot = SlotIndex{r.at("slot").get<int>()};
            round.participants = ids_from(r.at("participants"));
            round.agg_minutes = r.at("agg_minutes").get<double>();
            round.effective_min_clients = r.value("effective_Kmin", 0);
            round.effective_gap = r.value("effective_G", 0);
            round.short_round = r.value("short_round", false);
            s.rounds.push_back(std::move(round));
        }
        s.uncovered_unique = ids_from(doc.value("uncovered_unique", nlohmann::json::array()));
        s.relaxations_used = doc.value("relaxations_used", 0);
        if (doc.contains("cache_final")) s.cache_final = ids_from(doc.at("cache_final"));
        if (!s.rounds.empty()) {
            s.effective_min_clients = s.rounds.front().effective_min_clients;
            s.effective_gap = s.rounds.front().effective_gap;
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace flsched
