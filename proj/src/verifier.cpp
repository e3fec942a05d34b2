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

#include "flsched/verifier.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <numeric>
#include <set>

#include "json.hpp"

namespace flsched::verifier {
namespace {

std::int64_t parse_i64(std::string_view text) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("fraction: cannot parse '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

Fraction Fraction::make(std::int64_t num, std::int64_t den) {
    if (den <= 0 || num < 0) throw std::invalid_argument("fraction: need num >= 0 and den > 0");
    const auto g = std::gcd(num, den);
    return g == 0 ? Fraction{0, 1} : Fraction{num / g, den / g};
}

Fraction Fraction::parse(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        return make(parse_i64(text.substr(0, slash)), parse_i64(text.substr(slash + 1)));
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto frac = text.substr(dot + 1);
        if (frac.size() > 15) throw std::invalid_argument("fraction: too many decimal digits");
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        const auto whole = text.substr(0, dot);
        const std::int64_t w = whole.empty() ? 0 : parse_i64(whole);
        const std::int64_t f = frac.empty() ? 0 : parse_i64(frac);
        return make(w * den + f, den);
    }
    return make(parse_i64(text), 1);
}

std::string Fraction::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

void Instance::validate() const {
    if (clients < 1 || tasks_per_job < 1 || deadline < 1) {
        throw std::invalid_argument("instance: n, K and p must be >= 1");
    }
    const auto in_unit = [](const Fraction& f) { return f.num > 0 && f.num <= f.den; };
    if (!in_unit(alpha) || !in_unit(beta)) {
        throw std::invalid_argument("instance: alpha and beta must lie in (0, 1]");
    }
}

int Instance::min_tasks_per_job() const {
    const std::int64_t need = beta.num * tasks_per_job;
    return static_cast<int>((need + beta.den - 1) / beta.den);
}

bool Instance::exceeds_active_limit(int active) const {
    return static_cast<std::int64_t>(active) * alpha.den > alpha.num * clients;
}

std::string_view condition_name(Condition c) {
    switch (c) {
        case Condition::kDeadline: return "i:deadline";
        case Condition::kActiveLimit: return "ii:active_limit";
        case Condition::kJobProgress: return "iii:job_progress";
        case Condition::kPinning: return "iv:pinning";
    }
    return "unknown";
}

void check_well_formed(const Instance& instance, const CandidateSchedule& phi) {
    instance.validate();
    std::set<std::pair<int, int>> tasks_seen;
    std::set<std::pair<int, int>> busy;  // (slot, executor)
    for (const auto& x : phi.executions) {
        const auto where = "execution (slot " + std::to_string(x.slot) + ", client " +
                           std::to_string(x.executor.value) + ", job " + std::to_string(x.job) +
                           ", task " + std::to_string(x.task) + ")";
        if (x.slot < 1) throw MalformedSchedule(where + ": slot must be >= 1");
        if (x.executor.value < 1 || x.executor.value > instance.clients) {
            throw MalformedSchedule(where + ": unknown client");
        }
        if (x.job < 1 || x.job > instance.clients) throw MalformedSchedule(where + ": unknown job");
        if (x.task < 1 || x.task > instance.tasks_per_job) throw MalformedSchedule(where + ": unknown task");
        if (!tasks_seen.insert({x.job, x.task}).second) throw MalformedSchedule(where + ": task executed twice");
        if (!busy.insert({x.slot, x.executor.value}).second) {
            throw MalformedSchedule(where + ": client runs two tasks in one slot");
        }
    }
}

std::optional<Violation> check_condition(const Instance& instance, const CandidateSchedule& phi,
                                         Condition condition) {
    switch (condition) {
        case Condition::kDeadline:
            for (const auto& x : phi.executions) {
                if (x.slot > instance.deadline) {
                    return Violation{condition, x.slot, x.executor.value,
                                     "task runs after deadline " + std::to_string(instance.deadline)};
                }
            }
            return std::nullopt;
        case Condition::kActiveLimit: {
            std::map<int, int> active;
            for (const auto& x : phi.executions) ++active[x.slot];
            for (const auto& [slot, count] : active) {
                if (instance.exceeds_active_limit(count)) {
                    return Violation{condition, slot, 0,
                                     std::to_string(count) + " active clients exceed alpha*n = " +
                                         instance.alpha.str() + "*" + std::to_string(instance.clients)};
                }
            }
            return std::nullopt;
        }
        case Condition::kJobProgress: {
            std::vector<int> done(instance.clients, 0);
            for (const auto& x : phi.executions) ++done[x.job - 1];
            const int need = instance.min_tasks_per_job();
            for (int j = 1; j <= instance.clients; ++j) {
                if (done[j - 1] < need) {
                    return Violation{condition, 0, j,
                                     "job executed " + std::to_string(done[j - 1]) + " tasks, needs " +
                                         std::to_string(need)};
                }
            }
            return std::nullopt;
        }
        case Condition::kPinning:
            for (const auto& x : phi.executions) {
                if (x.executor.value != x.job) {
                    return Violation{condition, x.slot, x.executor.value,
                                     "task of job " + std::to_string(x.job) + " runs on another client"};
                }
            }
            return std::nullopt;
    }
    return std::nullopt;
}

Verdict verify(const Instance& instance, const CandidateSchedule& phi) {
    check_well_formed(instance, phi);
    for (const auto c : {Condition::kDeadline, Condition::kActiveLimit, Condition::kJobProgress,
                         Condition::kPinning}) {
        if (auto v = check_condition(instance, phi, c)) return Verdict{false, std::move(v)};
    }
    return Verdict{true, std::nullopt};
}

std::optional<CandidateSchedule> brute_force_schedule(const Instance& instance) {
    instance.validate();
    const int n = instance.clients;
    const int k = instance.tasks_per_job;
    const int p = instance.deadline;
    if (static_cast<std::int64_t>(n) * k * p > kEnumerationBound) {
        throw std::length_error("brute force refused: n*K*p exceeds " + std::to_string(kEnumerationBound));
    }
    const int need = instance.min_tasks_per_job();
    const int most = std::min(k, p);
    if (need > most) return std::nullopt;

    // Candidate busy-slot masks per client: any subset of [1, p] of size need..most.
    std::vector<unsigned> masks;
    for (unsigned m = 0; m < (1u << p); ++m) {
        const int size = std::popcount(m);
        if (size >= need && size <= most) masks.push_back(m);
    }

    std::vector<int> load(p, 0);
    std::vector<unsigned> chosen(n, 0);
    const auto place = [&](auto&& self, int client) -> bool {
        if (client == n) return true;
        for (const unsigned m : masks) {
            bool fits = true;
            for (int s = 0; s < p && fits; ++s) {
                if ((m >> s) & 1u) fits = !instance.exceeds_active_limit(load[s] + 1);
            }
            if (!fits) continue;
            for (int s = 0; s < p; ++s) load[s] += (m >> s) & 1u;
            chosen[client] = m;
            if (self(self, client + 1)) return true;
            for (int s = 0; s < p; ++s) load[s] -= (m >> s) & 1u;
        }
        return false;
    };
    if (!place(place, 0)) return std::nullopt;

    CandidateSchedule phi;
    for (int c = 0; c < n; ++c) {
        int task = 0;
        for (int s = 0; s < p; ++s) {
            if ((chosen[c] >> s) & 1u) phi.executions.push_back({s + 1, ClientId{c + 1}, c + 1, ++task});
        }
    }
    return phi;
}

CandidateSchedule schedule_to_candidate(const Schedule& schedule, const AvailabilityMatrix& truth,
                                        const Instance& instance) {
    instance.validate();
    std::vector<int> done(instance.clients, 0);
    CandidateSchedule phi;
    for (const auto& round : schedule.rounds) {
        for (const auto c : round.participants) {
            if (c.value < 1 || c.value > instance.clients) continue;
            if (!truth.grid.contains(c) || !truth.grid.contains(round.slot) || !truth.grid(round.slot, c)) {
                continue;
            }
            if (done[c.value - 1] >= instance.tasks_per_job) continue;
            phi.executions.push_back({round.slot.value, c, c.value, ++done[c.value - 1]});
        }
    }
    return phi;
}

std::vector<double> achieved_execution_fraction(const Instance& instance, const CandidateSchedule& phi) {
    std::vector<double> frac(instance.clients, 0.0);
    for (const auto& x : phi.executions) {
        if (x.job >= 1 && x.job <= instance.clients) frac[x.job - 1] += 1.0;
    }
    for (auto& f : frac) f /= instance.tasks_per_job;
    return frac;
}

namespace {

Fraction fraction_from_json(const nlohmann::json& v) {
    if (v.is_string()) return Fraction::parse(v.get<std::string>());
    if (v.is_number_integer()) return Fraction::make(v.get<std::int64_t>(), 1);
    if (v.is_number()) return Fraction::parse(v.dump());
    throw std::invalid_argument("instance: alpha/beta must be a string or number");
}

}  // namespace

Instance instance_from_json(std::string_view text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        Instance inst;
        inst.clients = doc.at("n").get<int>();
        inst.tasks_per_job = doc.at("K").get<int>();
        inst.alpha = fraction_from_json(doc.at("alpha"));
        inst.beta = fraction_from_json(doc.at("beta"));
        inst.deadline = doc.at("p").get<int>();
        inst.validate();
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("instance json: ") + e.what());
    }
}

CandidateSchedule candidate_from_json(std::string_view text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        CandidateSchedule phi;
        for (const auto& x : doc.at("executions")) {
            phi.executions.push_back({x.at("slot").get<int>(), ClientId{x.at("client").get<int>()},
                                      x.at("job").get<int>(), x.at("task").get<int>()});
        }
        return phi;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedSchedule(std::string("schedule json: ") + e.what());
    }
}

std::string candidate_to_json(const CandidateSchedule& phi) {
    nlohmann::json doc;
    auto& arr = doc["executions"] = nlohmann::json::array();
    for (const auto& x : phi.executions) {
        arr.push_back({{"slot", x.slot}, {"client", x.executor.value}, {"job", x.job}, {"task", x.task}});
    }
    return doc.dump(2);
}

std::string verdict_to_json(const Verdict& verdict) {
    nlohmann::json doc;
    doc["accepted"] = verdict.accepted;
    if (verdict.violation) {
        const auto& v = *verdict.violation;
        doc["condition"] = condition_name(v.condition);
        doc["slot"] = v.slot;
        doc["client"] = v.client;
        doc["detail"] = v.detail;
    }
    return doc.dump();
}

}  // namespace flsched::verifier
