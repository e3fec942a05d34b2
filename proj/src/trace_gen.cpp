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

#include "flsched/trace_gen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "flsched/matrix_io.hpp"

namespace flsched {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("trace config: ") + what);
}

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

int hour_of(const SlotClock& clock, SlotIndex slot) { return clock.start_minute(slot) / 60; }

}  // namespace

int TraceConfig::blip_slots() const {
    return (blip_offline_minutes + minutes_per_slot - 1) / minutes_per_slot;
}

void TraceConfig::validate() const {
    require(num_clients >= 1, "num_clients must be >= 1");
    require(num_days >= 1, "num_days must be >= 1");
    const SlotClock clock(minutes_per_slot);
    require(block_minutes >= minutes_per_slot && block_minutes % minutes_per_slot == 0,
            "block_minutes must be a multiple of the slot width");
    require(in_unit(base_availability_prob), "base_availability_prob must be in [0,1]");
    require(night_factor >= 1.0, "night_factor must be >= 1");
    require(base_availability_prob * night_factor <= 1.0 + 1e-12,
            "base_availability_prob * night_factor must be <= 1");
    require(night_start_hour >= 0 && night_start_hour < 24 && night_end_hour >= 0 &&
                night_end_hour < 24,
            "night hours must be in [0,24)");
    require(in_unit(hourly_flip_prob), "hourly_flip_prob must be in [0,1]");
    require(blip_mean_per_day >= 0.0, "blip_mean_per_day must be >= 0");
    require(blip_online_seconds >= 0 && blip_offline_minutes >= 0, "blip durations must be >= 0");
    double total = 0.0;
    for (const double p : tier_probs) {
        require(p >= 0.0, "tier probabilities must be >= 0");
        total += p;
    }
    require(total > 0.0, "tier probabilities must not all be zero");
    for (const double m : tier_compute_minutes) require(m > 0.0, "tier compute minutes must be > 0");
    require(comm_median_minutes > 0.0 && comm_sigma >= 0.0, "bad communication distribution");
    require(min_profile_minutes > 0.0 && max_profile_minutes >= min_profile_minutes,
            "bad profile clamp range");
}

bool is_night_slot(const TraceConfig& cfg, SlotIndex slot) {
    const int hour = hour_of(SlotClock(cfg.minutes_per_slot), slot);
    if (cfg.night_start_hour <= cfg.night_end_hour) {
        return hour >= cfg.night_start_hour && hour < cfg.night_end_hour;
    }
    return hour >= cfg.night_start_hour || hour < cfg.night_end_hour;
}

AvailabilityMatrix generate_reference_day(const TraceConfig& cfg, Rng& rng) {
    cfg.validate();
    const int slots = cfg.slots_per_day();
    const int block = cfg.block_minutes / cfg.minutes_per_slot;
    const double night_p = std::min(1.0, cfg.base_availability_prob * cfg.night_factor);
    std::bernoulli_distribution day_draw(cfg.base_availability_prob);
    std::bernoulli_distribution night_draw(night_p);

    SlotGrid grid(slots, cfg.num_clients);
    for (int c = 1; c <= cfg.num_clients; ++c) {
        auto row = grid.client_row(ClientId{c});
        for (int first = 1; first <= slots; first += block) {
            const bool on = is_night_slot(cfg, SlotIndex{first}) ? night_draw(rng) : day_draw(rng);
            const int last = std::min(slots, first + block - 1);
            std::fill(row.begin() + (first - 1), row.begin() + last, on ? 1 : 0);
        }
    }
    return AvailabilityMatrix{1, std::move(grid)};
}

AvailabilityMatrix evolve_day(const AvailabilityMatrix& prev, const TraceConfig& cfg, Rng& rng) {
    const SlotClock clock(cfg.minutes_per_slot);
    if (prev.grid.slots() != clock.slots_per_day() || prev.grid.clients() != cfg.num_clients) {
        throw std::invalid_argument("evolve_day: previous day has the wrong shape");
    }
    std::bernoulli_distribution flip(cfg.hourly_flip_prob);
    AvailabilityMatrix next{prev.day + 1, prev.grid};
    for (int c = 1; c <= cfg.num_clients; ++c) {
        auto row = next.grid.client_row(ClientId{c});
        int s = 1;
        while (s <= clock.slots_per_day()) {
            const int hour = hour_of(clock, SlotIndex{s});
            int end = s;
            while (end <= clock.slots_per_day() && hour_of(clock, SlotIndex{end}) == hour) ++end;
            if (flip(rng)) {
                for (int k = s; k < end; ++k) row[k - 1] ^= 1;
            }
            s = end;
        }
    }
    return next;
}

void apply_blip(SlotGrid& grid, ClientId client, SlotIndex start, int length) {
    const int last = std::min(grid.slots(), start.value + length - 1);
    for (int s = start.value; s <= last; ++s) grid.set(SlotIndex{s}, client, false);
}

AvailabilityMatrix inject_blips(const AvailabilityMatrix& matrix, const TraceConfig& cfg, Rng& rng) {
    AvailabilityMatrix out = matrix;
    const int length = cfg.blip_slots();
    if (cfg.blip_mean_per_day <= 0.0 || length == 0) return out;

    std::poisson_distribution<int> count_draw(cfg.blip_mean_per_day);
    const int slots = out.grid.slots();
    std::vector<int> candidates;
    for (int c = 1; c <= out.grid.clients(); ++c) {
        const ClientId client{c};
        const int blips = count_draw(rng);
        for (int b = 0; b < blips; ++b) {
            // Online moments where the whole offline stretch fits inside the day.
            candidates.clear();
            const auto row = out.grid.client_row(client);
            for (int s = 1; s + length - 1 <= slots; ++s) {
                if (row[s - 1] != 0) candidates.push_back(s);
            }
            if (candidates.empty()) break;
            std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
            apply_blip(out.grid, client, SlotIndex{candidates[pick(rng)]}, length);
        }
    }
    return out;
}

std::vector<HardwareProfile> assign_profiles(const TraceConfig& cfg, Rng& rng) {
    cfg.validate();
    std::discrete_distribution<int> tier(cfg.tier_probs.begin(), cfg.tier_probs.end());
    std::lognormal_distribution<double> comm(std::log(cfg.comm_median_minutes), cfg.comm_sigma);
    const auto clamp = [&](double minutes) {
        return std::clamp(minutes, cfg.min_profile_minutes, cfg.max_profile_minutes);
    };

    std::vector<HardwareProfile> profiles(cfg.num_clients);
    for (auto& p : profiles) {
        p.compute_minutes = clamp(cfg.tier_compute_minutes[tier(rng)]);
        p.download_minutes = clamp(comm(rng));
        p.upload_minutes = clamp(comm(rng));
    }
    return profiles;
}

Trace generate_trace(const TraceConfig& cfg) {
    cfg.validate();
    Trace trace;
    auto pattern_rng = make_rng(cfg.seed, "trace.pattern");
    auto pattern = generate_reference_day(cfg, pattern_rng);
    for (int d = 1; d <= cfg.num_days; ++d) {
        if (d > 1) pattern = evolve_day(pattern, cfg, pattern_rng);
        auto blip_rng = make_rng(cfg.seed, "trace.blips", static_cast<std::uint64_t>(d));
        auto truth = inject_blips(pattern, cfg, blip_rng);
        truth.day = d;
        trace.days.push_back(std::move(truth));
    }
    auto profile_rng = make_rng(cfg.seed, "trace.profiles");
    trace.profiles = assign_profiles(cfg, profile_rng);
    return trace;
}

void save_profiles(const std::filesystem::path& path, const std::vector<HardwareProfile>& profiles) {
    nlohmann::json doc = nlohmann::json::object();
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        doc[std::to_string(i + 1)] = {{"compute_minutes", profiles[i].compute_minutes},
                                      {"upload_minutes", profiles[i].upload_minutes},
                                      {"download_minutes", profiles[i].download_minutes}};
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

std::vector<HardwareProfile> load_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read profiles file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    std::vector<HardwareProfile> profiles(doc.size());
    for (const auto& [key, value] : doc.items()) {
        const int id = std::stoi(key);
        if (id < 1 || id > static_cast<int>(profiles.size())) {
            throw FormatError(path.string() + ": client ids must be 1..N");
        }
        profiles[id - 1] = HardwareProfile{value.at("compute_minutes").get<double>(),
                                           value.at("upload_minutes").get<double>(),
                                           value.at("download_minutes").get<double>()};
    }
    return profiles;
}

}  // namespace flsched
