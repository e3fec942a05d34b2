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

#include "flsched/heartbeat.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "flsched/matrix_io.hpp"

namespace flsched {

int IngestConfig::window_for(ClientId client) const {
    const auto idx = static_cast<std::size_t>(client.value - 1);
    return idx < per_client_window.size() ? per_client_window[idx] : validity_window;
}

void IngestConfig::validate(int num_clients) const {
    const SlotClock clock(minutes_per_slot);
    if (validity_window < 1) throw std::invalid_argument("ingest config: validity_window must be >= 1");
    if (!per_client_window.empty() && static_cast<int>(per_client_window.size()) != num_clients) {
        throw std::invalid_argument("ingest config: per-client windows must cover every client");
    }
    for (const int w : per_client_window) {
        if (w < 1) throw std::invalid_argument("ingest config: every validity window must be >= 1");
    }
    if (!(loss_fraction >= 0.0 && loss_fraction < 1.0)) {
        throw std::invalid_argument("ingest config: loss_fraction must be in [0,1)");
    }
    if (cadence < 1) throw std::invalid_argument("ingest config: cadence must be >= 1");
}

IngestResult build_daily_matrix(const HeartbeatStream& beats, const IngestConfig& cfg, int day,
                                int num_clients) {
    cfg.validate(num_clients);
    const SlotClock clock(cfg.minutes_per_slot);
    const int slots = clock.slots_per_day();

    struct Placed {
        int client;
        int slot;
        double minute;
        bool available;
    };
    std::vector<Placed> placed;
    placed.reserve(beats.size());
    IngestResult result{AvailabilityMatrix{day, SlotGrid(slots, num_clients)}, 0, 0};
    for (const auto& hb : beats) {
        if (hb.day != day || hb.client.value < 1 || hb.client.value > num_clients ||
            !(hb.minute_of_day > 0.0 && hb.minute_of_day <= kMinutesPerDay)) {
            ++result.rejected;
            continue;
        }
        placed.push_back({hb.client.value, slot_of_timestamp(hb.minute_of_day, clock.minutes_per_slot()).value,
                          hb.minute_of_day, hb.available});
    }
    result.accepted = placed.size();

    std::stable_sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) {
        if (a.client != b.client) return a.client < b.client;
        if (a.slot != b.slot) return a.slot < b.slot;
        return a.minute < b.minute;
    });

    for (std::size_t i = 0; i < placed.size(); ++i) {
        const auto& hb = placed[i];
        const bool has_next = i + 1 < placed.size() && placed[i + 1].client == hb.client;
        if (has_next && placed[i + 1].slot == hb.slot) continue;  // superseded in-slot
        int last = std::min(hb.slot + cfg.window_for(ClientId{hb.client}), slots);
        if (has_next) last = std::min(last, placed[i + 1].slot - 1);
        auto row = result.matrix.grid.client_row(ClientId{hb.client});
        std::fill(row.begin() + (hb.slot - 1), row.begin() + last, hb.available ? 1 : 0);
    }
    return result;
}

HeartbeatStream drop_heartbeats(const HeartbeatStream& beats, double loss_fraction, Rng& rng) {
    if (!(loss_fraction >= 0.0 && loss_fraction < 1.0)) {
        throw std::invalid_argument("drop_heartbeats: loss fraction must be in [0,1)");
    }
    std::bernoulli_distribution lost(loss_fraction);
    HeartbeatStream kept;
    kept.reserve(beats.size());
    for (const auto& hb : beats) {
        if (!lost(rng)) kept.push_back(hb);
    }
    return kept;
}

HeartbeatStream emit_heartbeats_from_trace(const AvailabilityMatrix& truth, int cadence,
                                           int minutes_per_slot) {
    if (cadence < 1) throw std::invalid_argument("emit_heartbeats_from_trace: cadence must be >= 1");
    const SlotClock clock(minutes_per_slot);
    const auto& grid = truth.grid;
    if (grid.slots() != clock.slots_per_day()) {
        throw std::invalid_argument("emit_heartbeats_from_trace: matrix does not match slot width");
    }
    HeartbeatStream beats;
    for (int s = 1; s <= grid.slots(); ++s) {
        for (int c = 1; c <= grid.clients(); ++c) {
            const bool now = grid(SlotIndex{s}, ClientId{c});
            const bool periodic = (s - 1) % cadence == 0;
            const bool changed = s > 1 && now != grid(SlotIndex{s - 1}, ClientId{c});
            if (periodic || changed) {
                beats.push_back(Heartbeat{truth.day, ClientId{c},
                                          static_cast<double>(s * minutes_per_slot), now});
            }
        }
    }
    return beats;
}

void write_heartbeats_jsonl(std::ostream& out, const HeartbeatStream& beats) {
    for (const auto& hb : beats) {
        const nlohmann::json line = {{"day", hb.day},
                                     {"client", hb.client.value},
                                     {"t_min", hb.minute_of_day},
                                     {"status", hb.available ? 1 : 0}};
        out << line.dump() << '\n';
    }
}

HeartbeatStream read_heartbeats_jsonl(std::istream& in) {
    HeartbeatStream beats;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto obj = nlohmann::json::parse(line);
            const int status = obj.at("status").get<int>();
            if (status != 0 && status != 1) throw FormatError("status must be 0 or 1");
            beats.push_back(Heartbeat{obj.at("day").get<int>(), ClientId{obj.at("client").get<int>()},
                                      obj.at("t_min").get<double>(), status == 1});
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("heartbeat line " + std::to_string(line_no) + ": " + e.what());
        } catch (const FormatError& e) {
            throw FormatError("heartbeat line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return beats;
}

void save_heartbeats(const std::filesystem::path& path, const HeartbeatStream& beats) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    write_heartbeats_jsonl(out, beats);
}

HeartbeatStream load_heartbeats(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read heartbeat file " + path.string());
    return read_heartbeats_jsonl(in);
}

}  // namespace flsched
