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

#include "flsched/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "flsched/heartbeat.hpp"
#include "flsched/matrix_io.hpp"
#include "flsched/report.hpp"
#include "flsched/simulator.hpp"

namespace flsched {
namespace fs = std::filesystem;

StageError::StageError(std::string stage, const std::string& message, std::vector<fs::path> files)
    : std::runtime_error("stage " + stage + ": " + message), stage_(std::move(stage)), files_(std::move(files)) {}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Writes only when the bytes differ, so reruns leave timestamps alone.
void write_if_changed(const fs::path& path, const std::string& content) {
    if (fs::exists(path) && read_file(path) == content) return;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out << content;
}

}  // namespace

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

std::string sha256_tree(const fs::path& dir) {
    if (!fs::is_directory(dir)) return sha256_hex("");
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::string manifest;
    for (const auto& f : files) {
        manifest += fs::relative(f, dir).generic_string() + ' ' + sha256_file(f) + '\n';
    }
    return sha256_hex(manifest);
}

void save_trace(const fs::path& dir, const Trace& trace) {
    for (const auto& day : trace.days) save_matrix(dir / matrix_file_name("", day.day), day.grid);
    save_profiles(dir / "profiles.json", trace.profiles);
}

Trace load_trace(const fs::path& dir, int num_days, int slots, int num_clients) {
    Trace trace;
    const auto profiles = dir / "profiles.json";
    if (!fs::exists(profiles)) {
        throw StageError("trace_gen", "missing profiles file " + profiles.string() + " (run `flsched gen` first)",
                         {profiles});
    }
    for (int d = 1; d <= num_days; ++d) {
        const auto file = dir / matrix_file_name("", d);
        if (!fs::exists(file)) throw StageError("trace_gen", "missing trace matrix " + file.string(), {file});
        trace.days.push_back(load_matrix(file, d, slots, num_clients));
    }
    trace.profiles = load_profiles(profiles);
    if (static_cast<int>(trace.profiles.size()) != num_clients) {
        throw StageError("trace_gen", "profiles.json has " + std::to_string(trace.profiles.size()) +
                                          " clients, expected " + std::to_string(num_clients), {profiles});
    }
    return trace;
}

std::vector<AvailabilityMatrix> load_observed(const fs::path& dir, int num_days, int slots, int num_clients) {
    std::vector<AvailabilityMatrix> out;
    for (int d = 1; d <= num_days; ++d) {
        const auto file = dir / matrix_file_name("", d);
        if (!fs::exists(file)) throw StageError("heartbeat_ingest", "missing observed matrix " + file.string(), {file});
        out.push_back(load_matrix(file, d, slots, num_clients));
    }
    return out;
}

namespace {

// Config keys that feed each stage; a stamp covers exactly these plus upstream digests.
std::string config_subset(const ScenarioConfig& cfg, std::initializer_list<std::string_view> sections) {
    std::istringstream in(config_to_ini(cfg));
    std::string line;
    std::string section;
    std::string out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() == '[') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        if (std::find(sections.begin(), sections.end(), section) != sections.end()) {
            out += section + "." + line + "\n";
        }
    }
    return out;
}

struct Stamp {
    fs::path file;
    std::string key;
    fs::path output;

    bool fresh() const {
        if (!fs::exists(file) || !fs::exists(output)) return false;
        std::istringstream in(read_file(file));
        std::string stored_key;
        std::string stored_output;
        std::getline(in, stored_key);
        std::getline(in, stored_output);
        return stored_key == key && stored_output == sha256_tree(output);
    }
    void commit() const { write_if_changed(file, key + "\n" + sha256_tree(output) + "\n"); }
};

}  // namespace

PipelineResult run_pipeline(const ScenarioConfig& cfg, const std::function<void(const StageResult&)>& progress) {
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw StageError("config", e.what());
    }
    PipelineResult result;
    result.out_dir = cfg.out_dir;
    const fs::path out = cfg.out_dir;
    fs::create_directories(out);
    write_if_changed(out / "config.ini", config_to_ini(cfg));

    const int days = cfg.trace.num_days;
    const int n = cfg.trace.num_clients;
    const int slots = cfg.trace.slots_per_day();
    const auto stamps = out / ".stamps";

    const auto report = [&](std::string stage, bool ran, fs::path output) {
        result.stages.push_back({std::move(stage), ran, std::move(output)});
        if (progress) progress(result.stages.back());
    };

    for (const auto seed : cfg.seeds) {
        const auto seed_tag = "[seed=" + std::to_string(seed) + "]";
        const auto seed_dir = out / ("seed_" + std::to_string(seed));

        // trace_gen
        const auto trace_dir = seed_dir / "trace";
        const Stamp trace_stamp{stamps / ("trace_gen_" + std::to_string(seed)),
                                sha256_hex("trace_gen\n" + std::to_string(seed) + "\n" + config_subset(cfg, {"trace"})),
                                trace_dir};
        const bool trace_ran = !trace_stamp.fresh();
        if (trace_ran) {
            try {
                auto tcfg = cfg.trace;
                tcfg.seed = seed;
                fs::remove_all(trace_dir);
                save_trace(trace_dir, generate_trace(tcfg));
            } catch (const StageError&) {
                throw;
            } catch (const std::exception& e) {
                throw StageError("trace_gen", e.what(), {trace_dir});
            }
            trace_stamp.commit();
        }
        report("trace_gen" + seed_tag, trace_ran, trace_dir);
        const auto trace = load_trace(trace_dir, days, slots, n);
        const auto trace_digest = sha256_tree(trace_dir);

        // heartbeat_ingest: emit beats from the truth, apply loss, rebuild observed days.
        const auto ingest_dir = seed_dir / "observed";
        const auto beats_dir = seed_dir / "heartbeats";
        const Stamp ingest_stamp{stamps / ("heartbeat_ingest_" + std::to_string(seed)),
                                 sha256_hex("heartbeat_ingest\n" + std::to_string(seed) + "\n" + trace_digest + "\n" +
                                            config_subset(cfg, {"ingest"})),
                                 ingest_dir};
        const bool ingest_ran = !ingest_stamp.fresh();
        if (ingest_ran) {
            try {
                fs::remove_all(ingest_dir);
                fs::remove_all(beats_dir);
                for (const auto& truth : trace.days) {
                    auto beats = emit_heartbeats_from_trace(truth, cfg.ingest.cadence, cfg.ingest.minutes_per_slot);
                    if (cfg.ingest.loss_fraction > 0.0) {
                        auto rng = make_rng(seed, "ingest.loss", static_cast<std::uint64_t>(truth.day));
                        beats = drop_heartbeats(beats, cfg.ingest.loss_fraction, rng);
                    }
                    save_heartbeats(beats_dir / ("hb_day_" + std::to_string(truth.day) + ".jsonl"), beats);
                    const auto built = build_daily_matrix(beats, cfg.ingest, truth.day, n);
                    save_matrix(ingest_dir / matrix_file_name("", truth.day), built.matrix.grid);
                }
            } catch (const std::exception& e) {
                throw StageError("heartbeat_ingest", e.what(), {beats_dir, ingest_dir});
            }
            ingest_stamp.commit();
        }
        report("heartbeat_ingest" + seed_tag, ingest_ran, ingest_dir);
        const auto observed = load_observed(ingest_dir, days, slots, n);
        const auto observed_digest = sha256_tree(ingest_dir);

        // simulate, one stage per policy; gh/lru also keep per-day predictions,
        // eligibility and schedules.
        std::string external_digest;
        if (cfg.predictor.kind == PredictorKind::kExternal) {
            const auto& src = cfg.predictor.external_source;
            external_digest = fs::is_directory(src) ? sha256_tree(src) : fs::exists(src) ? sha256_file(src) : "";
        }
        for (const auto policy : cfg.policies) {
            const std::string name(policy_name(policy));
            const auto policy_dir = seed_dir / name;
            const auto metrics_file = out / "metrics" / metrics_file_name(policy, seed);
            const Stamp sim_stamp{
                stamps / ("simulate_" + name + "_" + std::to_string(seed)),
                sha256_hex("simulate\n" + name + "\n" + std::to_string(seed) + "\n" + trace_digest + "\n" +
                           observed_digest + "\n" + external_digest + "\n" +
                           config_subset(cfg, {"trace", "ingest", "schedule", "predictor", "response", "baseline",
                                               "metrics"})),
                policy_dir};
            const bool sim_ran = !sim_stamp.fresh() || !fs::exists(metrics_file);
            if (sim_ran) {
                try {
                    fs::remove_all(policy_dir);
                    fs::create_directories(policy_dir);
                    const DayObserver keep = [&](const DayArtifacts& a) {
                        const int d = a.schedule.day;
                        save_matrix(policy_dir / matrix_file_name("pa_", d), a.predicted.grid);
                        save_matrix(policy_dir / matrix_file_name("eligibility_", d), a.eligibility.eligible);
                        save_schedule(policy_dir / ("schedule_day_" + std::to_string(d) + ".json"), a.schedule);
                    };
                    const auto metrics = run_scenario(cfg, policy, seed, trace, observed, keep);
                    write_if_changed(policy_dir / metrics_file_name(policy, seed), metrics_to_csv(metrics));
                    write_if_changed(metrics_file, metrics_to_csv(metrics));
                } catch (const std::exception& e) {
                    throw StageError("simulate:" + name, e.what(), {policy_dir});
                }
                sim_stamp.commit();
            }
            report("simulate:" + name + seed_tag, sim_ran, metrics_file);
            result.metrics_files.push_back(metrics_file);
        }
    }

    // report: summary over every metrics file of this configuration.
    std::vector<MetricsTable> tables;
    for (const auto& f : result.metrics_files) tables.push_back(load_metrics_csv(f));
    result.summary = out / "summary.json";
    const auto summary = summary_json(tables);
    const bool summary_ran = !fs::exists(result.summary) || read_file(result.summary) != summary;
    write_if_changed(result.summary, summary);
    report("report", summary_ran, result.summary);
    return result;
}

}  // namespace flsched
