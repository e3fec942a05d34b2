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

// flsched: command-line front end for trace generation, ingestion, prediction,
// eligibility, scheduling, simulation, verification and reporting.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "flsched/config.hpp"
#include "flsched/eligibility.hpp"
#include "flsched/heartbeat.hpp"
#include "flsched/matrix_io.hpp"
#include "flsched/pipeline.hpp"
#include "flsched/predictor.hpp"
#include "flsched/report.hpp"
#include "flsched/scheduler_gh.hpp"
#include "flsched/scheduler_lru.hpp"
#include "flsched/simulator.hpp"
#include "flsched/trace_gen.hpp"
#include "flsched/verifier.hpp"

namespace fs = std::filesystem;
using namespace flsched;

namespace {

constexpr int kExitReject = 1;
constexpr int kExitError = 2;

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path.string());
    out << text;
}

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    ScenarioConfig load() const { return load_config(config_path, overrides); }
};

ResponseTracker make_tracker(const ScenarioConfig& cfg, const std::string& responses, const std::string& profiles) {
    if (!responses.empty()) return ResponseTracker::load(responses);
    ResponseTracker tracker(cfg.initial_response_minutes, cfg.response_window);
    if (!profiles.empty() && cfg.profile_at_registration) {
        const auto p = load_profiles(profiles);
        for (std::size_t i = 0; i < p.size(); ++i) {
            tracker.record_response(ClientId{static_cast<int>(i) + 1}, p[i].response_minutes());
        }
    }
    return tracker;
}

std::vector<MetricsTable> load_tables(const std::vector<std::string>& files) {
    if (files.empty()) throw CLI::ValidationError("report", "at least one metrics file is required");
    std::vector<MetricsTable> out;
    for (const auto& f : files) out.push_back(load_metrics_csv(f));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flsched: availability-aware client scheduling for federated learning"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--config", common.config_path, "INI config file (defaults when omitted)");
    app.add_option("--set", common.overrides, "Override a config key, e.g. --set schedule.min_gap=3");

    int exit_code = 0;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate ground-truth traces and hardware profiles");
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--seed", gen_seed, "RNG seed")->required();
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->callback([&] {
        auto cfg = common.load();
        cfg.trace.seed = gen_seed;
        save_trace(gen_out, generate_trace(cfg.trace));
        std::cout << "wrote " << cfg.trace.num_days << " days and profiles.json to " << gen_out << '\n';
    });

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Build daily matrices from heartbeats");
    std::optional<std::uint64_t> ingest_seed;
    std::string ingest_trace, ingest_beats, ingest_out;
    int ingest_day = 1;
    ingest->add_option("--seed", ingest_seed, "RNG seed for heartbeat loss (required with --trace)");
    ingest->add_option("--trace", ingest_trace, "Trace directory: emit, thin and rebuild every day");
    ingest->add_option("--heartbeats", ingest_beats, "JSONL heartbeat file to ingest as one day");
    ingest->add_option("--day", ingest_day, "Day to build from --heartbeats");
    ingest->add_option("--out", ingest_out, "Output directory (--trace) or CSV file (--heartbeats)")->required();
    ingest->callback([&] {
        const auto cfg = common.load();
        if (ingest_trace.empty() == ingest_beats.empty()) {
            throw CLI::ValidationError("ingest", "give exactly one of --trace or --heartbeats");
        }
        if (!ingest_beats.empty()) {
            const auto result = build_daily_matrix(load_heartbeats(ingest_beats), cfg.ingest, ingest_day,
                                                   cfg.trace.num_clients);
            save_matrix(ingest_out, result.matrix.grid);
            std::cout << "accepted " << result.accepted << ", rejected " << result.rejected << '\n';
            return;
        }
        if (!ingest_seed) throw CLI::ValidationError("ingest", "--seed is required with --trace");
        const auto trace = load_trace(ingest_trace, cfg.trace.num_days, cfg.trace.slots_per_day(), cfg.trace.num_clients);
        std::size_t emitted = 0, kept = 0;
        for (const auto& truth : trace.days) {
            const auto all = emit_heartbeats_from_trace(truth, cfg.ingest.cadence, cfg.ingest.minutes_per_slot);
            auto rng = make_rng(*ingest_seed, "ingest.loss", static_cast<std::uint64_t>(truth.day));
            const auto beats = drop_heartbeats(all, cfg.ingest.loss_fraction, rng);
            emitted += all.size();
            kept += beats.size();
            save_heartbeats(fs::path(ingest_out) / ("hb_day_" + std::to_string(truth.day) + ".jsonl"), beats);
            const auto built = build_daily_matrix(beats, cfg.ingest, truth.day, cfg.trace.num_clients);
            save_matrix(fs::path(ingest_out) / matrix_file_name("", truth.day), built.matrix.grid);
        }
        const double loss = emitted == 0 ? 0.0 : 1.0 - static_cast<double>(kept) / static_cast<double>(emitted);
        std::cout << "heartbeats emitted " << emitted << ", delivered " << kept << ", observed loss " << loss << '\n';
    });

    // predict
    auto* predict = app.add_subcommand("predict", "Predict day D from days 1..D-1");
    std::string predict_history, predict_out, predict_choice, predict_truth;
    int predict_day = 2;
    predict->add_option("--history", predict_history, "Directory with day_<d>.csv")->required();
    predict->add_option("--day", predict_day, "Day to predict (>= 2)")->required();
    predict->add_option("--predictor", predict_choice, "persistence | oracle | external:<path>");
    predict->add_option("--truth", predict_truth, "Ground-truth directory (oracle only)");
    predict->add_option("--out", predict_out, "Output PA CSV")->required();
    predict->callback([&] {
        auto cfg = common.load();
        if (!predict_choice.empty()) cfg.predictor = PredictorChoice::parse(predict_choice);
        if (predict_day < 2) throw CLI::ValidationError("predict", "--day must be >= 2");
        const int slots = cfg.trace.slots_per_day();
        const int n = cfg.trace.num_clients;
        std::vector<AvailabilityMatrix> history;
        for (int d = 1; d < predict_day; ++d) {
            history.push_back(load_matrix(fs::path(predict_history) / matrix_file_name("", d), d, slots, n));
        }
        std::unique_ptr<AvailabilityPredictor> p;
        switch (cfg.predictor.kind) {
            case PredictorKind::kPersistence:
                p = std::make_unique<PersistencePredictor>(cfg.predictor.decay, cfg.predictor.max_history_days);
                break;
            case PredictorKind::kOracle:
                if (predict_truth.empty()) throw CLI::ValidationError("predict", "oracle needs --truth");
                p = std::make_unique<OraclePredictor>(
                    load_matrix(fs::path(predict_truth) / matrix_file_name("", predict_day), predict_day, slots, n));
                break;
            case PredictorKind::kExternal:
                p = std::make_unique<ExternalPredictor>(cfg.predictor.external_source);
                break;
        }
        p->fit(history);
        save_matrix(predict_out, p->predict_next_day().grid);
        std::cout << p->name() << " prediction for day " << predict_day << " written to " << predict_out << '\n';
    });

    // eligibility
    auto* elig = app.add_subcommand("eligibility", "Eligibility matrix from a PA matrix");
    std::string elig_pa, elig_out, elig_responses, elig_profiles;
    int elig_day = 2;
    elig->add_option("--pa", elig_pa, "Predicted availability CSV")->required();
    elig->add_option("--day", elig_day, "Day the PA matrix describes");
    elig->add_option("--responses", elig_responses, "Response history JSON");
    elig->add_option("--profiles", elig_profiles, "profiles.json, used as the registration probe");
    elig->add_option("--out", elig_out, "Output eligibility CSV")->required();
    elig->callback([&] {
        const auto cfg = common.load();
        const auto pa = load_matrix(elig_pa, elig_day, cfg.trace.slots_per_day(), cfg.trace.num_clients);
        const auto tracker = make_tracker(cfg, elig_responses, elig_profiles);
        const auto e = build_eligibility(pa, tracker, cfg.buffer_slots, cfg.trace.minutes_per_slot);
        save_matrix(elig_out, e.eligible);
        std::cout << e.eligible.count_ones() << " eligible cells written to " << elig_out << '\n';
    });

    // schedule
    auto* sched = app.add_subcommand("schedule", "Schedule one day from an eligibility matrix");
    std::string sched_elig, sched_out, sched_policy = "gh", sched_responses, sched_profiles, sched_cache;
    int sched_day = 2;
    sched->add_option("--eligibility", sched_elig, "Eligibility CSV")->required();
    sched->add_option("--day", sched_day, "Day being scheduled");
    sched->add_option("--policy", sched_policy, "gh | lru")->check(CLI::IsMember({"gh", "lru"}));
    sched->add_option("--responses", sched_responses, "Response history JSON");
    sched->add_option("--profiles", sched_profiles, "profiles.json, used as the registration probe");
    sched->add_option("--cache", sched_cache, "LRU cache JSON, read when present and rewritten");
    sched->add_option("--out", sched_out, "Output schedule JSON")->required();
    sched->callback([&] {
        const auto cfg = common.load();
        const int n = cfg.trace.num_clients;
        const auto e = eligibility_from_grid(
            sched_day, load_matrix(sched_elig, sched_day, cfg.trace.slots_per_day(), n).grid);
        const auto tracker = make_tracker(cfg, sched_responses, sched_profiles);
        Schedule s;
        if (sched_policy == "gh") {
            s = gh_schedule(e, cfg.schedule, tracker);
        } else {
            LruCache cache(n);
            if (!sched_cache.empty() && fs::exists(sched_cache)) {
                const auto doc = load_schedule(sched_cache);
                if (doc.cache_final) cache = LruCache(*doc.cache_final);
            }
            s = lru_schedule(e, cfg.schedule, tracker, cache);
            if (!sched_cache.empty()) save_schedule(sched_cache, s);
        }
        save_schedule(sched_out, s);
        std::cout << s.rounds.size() << " rounds scheduled, " << s.uncovered_unique.size()
                  << " unique clients uncovered\n";
    });

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run scenarios and write metrics");
    std::vector<std::uint64_t> sim_seeds;
    std::vector<std::string> sim_policies;
    std::string sim_out, sim_predictor;
    sim->add_option("--seed", sim_seeds, "RNG seed(s)")->required();
    sim->add_option("--policy", sim_policies, "gh, lru, random, capability (default: config run.policies)");
    sim->add_option("--predictor", sim_predictor, "persistence | oracle | external:<path>");
    sim->add_option("--out", sim_out, "Output directory (default: config run.out_dir)");
    sim->callback([&] {
        auto cfg = common.load();
        if (!sim_predictor.empty()) cfg.predictor = PredictorChoice::parse(sim_predictor);
        if (!sim_policies.empty()) {
            cfg.policies.clear();
            for (const auto& p : sim_policies) cfg.policies.push_back(parse_policy(p));
        }
        const fs::path out = sim_out.empty() ? cfg.out_dir : fs::path(sim_out);
        std::vector<MetricsTable> tables;
        for (const auto seed : sim_seeds) {
            auto tcfg = cfg.trace;
            tcfg.seed = seed;
            const auto trace = generate_trace(tcfg);
            const auto observed = observe_trace(trace, cfg.ingest, seed);
            for (const auto policy : cfg.policies) {
                const auto m = run_scenario(cfg, policy, seed, trace, observed);
                const auto file = out / metrics_file_name(policy, seed);
                spit(file, metrics_to_csv(m));
                tables.push_back(load_metrics_csv(file));
                std::cout << policy_name(policy) << " seed " << seed << ": completion " << m.mean_completion()
                          << ", dropout " << m.mean_dropout() << '\n';
            }
        }
        spit(out / "summary.json", summary_json(tables));
        spit(out / "config.ini", config_to_ini(cfg));
    });

    // verify
    auto* verify = app.add_subcommand("verify", "Check a candidate schedule against a decision instance");
    std::string verify_instance, verify_schedule;
    bool verify_brute = false;
    verify->add_option("--instance", verify_instance, "Instance JSON {n, K, alpha, beta, p}")->required();
    verify->add_option("--schedule", verify_schedule, "Candidate JSON {executions: [...]}");
    verify->add_flag("--brute-force", verify_brute, "Search for a feasible schedule instead (small instances)");
    verify->callback([&] {
        const auto inst = verifier::instance_from_json(slurp(verify_instance));
        if (verify_brute) {
            const auto found = verifier::brute_force_schedule(inst);
            if (found) {
                std::cout << verifier::candidate_to_json(*found) << '\n';
            } else {
                std::cout << "{\"feasible\": false}\n";
                exit_code = kExitReject;
            }
            return;
        }
        if (verify_schedule.empty()) throw CLI::ValidationError("verify", "--schedule is required");
        const auto verdict = verifier::verify(inst, verifier::candidate_from_json(slurp(verify_schedule)));
        std::cout << verifier::verdict_to_json(verdict) << '\n';
        if (!verdict.accepted) exit_code = kExitReject;
    });

    // report
    auto* report = app.add_subcommand("report", "Compare metrics files (24-round rolling mean +- std)");
    std::vector<std::string> report_files;
    std::string report_csv;
    int report_window = 24;
    report->add_option("files", report_files, "metrics_<policy>_<seed>.csv files");
    report->add_option("--csv", report_csv, "Also write the table as CSV");
    report->add_option("--window", report_window, "Rolling window in rounds")->check(CLI::PositiveNumber);
    report->callback([&] {
        const auto rep = compare_report(load_tables(report_files), report_window);
        std::cout << report_to_text(rep);
        if (!report_csv.empty()) spit(report_csv, report_to_csv(rep));
    });

    // plotdata
    auto* plot = app.add_subcommand("plotdata", "Tidy CSV of per-round metrics for external plotting");
    std::vector<std::string> plot_files;
    std::string plot_out;
    int plot_window = 24;
    plot->add_option("files", plot_files, "metrics_<policy>_<seed>.csv files");
    plot->add_option("--out", plot_out, "Output CSV (stdout when omitted)");
    plot->add_option("--window", plot_window, "Rolling window in rounds")->check(CLI::PositiveNumber);
    plot->callback([&] {
        const auto text = plot_data_csv(load_tables(plot_files), plot_window);
        if (plot_out.empty()) {
            std::cout << text;
        } else {
            spit(plot_out, text);
        }
    });

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Run every stage for the configured seeds and policies");
    std::vector<std::uint64_t> pipe_seeds;
    pipe->add_option("--seed", pipe_seeds, "Replace run.seeds");
    pipe->callback([&] {
        auto cfg = common.load();
        if (!pipe_seeds.empty()) cfg.seeds = pipe_seeds;
        const auto result = run_pipeline(cfg, [](const StageResult& s) {
            std::cout << (s.ran ? "ran    " : "cached ") << s.stage << "  " << s.output.string() << '\n';
        });
        std::cout << "summary: " << result.summary.string() << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        for (const auto& f : e.files()) std::cerr << "  file: " << f.string() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return exit_code;
}
