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

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flsched/config.hpp"
#include "flsched/trace_gen.hpp"

namespace flsched {

/// A stage failed; carries the stage name and the files involved.
class StageError : public std::runtime_error {
  public:
    StageError(std::string stage, const std::string& message, std::vector<std::filesystem::path> files = {});
    const std::string& stage() const { return stage_; }
    const std::vector<std::filesystem::path>& files() const { return files_; }

  private:
    std::string stage_;
    std::vector<std::filesystem::path> files_;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);
/// Digest over every regular file below `dir` (relative path and content), sorted by path.
std::string sha256_tree(const std::filesystem::path& dir);

/// Reads day_1..day_D and profiles.json written by the trace stage. A missing file is
/// reported against the trace_gen stage.
Trace load_trace(const std::filesystem::path& dir, int num_days, int slots, int num_clients);
void save_trace(const std::filesystem::path& dir, const Trace& trace);

/// Reads the observed day_<d>.csv matrices written by the ingest stage.
std::vector<AvailabilityMatrix> load_observed(const std::filesystem::path& dir, int num_days, int slots,
                                              int num_clients);

struct StageResult {
    std::string stage;  // e.g. "trace_gen[seed=3]"
    bool ran = false;   // false: stamp matched, outputs reused
    std::filesystem::path output;
};

struct PipelineResult {
    std::filesystem::path out_dir;
    std::vector<StageResult> stages;
    std::vector<std::filesystem::path> metrics_files;
    std::filesystem::path summary;
};

/// Runs trace_gen -> heartbeat_ingest -> (predict, eligibility, schedule, simulate) per
/// policy -> report for every configured seed. A stage whose input digest matches its
/// stamp and whose outputs are intact is skipped. Writes the resolved config.ini first.
PipelineResult run_pipeline(const ScenarioConfig& cfg, const std::function<void(const StageResult&)>& progress = {});

}  // namespace flsched
