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
#include <string>
#include <vector>

namespace flsched {

/// One metrics_<policy>_<seed>.csv, parsed back.
struct MetricsTable {
    std::string label;  // file stem, e.g. metrics_gh_3
    std::string policy;
    std::uint64_t seed = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(const std::string& name) const;
};

MetricsTable parse_metrics_csv(const std::string& text, const std::string& label);
MetricsTable load_metrics_csv(const std::filesystem::path& path);

/// Metrics the comparison reports, in order.
const std::vector<std::string>& report_metrics();

/// Trailing means over `window` consecutive values; a series shorter than the window
/// yields its single overall mean. Empty input gives an empty result.
std::vector<double> rolling_mean(const std::vector<double>& values, int window);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
};
MeanStd mean_std(const std::vector<double>& values);

struct ComparisonReport {
    std::vector<std::string> labels;  // one column per input
    std::vector<std::string> metrics;
    std::vector<std::vector<MeanStd>> cells;  // [metric][input]
};

/// Mean +- std of each metric's 24-round rolling mean, one column per input. Throws
/// std::invalid_argument on an empty list and when inputs cover different day ranges.
ComparisonReport compare_report(const std::vector<MetricsTable>& inputs, int window = 24);
std::string report_to_text(const ComparisonReport& report);
std::string report_to_csv(const ComparisonReport& report);

/// Tidy long-format rows: policy,seed,round,day,metric,value,rolling_mean.
std::string plot_data_csv(const std::vector<MetricsTable>& inputs, int window = 24);

/// summary.json from metrics tables: per run means and per policy means across seeds.
std::string summary_json(const std::vector<MetricsTable>& inputs);

}  // namespace flsched
