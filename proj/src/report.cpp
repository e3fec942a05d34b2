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

#include "flsched/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "flsched/matrix_io.hpp"

namespace flsched {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(line);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw FormatError(where + ": not a number '" + s + "'");
    }
    return v;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

double r6(double v) { return std::round(v * 1e6) / 1e6; }

std::pair<double, double> day_range(const MetricsTable& t) {
    const auto days = t.column("day");
    if (days.empty()) return {0.0, 0.0};
    const auto [lo, hi] = std::minmax_element(days.begin(), days.end());
    return {*lo, *hi};
}

}  // namespace

std::vector<double> MetricsTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw FormatError(label + ": no column '" + name + "'");
    const auto idx = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[idx]);
    return out;
}

MetricsTable parse_metrics_csv(const std::string& text, const std::string& label) {
    MetricsTable t;
    t.label = label;
    // metrics_<policy>_<seed>; other names keep an empty policy.
    if (label.rfind("metrics_", 0) == 0) {
        const auto rest = label.substr(8);
        const auto us = rest.rfind('_');
        if (us != std::string::npos) {
            t.policy = rest.substr(0, us);
            t.seed = static_cast<std::uint64_t>(to_double(rest.substr(us + 1), label));
        }
    }
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw FormatError(label + ": empty metrics file");
    t.columns = split(line, ',');
    for (const char* required : {"round", "day", "completion_rate", "dropout_rate"}) {
        if (std::find(t.columns.begin(), t.columns.end(), required) == t.columns.end()) {
            throw FormatError(label + ": missing column '" + required + "'");
        }
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != t.columns.size()) {
            throw FormatError(label + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(t.columns.size()) + " cells");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(to_double(c, label + ":" + std::to_string(lineno)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

MetricsTable load_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read metrics file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_metrics_csv(buf.str(), path.stem().string());
}

const std::vector<std::string>& report_metrics() {
    static const std::vector<std::string> m = {"completion_rate", "successful_rate", "dropout_rate", "unique"};
    return m;
}

std::vector<double> rolling_mean(const std::vector<double>& values, int window) {
    if (window < 1) throw std::invalid_argument("rolling_mean: window must be >= 1");
    if (values.empty()) return {};
    const auto w = static_cast<std::size_t>(window);
    if (values.size() < w) {
        return {std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size())};
    }
    std::vector<double> out;
    double sum = std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(w), 0.0);
    out.push_back(sum / static_cast<double>(w));
    for (std::size_t i = w; i < values.size(); ++i) {
        sum += values[i] - values[i - w];
        out.push_back(sum / static_cast<double>(w));
    }
    return out;
}

MeanStd mean_std(const std::vector<double>& values) {
    if (values.empty()) return {};
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    return {mean, std::sqrt(var / n)};
}

ComparisonReport compare_report(const std::vector<MetricsTable>& inputs, int window) {
    if (inputs.empty()) throw std::invalid_argument("report: no metrics files given");
    const auto horizon = day_range(inputs.front());
    for (const auto& t : inputs) {
        if (day_range(t) != horizon) {
            throw std::invalid_argument("report: mismatched horizons (" + inputs.front().label + " vs " + t.label + ")");
        }
    }
    ComparisonReport rep;
    rep.metrics = report_metrics();
    std::map<std::string, int> seen;
    for (const auto& t : inputs) {
        const int k = ++seen[t.label];
        rep.labels.push_back(k == 1 ? t.label : t.label + "#" + std::to_string(k));
    }
    for (const auto& metric : rep.metrics) {
        std::vector<MeanStd> row;
        for (const auto& t : inputs) row.push_back(mean_std(rolling_mean(t.column(metric), window)));
        rep.cells.push_back(std::move(row));
    }
    return rep;
}

std::string report_to_text(const ComparisonReport& report) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header{"metric"};
    header.insert(header.end(), report.labels.begin(), report.labels.end());
    grid.push_back(header);
    for (std::size_t m = 0; m < report.metrics.size(); ++m) {
        std::vector<std::string> row{report.metrics[m]};
        for (const auto& cell : report.cells[m]) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.4f +- %.4f", cell.mean, cell.std);
            row.emplace_back(buf);
        }
        grid.push_back(std::move(row));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : grid) {
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::ostringstream out;
    for (const auto& row : grid) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "  " : "") << row[i] << std::string(width[i] - row[i].size(), ' ');
        }
        out << '\n';
    }
    return out.str();
}

std::string report_to_csv(const ComparisonReport& report) {
    std::ostringstream out;
    out << "metric,input,mean,std\n";
    for (std::size_t m = 0; m < report.metrics.size(); ++m) {
        for (std::size_t i = 0; i < report.labels.size(); ++i) {
            out << report.metrics[m] << ',' << report.labels[i] << ',' << fmt(report.cells[m][i].mean) << ','
                << fmt(report.cells[m][i].std) << '\n';
        }
    }
    return out.str();
}

std::string plot_data_csv(const std::vector<MetricsTable>& inputs, int window) {
    std::ostringstream out;
    out << "policy,seed,round,day,metric,value,rolling_mean\n";
    for (const auto& t : inputs) {
        const auto rounds = t.column("round");
        const auto days = t.column("day");
        for (const auto& metric : report_metrics()) {
            const auto values = t.column(metric);
            const auto w = static_cast<std::size_t>(window);
            double sum = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                sum += values[i];
                if (i >= w) sum -= values[i - w];
                const std::size_t span = std::min(i + 1, w);
                out << t.policy << ',' << t.seed << ',' << static_cast<long long>(rounds[i]) << ','
                    << static_cast<long long>(days[i]) << ',' << metric << ',' << fmt(values[i]) << ','
                    << fmt(sum / static_cast<double>(span)) << '\n';
            }
        }
    }
    return out.str();
}

std::string summary_json(const std::vector<MetricsTable>& inputs) {
    const auto mean_of = [](const std::vector<double>& v) {
        return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    const auto sum_of = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); };

    nlohmann::ordered_json doc;
    auto& runs = doc["runs"] = nlohmann::ordered_json::array();
    std::map<std::string, std::vector<nlohmann::ordered_json>> by_policy;
    for (const auto& t : inputs) {
        nlohmann::ordered_json run = {{"policy", t.policy},
                                      {"seed", t.seed},
                                      {"rounds", t.rows.size()},
                                      {"completion_rate", r6(mean_of(t.column("completion_rate")))},
                                      {"successful_rate", r6(mean_of(t.column("successful_rate")))},
                                      {"dropout_rate", r6(mean_of(t.column("dropout_rate")))},
                                      {"unique_mean", r6(mean_of(t.column("unique")))},
                                      {"used_minutes", r6(sum_of(t.column("used_minutes")))},
                                      {"lost_minutes", r6(sum_of(t.column("lost_minutes")))}};
        by_policy[t.policy].push_back(run);
        runs.push_back(std::move(run));
    }
    auto& policies = doc["policies"] = nlohmann::ordered_json::object();
    for (const auto& [name, list] : by_policy) {
        nlohmann::ordered_json p;
        p["seeds"] = list.size();
        for (const char* key : {"completion_rate", "successful_rate", "dropout_rate", "unique_mean"}) {
            std::vector<double> v;
            for (const auto& r : list) v.push_back(r[key].get<double>());
            const auto ms = mean_std(v);
            p[key] = {{"mean", r6(ms.mean)}, {"std", r6(ms.std)}};
        }
        policies[name] = std::move(p);
    }
    return doc.dump(2) + "\n";
}

}  // namespace flsched
