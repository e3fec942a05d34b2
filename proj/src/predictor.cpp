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

#include "flsched/predictor.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "flsched/matrix_io.hpp"

namespace flsched {
namespace {

void require_uniform_shape(std::span<const AvailabilityMatrix> history) {
    if (history.empty()) throw std::invalid_argument("predictor: history must not be empty");
    for (const auto& day : history) {
        if (day.grid.slots() != history.front().grid.slots() ||
            day.grid.clients() != history.front().grid.clients()) {
            throw std::invalid_argument("predictor: every history day must share one shape");
        }
    }
}

}  // namespace

PersistencePredictor::PersistencePredictor(double decay, int max_history_days)
    : decay_(decay), max_history_days_(max_history_days) {
    if (!(decay > 0.0 && decay <= 1.0)) throw std::invalid_argument("persistence: decay must be in (0,1]");
    if (max_history_days < 1) throw std::invalid_argument("persistence: history window must be >= 1");
}

void PersistencePredictor::fit(std::span<const AvailabilityMatrix> history) {
    require_uniform_shape(history);
    const auto keep = std::min<std::size_t>(history.size(), static_cast<std::size_t>(max_history_days_));
    history_.assign(history.end() - static_cast<std::ptrdiff_t>(keep), history.end());
}

PredictedAvailabilityMatrix PersistencePredictor::predict_next_day() const {
    if (history_.empty()) throw std::logic_error("persistence: predict before fit");
    return persistence_predict(history_, decay_);
}

PredictedAvailabilityMatrix persistence_predict(std::span<const AvailabilityMatrix> history,
                                                double decay) {
    require_uniform_shape(history);
    const auto& latest = history.back();
    const int slots = latest.grid.slots();
    const int clients = latest.grid.clients();

    // weights[k] belongs to history[k]; the most recent day has weight 1.
    std::vector<double> weights(history.size());
    double w = 1.0;
    for (std::size_t k = history.size(); k-- > 0;) {
        weights[k] = w;
        w *= decay;
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    constexpr double kTieTolerance = 1e-12;

    PredictedAvailabilityMatrix out{latest.day + 1, SlotGrid(slots, clients)};
    for (int c = 1; c <= clients; ++c) {
        const ClientId client{c};
        auto row = out.grid.client_row(client);
        for (int s = 0; s < slots; ++s) {
            double on = 0.0;
            for (std::size_t k = 0; k < history.size(); ++k) {
                if (history[k].grid.client_row(client)[s] != 0) on += weights[k];
            }
            const double freq = on / total;
            if (std::abs(freq - 0.5) <= kTieTolerance) {
                row[s] = latest.grid.client_row(client)[s];
            } else {
                row[s] = freq > 0.5 ? 1 : 0;
            }
        }
    }
    return out;
}

OraclePredictor::OraclePredictor(AvailabilityMatrix truth_next_day) : truth_(std::move(truth_next_day)) {}

void OraclePredictor::fit(std::span<const AvailabilityMatrix> history) {
    if (history.empty()) {
        fitted_shape_ = std::pair{truth_.grid.slots(), truth_.grid.clients()};
        return;
    }
    require_uniform_shape(history);
    const auto& g = history.back().grid;
    if (g.slots() != truth_.grid.slots() || g.clients() != truth_.grid.clients()) {
        throw std::invalid_argument("oracle: truth shape differs from history");
    }
    fitted_shape_ = std::pair{g.slots(), g.clients()};
}

PredictedAvailabilityMatrix OraclePredictor::predict_next_day() const {
    if (!fitted_shape_) throw std::logic_error("oracle: predict before fit");
    return truth_;
}

ExternalPredictor::ExternalPredictor(std::filesystem::path source) : source_(std::move(source)) {}

void ExternalPredictor::fit(std::span<const AvailabilityMatrix> history) {
    require_uniform_shape(history);
    const auto& latest = history.back();
    const int next_day = latest.day + 1;
    const auto file = std::filesystem::is_directory(source_)
                          ? source_ / matrix_file_name("pa_", next_day)
                          : source_;
    loaded_ = load_matrix(file, next_day, latest.grid.slots(), latest.grid.clients());
}

PredictedAvailabilityMatrix ExternalPredictor::predict_next_day() const {
    if (!loaded_) throw std::logic_error("external predictor: predict before fit");
    return *loaded_;
}

ResponseTracker::ResponseTracker(double initial_minutes, int window)
    : initial_minutes_(initial_minutes), window_(window) {
    if (!(initial_minutes > 0.0)) throw std::invalid_argument("response tracker: C_init must be > 0");
    if (window < 0) throw std::invalid_argument("response tracker: window must be >= 0");
}

double ResponseTracker::expected_duration(ClientId client) const {
    const auto it = history_.find(client.value);
    if (it == history_.end() || it->second.empty()) return initial_minutes_;
    const auto& samples = it->second;
    const std::size_t n = window_ > 0 ? std::min<std::size_t>(samples.size(), window_) : samples.size();
    const double sum = std::accumulate(samples.end() - static_cast<std::ptrdiff_t>(n), samples.end(), 0.0);
    return sum / static_cast<double>(n);
}

void ResponseTracker::record_response(ClientId client, double minutes) {
    if (!(minutes > 0.0) || !std::isfinite(minutes)) {
        throw std::invalid_argument("response tracker: durations must be positive and finite");
    }
    history_[client.value].push_back(minutes);
}

std::size_t ResponseTracker::samples(ClientId client) const {
    const auto it = history_.find(client.value);
    return it == history_.end() ? 0 : it->second.size();
}

void ResponseTracker::save(const std::filesystem::path& path) const {
    nlohmann::json doc;
    doc["c_init"] = initial_minutes_;
    doc["window"] = window_;
    auto& hist = doc["history"] = nlohmann::json::object();
    for (const auto& [client, samples] : history_) hist[std::to_string(client)] = samples;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

ResponseTracker ResponseTracker::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read response file " + path.string());
    try {
        const auto doc = nlohmann::json::parse(in);
        ResponseTracker tracker(doc.value("c_init", 10.0), doc.value("window", 0));
        if (doc.contains("history")) {
            for (const auto& [key, samples] : doc.at("history").items()) {
                for (const double m : samples) tracker.record_response(ClientId{std::stoi(key)}, m);
            }
        }
        return tracker;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace flsched
