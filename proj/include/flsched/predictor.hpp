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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flsched/availability.hpp"

namespace flsched {

/// Next-day availability forecaster. Fit once per day boundary, then predict; the
/// output is binary with the same shape as the history.
class AvailabilityPredictor {
  public:
    virtual ~AvailabilityPredictor() = default;

    virtual void fit(std::span<const AvailabilityMatrix> history) = 0;
    virtual PredictedAvailabilityMatrix predict_next_day() const = 0;
    virtual std::string name() const = 0;
};

/// Decay-weighted vote over past days: weight decay^age with age 0 for the most recent
/// day. A cell is 1 when the weighted frequency exceeds 0.5; an exact tie takes the
/// most recent day's value.
class PersistencePredictor final : public AvailabilityPredictor {
  public:
    explicit PersistencePredictor(double decay = 0.7, int max_history_days = 7);

    void fit(std::span<const AvailabilityMatrix> history) override;
    PredictedAvailabilityMatrix predict_next_day() const override;
    std::string name() const override { return "persistence"; }

  private:
    double decay_;
    int max_history_days_;
    std::vector<AvailabilityMatrix> history_;
};

/// Upper bound: returns the true next day it was handed.
class OraclePredictor final : public AvailabilityPredictor {
  public:
    explicit OraclePredictor(AvailabilityMatrix truth_next_day);

    void fit(std::span<const AvailabilityMatrix> history) override;
    PredictedAvailabilityMatrix predict_next_day() const override;
    std::string name() const override { return "oracle"; }

  private:
    AvailabilityMatrix truth_;
    std::optional<std::pair<int, int>> fitted_shape_;
};

/// Loads `pa_day_<d+1>.csv` written by an outside forecaster from a directory (or one
/// explicit file) and checks it against the history's shape.
class ExternalPredictor final : public AvailabilityPredictor {
  public:
    explicit ExternalPredictor(std::filesystem::path source);

    void fit(std::span<const AvailabilityMatrix> history) override;
    PredictedAvailabilityMatrix predict_next_day() const override;
    std::string name() const override { return "external"; }

  private:
    std::filesystem::path source_;
    std::optional<AvailabilityMatrix> loaded_;
};

/// One-shot helper for the baseline predictor.
PredictedAvailabilityMatrix persistence_predict(std::span<const AvailabilityMatrix> history,
                                                double decay = 0.7);

/// Per-client response-time history and the expected duration derived from it.
class ResponseTracker {
  public:
    explicit ResponseTracker(double initial_minutes = 10.0, int window = 0);

    /// Mean of recorded durations (last `window` only, when windowing is on), or the
    /// initial estimate for a client with no history.
    double expected_duration(ClientId client) const;

    /// Appends a strictly positive duration; throws std::invalid_argument otherwise.
    void record_response(ClientId client, double minutes);

    std::size_t samples(ClientId client) const;
    double initial_minutes() const { return initial_minutes_; }
    int window() const { return window_; }
    const std::map<int, std::vector<double>>& history() const { return history_; }

    void save(const std::filesystem::path& path) const;
    static ResponseTracker load(const std::filesystem::path& path);

  private:
    double initial_minutes_;
    int window_;
    std::map<int, std::vector<double>> history_;
};

}  // namespace flsched
