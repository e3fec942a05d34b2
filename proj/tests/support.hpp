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

// Generators and independent oracles shared by the unit tests and the acceptance
// runner. Oracles here are deliberately naive; they must not call the code they check.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "flsched/availability.hpp"

namespace flsched::testing {

using Gen = std::mt19937_64;

inline SlotGrid random_grid(Gen& g, int slots, int clients, double p_one) {
    std::bernoulli_distribution one(p_one);
    SlotGrid grid(slots, clients);
    for (int c = 1; c <= clients; ++c) {
        for (int s = 1; s <= slots; ++s) grid.set(SlotIndex{s}, ClientId{c}, one(g));
    }
    return grid;
}

/// Grid from rows of '0'/'1' characters, one string per slot, one character per client.
inline SlotGrid grid_from_rows(const std::vector<std::string>& rows) {
    SlotGrid grid(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (std::size_t s = 0; s < rows.size(); ++s) {
        for (std::size_t c = 0; c < rows[s].size(); ++c) {
            grid.set(SlotIndex{static_cast<int>(s) + 1}, ClientId{static_cast<int>(c) + 1}, rows[s][c] == '1');
        }
    }
    return grid;
}

/// Forward scan from `start`; no shared code with the library's reverse pass.
inline int naive_run(const SlotGrid& grid, int client, int start) {
    int run = 0;
    for (int s = start; s <= grid.slots(); ++s) {
        if (!grid(SlotIndex{s}, ClientId{client})) break;
        ++run;
    }
    return run;
}

/// Per-cell definition of eligibility: the next `need` predicted cells are all 1.
inline SlotGrid naive_eligibility(const SlotGrid& pa, const std::vector<int>& need_per_client) {
    SlotGrid out(pa.slots(), pa.clients());
    for (int c = 1; c <= pa.clients(); ++c) {
        const int need = need_per_client[c - 1];
        for (int s = 1; s <= pa.slots(); ++s) {
            bool ok = s + need - 1 <= pa.slots();
            for (int t = s; ok && t < s + need; ++t) ok = pa(SlotIndex{t}, ClientId{c});
            out.set(SlotIndex{s}, ClientId{c}, ok);
        }
    }
    return out;
}

class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("flsched_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

}  // namespace flsched::testing
