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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "flsched/availability.hpp"

namespace flsched {

/// Thrown for unreadable or malformed artifact files.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Matrix CSV: header `slot,c1,...,cN`, then one row per slot `s,b1,...,bN` with cells in {0,1}.
void write_matrix_csv(std::ostream& out, const SlotGrid& grid);
SlotGrid read_matrix_csv(std::istream& in);

void save_matrix(const std::filesystem::path& path, const SlotGrid& grid);
/// Loads a matrix file; when `expected` dims are positive they must match.
AvailabilityMatrix load_matrix(const std::filesystem::path& path, int day,
                               int expected_slots = 0, int expected_clients = 0);

/// `<prefix>day_<d>.csv`, e.g. matrix_file_name("pa_", 8) == "pa_day_8.csv".
std::string matrix_file_name(std::string_view prefix, int day);

}  // namespace flsched
