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

#include "flsched/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace flsched {
namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t begin = 0;
    while (true) {
        const auto comma = line.find(',', begin);
        fields.push_back(line.substr(begin, comma - begin));
        if (comma == std::string_view::npos) break;
        begin = comma + 1;
    }
    return fields;
}

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("matrix csv: bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const SlotGrid& grid) {
    out << "slot";
    for (int c = 1; c <= grid.clients(); ++c) out << ",c" << c;
    out << '\n';
    for (int s = 1; s <= grid.slots(); ++s) {
        out << s;
        for (int c = 1; c <= grid.clients(); ++c) {
            out << ',' << (grid(SlotIndex{s}, ClientId{c}) ? '1' : '0');
        }
        out << '\n';
    }
}

SlotGrid read_matrix_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("matrix csv: empty input");
    const auto header = split_commas(strip_cr(line));
    if (header.size() < 2 || header[0] != "slot") {
        throw FormatError("matrix csv: header must start with 'slot' and name at least one client");
    }
    const int clients = static_cast<int>(header.size()) - 1;
    for (int c = 1; c <= clients; ++c) {
        if (header[c] != "c" + std::to_string(c)) {
            throw FormatError("matrix csv: expected header column c" + std::to_string(c));
        }
    }

    std::vector<std::vector<std::uint8_t>> rows;
    while (std::getline(in, line)) {
        const auto body = strip_cr(line);
        if (body.empty()) continue;
        const auto fields = split_commas(body);
        if (static_cast<int>(fields.size()) != clients + 1) {
            throw FormatError("matrix csv: row " + std::to_string(rows.size() + 1) +
                              " has wrong column count");
        }
        if (parse_int(fields[0], "slot index") != static_cast<int>(rows.size()) + 1) {
            throw FormatError("matrix csv: slot rows must be numbered 1..S in order");
        }
        std::vector<std::uint8_t> row(clients);
        for (int c = 0; c < clients; ++c) {
            const int cell = parse_int(fields[c + 1], "cell");
            if (cell != 0 && cell != 1) throw FormatError("matrix csv: cells must be 0 or 1");
            row[c] = static_cast<std::uint8_t>(cell);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("matrix csv: no slot rows");

    SlotGrid grid(static_cast<int>(rows.size()), clients);
    for (int s = 1; s <= grid.slots(); ++s) {
        for (int c = 1; c <= clients; ++c) {
            grid.set(SlotIndex{s}, ClientId{c}, rows[s - 1][c - 1] != 0);
        }
    }
    return grid;
}

void save_matrix(const std::filesystem::path& path, const SlotGrid& grid) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    write_matrix_csv(out, grid);
}

AvailabilityMatrix load_matrix(const std::filesystem::path& path, int day, int expected_slots,
                               int expected_clients) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read matrix file " + path.string());
    SlotGrid grid;
    try {
        grid = read_matrix_csv(in);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    if ((expected_slots > 0 && grid.slots() != expected_slots) ||
        (expected_clients > 0 && grid.clients() != expected_clients)) {
        std::ostringstream msg;
        msg << path.string() << ": shape " << grid.slots() << "x" << grid.clients()
            << " does not match expected " << expected_slots << "x" << expected_clients;
        throw FormatError(msg.str());
    }
    return AvailabilityMatrix{day, std::move(grid)};
}

std::string matrix_file_name(std::string_view prefix, int day) {
    return std::string(prefix) + "day_" + std::to_string(day) + ".csv";
}

}  // namespace flsched
