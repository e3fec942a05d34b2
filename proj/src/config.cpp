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

#include "flsched/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace flsched {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename T>
T parse_number(const std::string& key, std::string_view text) {
    const auto s = trim(text);
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("config: " + key + ": cannot parse '" + s + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
    const auto s = trim(text);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("config: " + key + ": expected true or false, got '" + s + "'");
}

std::string num(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

template <std::size_t N>
std::array<double, N> parse_array(const std::string& key, std::string_view text) {
    const auto items = split_list(text);
    if (items.size() != N) {
        throw std::invalid_argument("config: " + key + ": expected " + std::to_string(N) + " comma-separated values");
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = parse_number<double>(key, items[i]);
    return out;
}

template <std::size_t N>
std::string join(const std::array<double, N>& a) {
    std::string out;
    for (std::size_t i = 0; i < N; ++i) out += (i ? "," : "") + num(a[i]);
    return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& key, std::string_view text) {
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(text)) {
        if (const auto dash = item.find('-'); dash != std::string::npos && dash > 0) {
            const auto lo = parse_number<std::uint64_t>(key, item.substr(0, dash));
            const auto hi = parse_number<std::uint64_t>(key, item.substr(dash + 1));
            if (hi < lo || hi - lo > 100000) throw std::invalid_argument("config: " + key + ": bad range " + item);
            for (auto s = lo; s <= hi; ++s) out.push_back(s);
        } else {
            out.push_back(parse_number<std::uint64_t>(key, item));
        }
    }
    return out;
}

struct Field {
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, const std::string& key, const std::string& value)> set;
};

#define FLSCHED_INT(path, member)                                                                   \
    {path, Field{[](const ScenarioConfig& c) { return std::to_string(c.member); },                  \
                 [](ScenarioConfig& c, const std::string& k, const std::string& v) {                \
                     c.member = parse_number<int>(k, v);                                             \
                 }}}
#define FLSCHED_DOUBLE(path, member)                                                                \
    {path, Field{[](const ScenarioConfig& c) { return num(c.member); },                             \
                 [](ScenarioConfig& c, const std::string& k, const std::string& v) {                \
                     c.member = parse_number<double>(k, v);                                          \
                 }}}

// Ordered: this order is the canonical serialization order.
const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table = {
        FLSCHED_INT("trace.num_clients", trace.num_clients),
        FLSCHED_INT("trace.num_days", trace.num_days),
        {"trace.minutes_per_slot",
         Field{[](const ScenarioConfig& c) { return std::to_string(c.trace.minutes_per_slot); },
               [](ScenarioConfig& c, const std::string& k, const std::string& v) {
                   c.trace.minutes_per_slot = parse_number<int>(k, v);
                   c.ingest.minutes_per_slot = c.trace.minutes_per_slot;
               }}},
        FLSCHED_DOUBLE("trace.base_availability_prob", trace.base_availability_prob),
        FLSCHED_DOUBLE("trace.night_factor", trace.night_factor),
        FLSCHED_INT("trace.night_start_hour", trace.night_start_hour),
        FLSCHED_INT("trace.night_end_hour", trace.night_end_hour),
        FLSCHED_INT("trace.block_minutes", trace.block_minutes),
        FLSCHED_DOUBLE("trace.hourly_flip_prob", trace.hourly_flip_prob),
        FLSCHED_DOUBLE("trace.blip_mean_per_day", trace.blip_mean_per_day),
        FLSCHED_INT("trace.blip_online_seconds", trace.blip_online_seconds),
        FLSCHED_INT("trace.blip_offline_minutes", trace.blip_offline_minutes),
        {"trace.tier_probs",
         Field{[](const ScenarioConfig& c) { return join(c.trace.tier_probs); },
               [](ScenarioConfig& c, const std::string& k, const std::string& v) {
                   c.trace.tier_probs = parse_array<3>(k, v);
               }}},
        {"trace.tier_compute_minutes",
         Field{[](const ScenarioConfig& c) { return join(c.trace.tier_compute_minutes); },
               [](ScenarioConfig& c, const std::string& k, const std::string& v) {
                   c.trace.tier_compute_minutes = parse_array<3>(k, v);
               }}},
        FLSCHED_DOUBLE("trace.comm_median_minutes", trace.comm_median_minutes),
        FLSCHED_DOUBLE("trace.comm_sigma", trace.comm_sigma),
        FLSCHED_DOUBLE("trace.min_profile_minutes", trace.min_profile_minutes),
        FLSCHED_DOUBLE("trace.max_profile_minutes", trace.max_profile_minutes),
        FLSCHED_INT("ingest.validity_window", ingest.validity_window),
        FLSCHED_DOUBLE("ingest.loss_fraction", ingest.loss_fraction),
        FLSCHED_INT("ingest.cadence", ingest.cadence),
        FLSCHED_INT("schedule.rounds_per_day", schedule.rounds_per_day),
        FLSCHED_INT("schedule.min_gap", schedule.min_gap),
        FLSCHED_INT("schedule.min_clients", schedule.min_clients),
        {"schedule.unique_threshold",
         Field{[](const ScenarioConfig& c) {
                   return c.schedule.unique_threshold ? num(*c.schedule.unique_threshold) : std::string("auto");
               },
               [](ScenarioConfig& c, const std::string& k, const std::string& v) {
                   if (trim(v) == "auto") {
                       c.schedule.unique_threshold.reset();
                   } else {
                       c.schedule.unique_threshold = parse_number<double>(k, v);
                   }
               }}},
        FLSCHED_INT("schedule.max_relaxations", schedule.max_relaxations),
        {"schedule.selection_rate",
         Field{[](const ScenarioConfig& c) {
                   return c.schedule.selection_rate ? num(*c.schedule.selection_rate) : std::string("none");
               },
               [](ScenarioConfig& c, const std::string& k, const std::string& v) {
                   if (trim(v) == "none") {
                       c.schedule.selection_rate.reset();
                   } else {
                       c.schedule.selection_rate = parse_number<double>(k, v);
                   }
               }}},
        {"predictor.kind",
         Field{[](const ScenarioConfig& c) { return c.predictor.str(); },
               [](ScenarioConfig& c, const std::string&, const std::string& v) {
                   const auto parsed = PredictorChoice::parse(trim(v));
                   c.predictor.kind = parsed.kind;
                   c.predictor.external_source = parsed.external_source;
               }}},
        FLSCHED_DOUBLE("predictor.decay", predictor.decay),
        FLSCHED_INT("predictor.max_history_days", predictor.max_history_days),
        FLSCHED_DOUBLE("response.c_init", initial_response_minutes),
        FLSCHED_INT("response.window", response_window),
        FLSCHED_INT("response.buffer_slots", buffer_slots),
        {"response.profile_at_registration",
         Field{[](const ScenarioConfig& c) { return std::string(c.profile_at_registration ? "true" : "false"); },
               [](ScenarioConfig& c, const std::string& k, const std::string& v) {
                   c.profile_at_registration = parse_bool(k, v);
               }}},
        FLSCHED_DOUBLE("baseline.capability_deadline_minutes", capability_deadline_minutes),
        FLSCHED_INT("baseline.capability_pool_factor", capability_pool_factor),
        FLSCHED_INT("metrics.unique_lookback", unique_lookback),
        {"run.policies",
         Field{[](const ScenarioConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.policies.size(); ++i) {
                       out += (i ? "," : "") + std::string(policy_name(c.policies[i]));
                   }
                   return out;
               },
               [](ScenarioConfig& c, const std::string&, const std::string& v) {
                   c.policies.clear();
                   for (const auto& item : split_list(v)) c.policies.push_back(parse_policy(item));
               }}},
        {"run.seeds",
         Field{[](const ScenarioConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.seeds.size(); ++i) out += (i ? "," : "") + std::to_string(c.seeds[i]);
                   return out;
               },
               [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.seeds = parse_seeds(k, v); }}},
        {"run.out_dir",
         Field{[](const ScenarioConfig& c) { return c.out_dir.string(); },
               [](ScenarioConfig& c, const std::string&, const std::string& v) { c.out_dir = trim(v); }}},
    };
    return table;
}

#undef FLSCHED_INT
#undef FLSCHED_DOUBLE

const Field& field(const std::string& key) {
    for (const auto& [k, f] : fields()) {
        if (k == key) return f;
    }
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace

ScenarioConfig parse_config(std::string_view ini_text, const std::vector<std::string>& overrides) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(ini_text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }

    // Flatten to ordered "section.key" -> value; overrides replace file values.
    std::map<std::string, std::string> values;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw std::invalid_argument("config: key '" + section + "' outside any section");
        for (const auto& [key, leaf] : body) values[section + "." + key] = leaf.get_value<std::string>();
    }
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument("config: override '" + item + "' must look like section.key=value");
        }
        values[trim(item.substr(0, eq))] = item.substr(eq + 1);
    }

    ScenarioConfig cfg;
    // Apply in canonical order so dependent keys (minutes_per_slot) land predictably.
    for (const auto& [key, f] : fields()) {
        if (const auto it = values.find(key); it != values.end()) f.set(cfg, key, it->second);
    }
    for (const auto& [key, value] : values) field(key);  // rejects unknown keys
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::string text;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("config: cannot read " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    auto all = overrides;
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
        all.push_back(std::string("run.out_dir=") + env);
    }
    return parse_config(text, all);
}

std::string config_to_ini(const ScenarioConfig& cfg) {
    std::ostringstream out;
    std::string section;
    for (const auto& [key, f] : fields()) {
        const auto dot = key.find('.');
        const auto sec = key.substr(0, dot);
        if (sec != section) {
            out << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
            section = sec;
        }
        out << key.substr(dot + 1) << " = " << f.get(cfg) << '\n';
    }
    return out.str();
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, f] : fields()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace flsched
