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
#include <string>
#include <string_view>
#include <vector>

#include "flsched/simulator.hpp"

namespace flsched {

/// Environment variable that may replace run.out_dir; nothing else reads the environment.
inline constexpr const char* kOutDirEnv = "FLSCHED_OUT_DIR";

/// Parses INI text with flat `section.key` paths. Unknown sections or keys are errors,
/// so typos cannot silently fall back to defaults. `overrides` are "section.key=value"
/// strings applied on top of the file. The result is validated.
ScenarioConfig parse_config(std::string_view ini_text, const std::vector<std::string>& overrides = {});

/// Reads a file (an empty path means all defaults), applies overrides and the
/// output-directory environment override.
ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Canonical INI for a config: every key, fixed order. parse_config(config_to_ini(c))
/// reproduces c.
std::string config_to_ini(const ScenarioConfig& cfg);

/// Sorted list of every accepted `section.key`.
std::vector<std::string> config_keys();

}  // namespace flsched
