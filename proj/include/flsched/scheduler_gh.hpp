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

#include "flsched/schedule.hpp"

namespace flsched {

/// Greedy-heuristic day plan.
///
/// Slots come from select_slots(). Participants are assigned in chronological slot
/// order: every eligible unique client (see unique_clients()) not yet covered by an
/// earlier round, then the remaining eligible clients rarest-first (fewest eligible
/// slots, then lowest id) until the round holds K_min. With a selection rate
/// configured, no round exceeds ceil(beta * N).
///
/// While unique clients remain uncovered and the relaxation budget lasts, K_min and G
/// are decremented alternately (K_min first; a knob at its floor of 1 or 0 is skipped)
/// and the plan is rebuilt. The attempt covering the most unique clients is returned,
/// the earliest one on ties; its K_min/G are reported as the effective values.
Schedule gh_schedule(const EligibilityMatrix& eligibility, const ScheduleConfig& cfg,
                     const ResponseTracker& tracker);

}  // namespace flsched
