// Copyright 2026 The belldrift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "belldrift/core.hpp"

namespace belldrift::schedule {

enum class Kind { RoundRobin, Blocked, Custom };

std::string_view kind_name(Kind k);
/// Accepts "round-robin"/"rr", "blocked"/"unbalanced"/"ub", "custom".
Kind parse_kind(std::string_view name);

/// One execution slot: the context run and the temporal bin it is filed under.
struct Slot {
    Context context = Context::XY;
    int bin = 1;
    bool operator==(const Slot &) const = default;
};

/// Global execution order of (context, bin) slots.
struct Schedule {
    Kind kind = Kind::RoundRobin;
    int num_bins = 0;
    std::vector<Slot> slots;

    /// Throws ValidationError on bins outside 1..num_bins, duplicate slots, or
    /// (for RoundRobin/Blocked) anything other than the full grid.
    void validate() const;
    bool operator==(const Schedule &) const = default;
};

/// RoundRobin is bin-major, Blocked is context-major in the order xy, xy', x'y, x'y'.
/// Throws ValidationError for num_bins < 1 or kind Custom.
Schedule make_schedule(Kind kind, int num_bins);

Schedule make_custom(int num_bins, std::vector<Slot> slots);

/// How the drift clock advances along the schedule.
///
/// PerBin: the slot's drift index is its bin label.
/// PerSlot: the drift index is the wall-clock quantile of the slot's position,
/// floor(position * K / num_slots) + 1, so a context executed late sees late drift.
enum class DriftIndexRule { PerBin, PerSlot };

std::string_view rule_name(DriftIndexRule r);
DriftIndexRule parse_rule(std::string_view name);

/// PerSlot for Blocked, PerBin otherwise.
DriftIndexRule default_rule(Kind kind);

/// Drift index (1..K) of every slot, in slot order.
std::vector<int> drift_indices(const Schedule &s, DriftIndexRule rule);

/// Drift indices visited by each context, in slot order.
std::array<std::vector<int>, 4> context_drift_indices(const Schedule &s, DriftIndexRule rule);

struct ExposureReport {
    DriftIndexRule rule = DriftIndexRule::PerBin;
    /// Normalized occupancy of drift indices 1..K for each context.
    std::array<std::vector<double>, 4> occupancy;
    /// Max pairwise total-variation distance between occupancies, in [0, 1].
    double delta_sched = 0.0;
};

ExposureReport exposure(const Schedule &s, DriftIndexRule rule);
inline ExposureReport exposure(const Schedule &s) { return exposure(s, default_rule(s.kind)); }

}  // namespace belldrift::schedule
