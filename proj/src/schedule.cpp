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

#include "belldrift/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "belldrift/stats.hpp"

namespace belldrift::schedule {

std::string_view kind_name(Kind k) {
    switch (k) {
        case Kind::RoundRobin:
            return "round-robin";
        case Kind::Blocked:
            return "blocked";
        case Kind::Custom:
            return "custom";
    }
    throw ValidationError("invalid schedule kind");
}

Kind parse_kind(std::string_view name) {
    if (name == "round-robin" || name == "rr" || name == "balanced") {
        return Kind::RoundRobin;
    }
    if (name == "blocked" || name == "unbalanced" || name == "ub") {
        return Kind::Blocked;
    }
    if (name == "custom") {
        return Kind::Custom;
    }
    throw ValidationError("unknown schedule kind '" + std::string(name) + "'");
}

std::string_view rule_name(DriftIndexRule r) { return r == DriftIndexRule::PerBin ? "per-bin" : "per-slot"; }

DriftIndexRule parse_rule(std::string_view name) {
    if (name == "per-bin") {
        return DriftIndexRule::PerBin;
    }
    if (name == "per-slot") {
        return DriftIndexRule::PerSlot;
    }
    throw ValidationError("unknown drift index rule '" + std::string(name) + "'");
}

DriftIndexRule default_rule(Kind kind) {
    return kind == Kind::Blocked ? DriftIndexRule::PerSlot : DriftIndexRule::PerBin;
}

void Schedule::validate() const {
    if (num_bins < 1) {
        throw ValidationError("schedule needs at least one bin");
    }
    if (slots.empty()) {
        throw ValidationError("schedule has no slots");
    }
    std::set<std::pair<int, int>> seen;
    for (const auto &slot : slots) {
        if (slot.bin < 1 || slot.bin > num_bins) {
            throw ValidationError("slot (" + std::string(context_label(slot.context)) + ", " +
                                  std::to_string(slot.bin) + ") references a bin outside 1.." +
                                  std::to_string(num_bins));
        }
        if (!seen.insert({static_cast<int>(index_of(slot.context)), slot.bin}).second) {
            throw ValidationError("slot (" + std::string(context_label(slot.context)) + ", " +
                                  std::to_string(slot.bin) + ") appears twice");
        }
    }
    if (kind != Kind::Custom && seen.size() != 4 * static_cast<std::size_t>(num_bins)) {
        throw ValidationError("round-robin and blocked schedules must cover every (context, bin) pair");
    }
}

Schedule make_schedule(Kind kind, int num_bins) {
    if (num_bins < 1) {
        throw ValidationError("schedule needs at least one bin");
    }
    Schedule s{kind, num_bins, {}};
    s.slots.reserve(4 * static_cast<std::size_t>(num_bins));
    switch (kind) {
        case Kind::RoundRobin:
            for (int k = 1; k <= num_bins; ++k) {
                for (Context c : kContexts) {
                    s.slots.push_back({c, k});
                }
            }
            break;
        case Kind::Blocked:
            for (Context c : kContexts) {
                for (int k = 1; k <= num_bins; ++k) {
                    s.slots.push_back({c, k});
                }
            }
            break;
        case Kind::Custom:
            throw ValidationError("custom schedules are built with make_custom");
    }
    return s;
}

Schedule make_custom(int num_bins, std::vector<Slot> slots) {
    Schedule s{Kind::Custom, num_bins, std::move(slots)};
    s.validate();
    return s;
}

std::vector<int> drift_indices(const Schedule &s, DriftIndexRule rule) {
    s.validate();
    std::vector<int> out;
    out.reserve(s.slots.size());
    const auto n = s.slots.size();
    for (std::size_t pos = 0; pos < n; ++pos) {
        if (rule == DriftIndexRule::PerBin) {
            out.push_back(s.slots[pos].bin);
        } else {
            out.push_back(static_cast<int>(pos * static_cast<std::size_t>(s.num_bins) / n) + 1);
        }
    }
    return out;
}

std::array<std::vector<int>, 4> context_drift_indices(const Schedule &s, DriftIndexRule rule) {
    const auto indices = drift_indices(s, rule);
    std::array<std::vector<int>, 4> out;
    for (std::size_t pos = 0; pos < s.slots.size(); ++pos) {
        out[index_of(s.slots[pos].context)].push_back(indices[pos]);
    }
    return out;
}

ExposureReport exposure(const Schedule &s, DriftIndexRule rule) {
    const auto per_context = context_drift_indices(s, rule);
    ExposureReport report;
    report.rule = rule;
    for (std::size_t c = 0; c < 4; ++c) {
        auto &hist = report.occupancy[c];
        hist.assign(static_cast<std::size_t>(s.num_bins), 0.0);
        for (int k : per_context[c]) {
            hist[static_cast<std::size_t>(k - 1)] += 1.0;
        }
        const double n = static_cast<double>(per_context[c].size());
        if (n > 0.0) {
            for (auto &v : hist) {
                v /= n;
            }
        }
    }
    // Contexts that never execute have no temporal support and are skipped.
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            if (per_context[i].empty() || per_context[j].empty()) {
                continue;
            }
            worst = std::max(worst, stats::tv_distance(report.occupancy[i], report.occupancy[j]));
        }
    }
    report.delta_sched = std::min(1.0, worst);
    return report;
}

}  // namespace belldrift::schedule
