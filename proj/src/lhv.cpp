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

#include "belldrift/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "belldrift/rng.hpp"
#include "belldrift/stats.hpp"

namespace belldrift::lhv {

namespace {

// Row j of the hidden-state table that carries zero weight for each context.
constexpr std::array<std::size_t, 4> kZeroRow = {3, 2, 1, 0};

}  // namespace

ResponseTable ResponseTable::canonical() {
    ResponseTable t;
    t.alice[0] = {+1, +1, +1, +1, +1};
    t.alice[1] = {+1, -1, +1, -1, +1};
    t.bob[0] = {+1, +1, +1, -1, +1};
    t.bob[1] = {+1, +1, -1, +1, +1};
    return t;
}

void ResponseTable::validate() const {
    for (const auto *side : {&alice, &bob}) {
        for (const auto &row : *side) {
            for (int v : row) {
                if (v != 1 && v != -1) {
                    throw ValidationError("response table entries must be +1 or -1");
                }
            }
        }
    }
}

int ResponseTable::product(Context c, std::size_t j) const {
    return alice[static_cast<std::size_t>(alice_setting(c))][j] * bob[static_cast<std::size_t>(bob_setting(c))][j];
}

std::size_t ResponseTable::outcome(Context c, std::size_t j) const {
    const std::size_t a = alice[static_cast<std::size_t>(alice_setting(c))][j] == 1 ? 0 : 1;
    const std::size_t b = bob[static_cast<std::size_t>(bob_setting(c))][j] == 1 ? 0 : 1;
    return 2 * a + b;
}

void require_weight(double p) {
    if (!(p >= 0.0 && p <= 1.0 / 3.0 + 1e-15)) {
        std::ostringstream msg;
        msg << "mixture weight p = " << p << " outside [0, 1/3]";
        throw ValidationError(msg.str());
    }
}

Ensemble ensemble(Context c, double p) {
    require_weight(p);
    Ensemble e{};
    for (std::size_t j = 0; j < 4; ++j) {
        e[j] = j == kZeroRow[index_of(c)] ? 0.0 : p;
    }
    e[4] = std::max(0.0, 1.0 - 3.0 * p);
    return e;
}

std::array<Ensemble, 4> ensembles(double p) {
    return {ensemble(Context::XY, p), ensemble(Context::XYp, p), ensemble(Context::XpY, p),
            ensemble(Context::XpYp, p)};
}

double analytic_correlator(Context c, double p, const ResponseTable &table) {
    const auto e = ensemble(c, p);
    double sum = 0.0;
    for (std::size_t j = 0; j < kNumHidden; ++j) {
        sum += e[j] * table.product(c, j);
    }
    return sum;
}

double analytic_S(double p) {
    require_weight(p);
    return 2.0 + 6.0 * p;
}

Probabilities outcome_distribution(Context c, const Ensemble &ensemble, const ResponseTable &table) {
    Probabilities out{};
    for (std::size_t j = 0; j < kNumHidden; ++j) {
        out[table.outcome(c, j)] += ensemble[j];
    }
    return out;
}

PProfile PProfile::constant(double p, int num_bins) {
    if (num_bins < 1) {
        throw ValidationError("weight profile needs at least one bin");
    }
    require_weight(p);
    return {Kind::Constant, p, p, std::vector<double>(static_cast<std::size_t>(num_bins), p)};
}

PProfile PProfile::linear_ramp(double p_lo, double p_hi, int num_bins) {
    if (num_bins < 1) {
        throw ValidationError("weight profile needs at least one bin");
    }
    require_weight(p_lo);
    require_weight(p_hi);
    PProfile profile{Kind::LinearRamp, p_lo, p_hi, std::vector<double>(static_cast<std::size_t>(num_bins), p_lo)};
    for (int k = 1; k < num_bins; ++k) {
        profile.values[static_cast<std::size_t>(k)] =
            p_lo + (p_hi - p_lo) * static_cast<double>(k) / static_cast<double>(num_bins - 1);
    }
    return profile;
}

double PProfile::at(int k) const {
    if (k < 1 || k > num_bins()) {
        throw ValidationError("weight bin " + std::to_string(k) + " outside 1.." + std::to_string(num_bins()));
    }
    return values[static_cast<std::size_t>(k - 1)];
}

namespace {

void require_matching_bins(const PProfile &profile, const schedule::Schedule &sched) {
    sched.validate();
    if (sched.num_bins != profile.num_bins()) {
        throw ValidationError("schedule has " + std::to_string(sched.num_bins) + " bins but the weight profile has " +
                              std::to_string(profile.num_bins()));
    }
}

}  // namespace

BinnedCounts sample_lhv_counts(const PProfile &profile, const schedule::Schedule &sched, std::uint64_t shots_per_bin,
                               std::uint64_t seed, schedule::DriftIndexRule rule, const ResponseTable &table) {
    if (shots_per_bin == 0) {
        throw ValidationError("shots_per_bin must be positive");
    }
    table.validate();
    require_matching_bins(profile, sched);
    const auto drift = schedule::drift_indices(sched, rule);

    BinnedCounts out;
    out.num_bins = sched.num_bins;
    out.shots_per_bin = shots_per_bin;
    std::array<std::uint64_t, kNumHidden> hidden{};
    for (std::size_t pos = 0; pos < sched.slots.size(); ++pos) {
        const auto &slot = sched.slots[pos];
        const auto pi = ensemble(slot.context, profile.at(drift[pos]));
        Rng rng(derive_seed(seed, pos));
        sample_multinomial(rng, pi, shots_per_bin, hidden);
        Counts counts{};
        for (std::size_t j = 0; j < kNumHidden; ++j) {
            counts[table.outcome(slot.context, j)] += hidden[j];
        }
        out.of(slot.context).push_back({slot.bin, counts});
    }
    for (auto &cells : out.contexts) {
        std::sort(cells.begin(), cells.end(), [](const BinCounts &a, const BinCounts &b) { return a.bin < b.bin; });
    }
    return out;
}

std::array<double, 4> mean_weights(const PProfile &profile, const schedule::Schedule &sched,
                                   schedule::DriftIndexRule rule) {
    require_matching_bins(profile, sched);
    const auto per_context = schedule::context_drift_indices(sched, rule);
    std::array<double, 4> out{};
    for (Context c : kContexts) {
        const auto &ks = per_context[index_of(c)];
        if (ks.empty()) {
            throw ValidationError("context " + std::string(context_label(c)) + " is never executed");
        }
        double sum = 0.0;
        for (int k : ks) {
            sum += profile.at(k);
        }
        out[index_of(c)] = sum / static_cast<double>(ks.size());
    }
    return out;
}

std::array<Ensemble, 4> time_averaged_ensembles(const PProfile &profile, const schedule::Schedule &sched,
                                                schedule::DriftIndexRule rule) {
    require_matching_bins(profile, sched);
    const auto per_context = schedule::context_drift_indices(sched, rule);
    std::array<Ensemble, 4> out{};
    for (Context c : kContexts) {
        const auto &ks = per_context[index_of(c)];
        if (ks.empty()) {
            throw ValidationError("context " + std::string(context_label(c)) + " is never executed");
        }
        Ensemble avg{};
        for (int k : ks) {
            const auto e = ensemble(c, profile.at(k));
            for (std::size_t j = 0; j < kNumHidden; ++j) {
                avg[j] += e[j];
            }
        }
        for (auto &v : avg) {
            v /= static_cast<double>(ks.size());
        }
        out[index_of(c)] = avg;
    }
    return out;
}

double model_delta_ens(const std::array<Ensemble, 4> &ensembles) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            worst = std::max(worst, stats::tv_distance(ensembles[i], ensembles[j]));
        }
    }
    return worst;
}

double outcome_delta_ens(const std::array<Ensemble, 4> &ensembles, const ResponseTable &table) {
    std::array<Probabilities, 4> dists{};
    for (Context c : kContexts) {
        dists[index_of(c)] = outcome_distribution(c, ensembles[index_of(c)], table);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            worst = std::max(worst, stats::tv_distance(dists[i], dists[j]));
        }
    }
    return worst;
}

}  // namespace belldrift::lhv
