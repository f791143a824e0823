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
#include <cstdint>
#include <vector>

#include "belldrift/core.hpp"
#include "belldrift/schedule.hpp"

// Finite deterministic local-hidden-variable model with a drifting
// preparation ensemble over five hidden states.
namespace belldrift::lhv {

inline constexpr std::size_t kNumHidden = 5;

/// Distribution over the hidden states lambda_1..lambda_5.
using Ensemble = std::array<double, kNumHidden>;

/// Deterministic +-1 responses A(a, lambda_j), B(b, lambda_j); index 0 is the
/// unprimed setting, 1 the primed one.
struct ResponseTable {
    std::array<std::array<int, kNumHidden>, 2> alice{};
    std::array<std::array<int, kNumHidden>, 2> bob{};

    static ResponseTable canonical();
    void validate() const;

    int product(Context c, std::size_t j) const;
    /// Two-bit outcome index (+1 -> bit 0, -1 -> bit 1, Alice left).
    std::size_t outcome(Context c, std::size_t j) const;

    bool operator==(const ResponseTable &) const = default;
};

/// Per-context ensemble at mixture weight p in [0, 1/3]: weight p on three of
/// lambda_1..4 (zero on lambda_4, 3, 2, 1 for xy, xy', x'y, x'y'), 1 - 3p on lambda_5.
Ensemble ensemble(Context c, double p);
std::array<Ensemble, 4> ensembles(double p);

/// Throws ValidationError unless 0 <= p <= 1/3.
void require_weight(double p);

double analytic_correlator(Context c, double p, const ResponseTable &table = ResponseTable::canonical());
/// 2 + 6p for the canonical table.
double analytic_S(double p);

Probabilities outcome_distribution(Context c, const Ensemble &ensemble,
                                   const ResponseTable &table = ResponseTable::canonical());

/// Per-bin mixture weights p_1..p_K.
struct PProfile {
    enum class Kind { Constant, LinearRamp };

    Kind kind = Kind::Constant;
    double p_lo = 0.0;
    double p_hi = 0.0;
    std::vector<double> values;

    static PProfile constant(double p, int num_bins);
    /// p_k = p_lo + (p_hi - p_lo)(k - 1)/(K - 1); K = 1 gives p_lo.
    static PProfile linear_ramp(double p_lo, double p_hi, int num_bins);

    int num_bins() const { return static_cast<int>(values.size()); }
    /// Weight of 1-based bin k.
    double at(int k) const;
};

/// Draws lambda for every shot of every slot from the context's ensemble at the
/// slot's drift index and records the deterministic outcomes. Slot i uses the
/// RNG stream derived from (seed, i).
BinnedCounts sample_lhv_counts(const PProfile &profile, const schedule::Schedule &sched, std::uint64_t shots_per_bin,
                               std::uint64_t seed, schedule::DriftIndexRule rule,
                               const ResponseTable &table = ResponseTable::canonical());
inline BinnedCounts sample_lhv_counts(const PProfile &profile, const schedule::Schedule &sched,
                                      std::uint64_t shots_per_bin, std::uint64_t seed) {
    return sample_lhv_counts(profile, sched, shots_per_bin, seed, schedule::default_rule(sched.kind));
}

/// Mean weight over each context's drift indices.
std::array<double, 4> mean_weights(const PProfile &profile, const schedule::Schedule &sched,
                                   schedule::DriftIndexRule rule);

/// Time-averaged ensemble of each context over the drift indices it visits.
std::array<Ensemble, 4> time_averaged_ensembles(const PProfile &profile, const schedule::Schedule &sched,
                                                schedule::DriftIndexRule rule);
inline std::array<Ensemble, 4> time_averaged_ensembles(const PProfile &profile, const schedule::Schedule &sched) {
    return time_averaged_ensembles(profile, sched, schedule::default_rule(sched.kind));
}

/// Max over the six context pairs of the exact TV distance between hidden-state ensembles.
double model_delta_ens(const std::array<Ensemble, 4> &ensembles);

/// Same maximum taken over the contexts' observable outcome distributions.
double outcome_delta_ens(const std::array<Ensemble, 4> &ensembles,
                         const ResponseTable &table = ResponseTable::canonical());

}  // namespace belldrift::lhv
