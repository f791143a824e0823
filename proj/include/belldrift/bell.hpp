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
#include <string>
#include <string_view>

#include "belldrift/core.hpp"

namespace belldrift::bell {

struct Correlator {
    double value = 0.0;
    double standard_error = 0.0;
};

/// E = (n00 + n11 - n01 - n10) / N with plug-in binomial error sqrt((1 - E^2)/N).
Correlator correlator(const Counts &counts);
/// Same estimator for a distribution estimated from `shots` shots.
Correlator correlator(const Probabilities &probs, double shots);

struct ChshReport {
    std::array<Correlator, 4> correlators{};
    double S = 0.0;
    double standard_error = 0.0;
    bool mitigated = false;
    std::string schedule;

    /// Throws ValidationError if any |E| > 1 or S disagrees with
    /// E_xy + E_xy' + E_x'y - E_x'y' by more than 1e-12.
    void validate() const;
};

/// S = E_xy + E_xy' + E_x'y - E_x'y', errors added in quadrature.
ChshReport chsh_S(const std::array<Correlator, 4> &correlators);

/// A bound as given by its formula, alongside its clamp to the algebraic maximum |S| <= 4.
struct BoundValue {
    double formula = 0.0;
    double clamped = 0.0;
    bool exceeds_algebraic_max = false;
};

inline constexpr double kAlgebraicMax = 4.0;

/// 2 + 6 delta. Throws ValidationError for delta outside [0, 1].
BoundValue relaxed_bound(double delta_ens);
/// max(0, (|S| - 2) / 6).
double min_delta_required(double S);
/// 2 + 6 delta_sched delta_op. Throws ValidationError for inputs outside [0, 1].
double schedule_aware_bound(double delta_sched, double delta_op);
/// Hall's measurement-dependence bound 2 + 3M. Throws ValidationError for M outside [0, 1].
BoundValue hall_bound(double measurement_dependence);
/// M solving 2 + 3M = |S| (0 when |S| <= 2).
double hall_required(double S);

/// Measurement dependence at which 2 + 3M reaches 2 sqrt(2).
double hall_threshold();
/// The rounded percentage commonly quoted for the Hall threshold, which does
/// not match hall_threshold(); reports print both.
inline constexpr double kHallQuotedThreshold = 0.14;
std::string_view hall_threshold_note();

enum class Verdict { NoViolation, WithinRelaxedBound, ExceedsScheduleAwareBound };
std::string_view verdict_name(Verdict v);

struct BoundCertificate {
    double S = 0.0;
    double delta_ens_min = 0.0;
    double delta_sched = 0.0;
    double delta_op = 0.0;
    double s_lhv_min = 2.0;
    BoundValue relaxed_at_delta_op;
    BoundValue hall_at_required;
    double hall_required_M = 0.0;
    Verdict verdict = Verdict::NoViolation;

    void validate() const;
};

/// |S| <= 2: NoViolation; |S| <= S_LHV^min: WithinRelaxedBound; otherwise ExceedsScheduleAwareBound.
BoundCertificate certify(double S, double delta_sched, double delta_op);

struct BruteForceResult {
    bool passed = true;
    double worst_abs_S = 0.0;
    double bound = 2.0;
    int trials = 0;
};

/// Best |S| any deterministic local response table achieves for fixed context ensembles
/// over a finite hidden-variable space (exact: the optimum decomposes per hidden state).
double max_abs_S(const std::array<std::vector<double>, 4> &ensembles);

/// Random ensembles over `num_hidden` points with max pairwise TV exactly
/// min(delta, natural spread), maximized over all 16 deterministic strategies per
/// hidden state; passes when no trial exceeds 2 + 6 delta + 1e-9.
BruteForceResult bound_bruteforce_check(double delta, int trials, std::uint64_t seed, int num_hidden = 5);

}  // namespace belldrift::bell
