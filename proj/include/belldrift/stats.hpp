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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "belldrift/core.hpp"

namespace belldrift::stats {

/// Half the L1 distance. Both inputs must sum to 1 within 1e-9 and have equal size.
double tv_distance(std::span<const double> p, std::span<const double> q);

/// Operational drift: per context, the maximum pairwise TV distance between
/// bin distributions; globally, the maximum over contexts.
struct DriftStatistics {
    std::array<double, 4> per_context{};
    double global = 0.0;
};

/// Throws ValidationError when a context has fewer than two bins or a bin has zero shots.
DriftStatistics delta_op(const BinnedCounts &binned);
DriftStatistics delta_op(const BinnedFrequencies &binned);

/// Maps one resampled bin's counts to the distribution the statistic sees
/// (e.g. readout mitigation). Empty means plain frequencies.
using BinTransform = std::function<Probabilities(const Counts &)>;

/// Shape of the IID null: bins and shots matched to the data, drawn from each
/// context's pooled distribution.
struct NullSpec {
    std::uint64_t shots_per_bin = 0;
    std::array<int, 4> bins_per_context{};
    std::array<Probabilities, 4> pooled{};
};

/// Uses the data's per-context pooled empirical frequencies.
NullSpec null_spec_for(const BinnedCounts &binned);

struct NullSample {
    std::array<std::vector<double>, 4> per_context;
    std::vector<double> global;
};

/// Monte-Carlo null of delta_op. Trial t draws from a stream derived from
/// (seed, t), so the sample is identical for any thread count.
NullSample mc_null(const NullSpec &spec, int trials, std::uint64_t seed, const BinTransform &transform = {},
                   unsigned threads = 1);
NullSample mc_null(std::uint64_t shots_per_bin, int num_bins, const std::array<Probabilities, 4> &pooled, int trials,
                   std::uint64_t seed);

/// One-sided add-one estimate (1 + #{null >= observed}) / (1 + n).
double p_value(double observed, std::span<const double> null_sample);

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> xs);
/// Linear-interpolated empirical quantile, q in [0, 1].
double quantile(std::span<const double> xs, double q);

struct NullSummary {
    double mean = 0.0;
    double std = 0.0;
    double q025 = 0.0;
    double q975 = 0.0;
    double q99 = 0.0;
    double p_value = 1.0;
};

NullSummary summarize(double observed, std::span<const double> null_sample);

inline constexpr int kDefaultNullTrials = 1000;
inline constexpr int kDefaultBootstrapReplicates = 200;

struct DriftReport {
    DriftStatistics observed;
    /// Bootstrap-over-shots standard deviation of the observed global statistic.
    double observed_global_std = 0.0;
    std::array<NullSummary, 4> per_context_null{};
    NullSummary global_null;
    int num_null_trials = 0;
    bool mitigated = false;
};

/// Observed delta_op with an MC null and bootstrap spread.
///
/// With a transform, each bin of the data and of every null/bootstrap
/// replicate passes through it before the statistic is taken.
DriftReport drift_report(const BinnedCounts &binned, int trials, std::uint64_t seed,
                         const BinTransform &transform = {}, int bootstrap_replicates = kDefaultBootstrapReplicates,
                         unsigned threads = 1);

/// Standard deviation of delta_op^global over multinomial bootstrap replicates of each bin.
double bootstrap_std(const BinnedCounts &binned, int replicates, std::uint64_t seed,
                     const BinTransform &transform = {});

struct Marginals {
    std::array<double, 2> alice{};
    std::array<double, 2> bob{};
};

/// Row and column marginals. Throws ValidationError for zero shots.
Marginals marginals(const Counts &counts);
Marginals marginals(const Probabilities &probs);

/// Two-sided standard normal tail probability 2(1 - Phi(|z|)).
double normal_two_sided_p(double z);

struct ProportionTest {
    double difference = 0.0;  // p1 - p2
    double z = 0.0;
    double p_value = 1.0;
    /// Pooled proportion was 0 or 1: the comparison reduces to an equality check.
    bool exact = false;
};

/// Pooled-variance two-proportion z-test on proportions p1, p2 from n1, n2 trials.
ProportionTest two_proportion_z(double p1, double n1, double p2, double n2);
ProportionTest two_proportion_z(std::uint64_t successes1, std::uint64_t n1, std::uint64_t successes2,
                                std::uint64_t n2);

struct MarginalComparison {
    char party = 'A';
    Context first = Context::XY;
    Context second = Context::XYp;
    ProportionTest test;
};

struct NoSignalingReport {
    double max_abs_marginal_deviation = 0.0;
    double min_p = 1.0;
    double min_p_bonferroni = 1.0;
    std::array<MarginalComparison, 4> comparisons{};
};

/// Alice's marginal across y vs y' for fixed x (two tests) and Bob's across x
/// vs x' for fixed y (two tests); Bonferroni factor 4.
NoSignalingReport no_signaling_test(const std::array<Counts, 4> &counts);
/// Frequencies with their shot totals (e.g. mitigated distributions).
NoSignalingReport no_signaling_test(const std::array<Probabilities, 4> &probs, const std::array<double, 4> &shots);

}  // namespace belldrift::stats
