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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "belldrift/bell.hpp"
#include "belldrift/core.hpp"
#include "belldrift/lhv.hpp"
#include "belldrift/mitigation.hpp"
#include "belldrift/qsim.hpp"
#include "belldrift/schedule.hpp"
#include "belldrift/stats.hpp"

namespace belldrift::harness {

enum class AxesSet { PauliContexts, ChshOptimal };
std::string_view axes_name(AxesSet a);
AxesSet parse_axes(std::string_view name);

/// Singlet source with a linear phase-drift ramp and parametric noise.
struct QuantumSource {
    double theta_max = 0.0;
    double depolarizing_rate = 0.0;
    /// Independent symmetric readout flips (eps_a, eps_b); none means perfect readout.
    std::optional<std::pair<double, double>> readout_flips;
    AxesSet axes = AxesSet::PauliContexts;

    qsim::NoiseSpec noise() const;
};

/// Drifting finite hidden-variable source.
struct LhvSource {
    lhv::PProfile::Kind profile = lhv::PProfile::Kind::Constant;
    double p_lo = 0.0;
    double p_hi = 0.0;

    lhv::PProfile make_profile(int num_bins) const;
};

struct ExperimentConfig {
    std::string label;
    std::variant<QuantumSource, LhvSource> source = QuantumSource{};
    schedule::Kind schedule = schedule::Kind::RoundRobin;
    int num_bins = 0;
    std::uint64_t shots_per_bin = 0;
    int null_trials = stats::kDefaultNullTrials;
    int bootstrap_replicates = stats::kDefaultBootstrapReplicates;
    /// Mandatory: validate() rejects a config without one.
    std::optional<std::uint64_t> seed;
    bool mitigation = false;
    /// Shots per basis state for the simulated calibration; 0 means exact.
    std::uint64_t calibration_shots = 0;
    double max_condition = mitigation::kDefaultMaxCondition;
    std::optional<schedule::DriftIndexRule> drift_rule;
    unsigned threads = 1;

    /// Throws ValidationError naming the offending key.
    void validate() const;
    schedule::DriftIndexRule effective_rule() const;
    std::uint64_t root_seed() const;
};

/// How counts (simulated or ingested) are analyzed.
struct AnalysisOptions {
    std::string label;
    int null_trials = stats::kDefaultNullTrials;
    int bootstrap_replicates = stats::kDefaultBootstrapReplicates;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::optional<mitigation::AssignmentMatrix> calibration;
    double max_condition = mitigation::kDefaultMaxCondition;
    /// Execution schedule, when known; enables the exposure report.
    std::optional<schedule::Schedule> schedule;
    std::optional<schedule::DriftIndexRule> drift_rule;
    /// Overrides the schedule-derived exposure factor in the bound certificate.
    std::optional<double> delta_sched;
    std::string axes = "unknown";
};

/// Hidden-state-level quantities of an LHV source, computed from the model.
struct ModelDivergence {
    std::array<double, 4> mean_weights{};
    double delta_ens_lambda = 0.0;
    double delta_ens_outcome = 0.0;
    double analytic_S = 0.0;
};

struct VersionedReports {
    stats::DriftReport drift;
    bell::ChshReport chsh;
    stats::NoSignalingReport no_signaling;
};

struct RunRecord {
    std::optional<ExperimentConfig> config;
    AnalysisOptions analysis;
    BinnedCounts counts;
    /// FNV-1a hash of the canonical counts serialization; every report below was computed from it.
    std::string counts_hash;
    VersionedReports raw;
    std::optional<BinnedFrequencies> mitigated_frequencies;
    int clipped_cells = 0;
    std::optional<VersionedReports> mitigated;
    std::optional<schedule::ExposureReport> exposure;
    std::optional<bell::BoundCertificate> certificate;
    std::optional<ModelDivergence> model;
    double wall_seconds = 0.0;
};

std::string hash_counts(const BinnedCounts &counts);

/// Generates counts from the configured source and schedule without analysis.
BinnedCounts generate_counts(const ExperimentConfig &config);

/// Analyzes counts: drift with MC null, CHSH, no-signaling, optional per-bin
/// mitigation, exposure and bound certificate.
RunRecord analyze(const BinnedCounts &counts, const AnalysisOptions &options);

/// Generates counts and analyzes them; fully determined by the config and its seed.
/// Errors are rethrown with the pipeline stage prefixed.
RunRecord run_experiment(const ExperimentConfig &config);

/// True when counts_hash matches the stored counts.
bool verify_record(const RunRecord &record);

struct BinScanRow {
    int num_bins = 0;
    double theta_max = 0.0;
    schedule::Kind schedule = schedule::Kind::RoundRobin;
    double observed = 0.0;
    double observed_std = 0.0;
    double null_mean = 0.0;
    double null_std = 0.0;
    double null_q99 = 0.0;
    double p_value = 1.0;
    std::string stars;
};

/// "***" below 1e-3, "**" below 0.01, "*" below 0.05, else empty.
std::string significance_stars(double p);

/// Observed vs null delta_op^global for every (bins, theta_max, schedule); the
/// template must have a quantum source. Each row's seed depends only on its
/// own parameters and the template seed.
std::vector<BinScanRow> bin_scan(const ExperimentConfig &tmpl, std::span<const int> bins,
                                 std::span<const double> theta_max_values,
                                 std::span<const schedule::Kind> schedules);

}  // namespace belldrift::harness
