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

#include "belldrift/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "belldrift/rng.hpp"

namespace belldrift::harness {

namespace {

// Stream identifiers under the root seed.
constexpr std::uint64_t kGenerateStream = 1;
constexpr std::uint64_t kAnalysisStream = 2;
constexpr std::uint64_t kCalibrationStream = 3;
constexpr std::uint64_t kRawDriftStream = 10;
constexpr std::uint64_t kMitigatedDriftStream = 11;

template <typename Fn>
auto with_stage(std::string_view stage, Fn &&fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ValidationError &e) {
        throw ValidationError(std::string(stage) + ": " + e.what());
    } catch (const NumericalError &e) {
        throw NumericalError(std::string(stage) + ": " + e.what());
    }
}

bell::ChshReport chsh_from(const std::array<Probabilities, 4> &probs, const std::array<double, 4> &shots) {
    std::array<bell::Correlator, 4> e{};
    for (Context c : kContexts) {
        e[index_of(c)] = bell::correlator(probs[index_of(c)], shots[index_of(c)]);
    }
    return bell::chsh_S(e);
}

}  // namespace

std::string_view axes_name(AxesSet a) { return a == AxesSet::PauliContexts ? "pauli" : "chsh-optimal"; }

AxesSet parse_axes(std::string_view name) {
    if (name == "pauli") {
        return AxesSet::PauliContexts;
    }
    if (name == "chsh-optimal" || name == "chsh") {
        return AxesSet::ChshOptimal;
    }
    throw ValidationError("unknown axes set '" + std::string(name) + "' (expected pauli or chsh-optimal)");
}

qsim::NoiseSpec QuantumSource::noise() const {
    qsim::NoiseSpec n;
    n.depolarizing_rate = depolarizing_rate;
    if (readout_flips) {
        n.assignment = mitigation::AssignmentMatrix::symmetric_flips(readout_flips->first, readout_flips->second);
    }
    n.validate();
    return n;
}

lhv::PProfile LhvSource::make_profile(int num_bins) const {
    return profile == lhv::PProfile::Kind::Constant ? lhv::PProfile::constant(p_lo, num_bins)
                                                    : lhv::PProfile::linear_ramp(p_lo, p_hi, num_bins);
}

void ExperimentConfig::validate() const {
    if (!seed) {
        throw ValidationError("seed: a root seed is required");
    }
    if (num_bins < 1) {
        throw ValidationError("num_bins: must be at least 1");
    }
    if (shots_per_bin == 0) {
        throw ValidationError("shots_per_bin: must be positive");
    }
    if (null_trials < 1) {
        throw ValidationError("null_trials: must be at least 1");
    }
    if (bootstrap_replicates < 0) {
        throw ValidationError("bootstrap_replicates: must be non-negative");
    }
    if (schedule == schedule::Kind::Custom) {
        throw ValidationError("schedule: custom schedules cannot be generated from a config");
    }
    if (!(max_condition >= 1.0)) {
        throw ValidationError("max_condition: must be at least 1");
    }
    if (const auto *q = std::get_if<QuantumSource>(&source)) {
        if (!std::isfinite(q->theta_max)) {
            throw ValidationError("source.theta_max: must be finite");
        }
        if (q->readout_flips) {
            (void)mitigation::AssignmentMatrix::symmetric_flips(q->readout_flips->first, q->readout_flips->second);
        }
        with_stage("source", [&] { return q->noise(); });
    } else {
        with_stage("source", [&] { return std::get<LhvSource>(source).make_profile(num_bins); });
    }
}

schedule::DriftIndexRule ExperimentConfig::effective_rule() const {
    return drift_rule.value_or(schedule::default_rule(schedule));
}

std::uint64_t ExperimentConfig::root_seed() const {
    if (!seed) {
        throw ValidationError("seed: a root seed is required");
    }
    return *seed;
}

std::string hash_counts(const BinnedCounts &counts) {
    std::ostringstream canonical;
    canonical << counts.num_bins << ';' << counts.shots_per_bin << ';';
    for (Context c : kContexts) {
        canonical << context_label(c) << ':';
        for (const auto &b : counts.of(c)) {
            canonical << b.bin << '=' << b.counts[0] << ',' << b.counts[1] << ',' << b.counts[2] << ',' << b.counts[3]
                      << ';';
        }
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical.str()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

BinnedCounts generate_counts(const ExperimentConfig &config) {
    config.validate();
    const auto sched = schedule::make_schedule(config.schedule, config.num_bins);
    const auto rule = config.effective_rule();
    const auto seed = derive_seed(config.root_seed(), kGenerateStream);

    BinnedCounts counts;
    if (const auto *l = std::get_if<LhvSource>(&config.source)) {
        counts = lhv::sample_lhv_counts(l->make_profile(config.num_bins), sched, config.shots_per_bin, seed, rule);
    } else {
        const auto &q = std::get<QuantumSource>(config.source);
        const auto drift = qsim::PhaseDriftProfile::linear(q.theta_max, config.num_bins);
        const auto axes = q.axes == AxesSet::PauliContexts ? qsim::pauli_contexts() : qsim::chsh_optimal_contexts();
        const auto noise = q.noise();
        const auto indices = schedule::drift_indices(sched, rule);
        const auto singlet = qsim::prepare_singlet();
        counts.num_bins = config.num_bins;
        counts.shots_per_bin = config.shots_per_bin;
        for (std::size_t pos = 0; pos < sched.slots.size(); ++pos) {
            const auto &slot = sched.slots[pos];
            const auto &[axis_a, axis_b] = axes[index_of(slot.context)];
            const auto state = qsim::apply_drift(singlet, drift.at(indices[pos]));
            const auto dist = qsim::measure_joint(state, axis_a, axis_b, noise);
            counts.of(slot.context).push_back(
                {slot.bin, qsim::sample_counts(dist, config.shots_per_bin, derive_seed(seed, pos))});
        }
        for (auto &cells : counts.contexts) {
            std::sort(cells.begin(), cells.end(), [](const BinCounts &a, const BinCounts &b) { return a.bin < b.bin; });
        }
    }
    counts.experiment_id = config.label.empty() ? "run" : config.label;
    return counts;
}

RunRecord analyze(const BinnedCounts &counts, const AnalysisOptions &options) {
    RunRecord record;
    record.analysis = options;
    record.counts = counts;
    with_stage("counts", [&] {
        counts.validate();
        return 0;
    });
    record.counts_hash = hash_counts(counts);

    std::array<Probabilities, 4> pooled{};
    std::array<double, 4> shots{};
    for (Context c : kContexts) {
        const auto pc = counts.pooled(c);
        if (total(pc) == 0) {
            throw ValidationError("counts: context " + std::string(context_label(c)) + " has no shots");
        }
        pooled[index_of(c)] = frequencies(pc);
        shots[index_of(c)] = static_cast<double>(total(pc));
    }

    const std::string schedule_label =
        options.schedule ? std::string(schedule::kind_name(options.schedule->kind)) : std::string("unknown");

    record.raw = with_stage("raw analysis", [&] {
        VersionedReports r;
        r.drift = stats::drift_report(counts, options.null_trials, derive_seed(options.seed, kRawDriftStream), {},
                                      options.bootstrap_replicates, options.threads);
        r.chsh = chsh_from(pooled, shots);
        r.chsh.schedule = schedule_label;
        r.no_signaling = stats::no_signaling_test(pooled, shots);
        return r;
    });

    if (options.calibration) {
        const auto &m = *options.calibration;
        const double max_condition = options.max_condition;
        record.mitigated = with_stage("mitigation", [&] {
            auto bins = mitigation::mitigate_binned(counts, m, max_condition);
            record.mitigated_frequencies = bins.frequencies;
            record.clipped_cells = bins.clipped_cells;
            stats::BinTransform transform = [m, max_condition](const Counts &c) {
                return mitigation::mitigate(c, m, max_condition).probs;
            };
            std::array<Probabilities, 4> mitigated_pooled{};
            for (Context c : kContexts) {
                mitigated_pooled[index_of(c)] = mitigation::mitigate(pooled[index_of(c)], m, max_condition).probs;
            }
            VersionedReports r;
            r.drift = stats::drift_report(counts, options.null_trials, derive_seed(options.seed, kMitigatedDriftStream),
                                          transform, options.bootstrap_replicates, options.threads);
            r.chsh = chsh_from(mitigated_pooled, shots);
            r.chsh.mitigated = true;
            r.chsh.schedule = schedule_label;
            r.no_signaling = stats::no_signaling_test(mitigated_pooled, shots);
            return r;
        });
    }

    if (options.schedule) {
        const auto rule = options.drift_rule.value_or(schedule::default_rule(options.schedule->kind));
        record.exposure = with_stage("exposure", [&] { return schedule::exposure(*options.schedule, rule); });
    }
    std::optional<double> delta_sched = options.delta_sched;
    if (!delta_sched && record.exposure) {
        delta_sched = record.exposure->delta_sched;
    }
    if (delta_sched) {
        const auto &reports = record.mitigated ? *record.mitigated : record.raw;
        record.certificate = with_stage("bounds", [&] {
            return bell::certify(reports.chsh.S, *delta_sched, reports.drift.observed.global);
        });
    }
    return record;
}

RunRecord run_experiment(const ExperimentConfig &config) {
    const auto start = std::chrono::steady_clock::now();
    with_stage("config", [&] {
        config.validate();
        return 0;
    });
    const auto counts = with_stage("generate", [&] { return generate_counts(config); });

    AnalysisOptions options;
    options.label = config.label;
    options.null_trials = config.null_trials;
    options.bootstrap_replicates = config.bootstrap_replicates;
    options.seed = derive_seed(config.root_seed(), kAnalysisStream);
    options.threads = config.threads;
    options.max_condition = config.max_condition;
    options.schedule = schedule::make_schedule(config.schedule, config.num_bins);
    options.drift_rule = config.effective_rule();
    if (const auto *q = std::get_if<QuantumSource>(&config.source)) {
        options.axes = std::string(axes_name(q->axes));
        if (config.mitigation) {
            const auto noise = q->noise();
            options.calibration = with_stage("calibration", [&] {
                return config.calibration_shots == 0
                           ? mitigation::calibrate_exact(noise)
                           : mitigation::calibrate(noise, config.calibration_shots,
                                                   derive_seed(config.root_seed(), kCalibrationStream));
            });
        }
    } else {
        options.axes = "lhv";
        if (config.mitigation) {
            options.calibration = mitigation::AssignmentMatrix::identity();
        }
    }

    auto record = analyze(counts, options);
    record.config = config;

    if (const auto *l = std::get_if<LhvSource>(&config.source)) {
        record.model = with_stage("model", [&] {
            const auto profile = l->make_profile(config.num_bins);
            const auto &sched = *options.schedule;
            const auto ens = lhv::time_averaged_ensembles(profile, sched, *options.drift_rule);
            ModelDivergence m;
            m.mean_weights = lhv::mean_weights(profile, sched, *options.drift_rule);
            m.delta_ens_lambda = lhv::model_delta_ens(ens);
            m.delta_ens_outcome = lhv::outcome_delta_ens(ens);
            double s = 0.0;
            for (Context c : kContexts) {
                s += chsh_sign(c) * lhv::analytic_correlator(c, m.mean_weights[index_of(c)]);
            }
            m.analytic_S = s;
            return m;
        });
    }
    record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

bool verify_record(const RunRecord &record) { return hash_counts(record.counts) == record.counts_hash; }

std::string significance_stars(double p) {
    if (p < 1e-3) {
        return "***";
    }
    if (p < 0.01) {
        return "**";
    }
    if (p < 0.05) {
        return "*";
    }
    return "";
}

std::vector<BinScanRow> bin_scan(const ExperimentConfig &tmpl, std::span<const int> bins,
                                 std::span<const double> theta_max_values,
                                 std::span<const schedule::Kind> schedules) {
    if (bins.empty() || theta_max_values.empty() || schedules.empty()) {
        throw ValidationError("bin scan needs nonempty bin, theta_max and schedule lists");
    }
    if (!std::holds_alternative<QuantumSource>(tmpl.source)) {
        throw ValidationError("bin scan needs a quantum source");
    }
    const auto root = tmpl.root_seed();
    std::vector<BinScanRow> rows;
    for (double theta : theta_max_values) {
        for (auto kind : schedules) {
            for (int b : bins) {
                auto cfg = tmpl;
                cfg.num_bins = b;
                cfg.schedule = kind;
                cfg.drift_rule.reset();
                std::get<QuantumSource>(cfg.source).theta_max = theta;
                cfg.seed = derive_seed(root, static_cast<std::uint64_t>(b) * 4 + static_cast<std::uint64_t>(kind),
                                       std::bit_cast<std::uint64_t>(theta));
                const auto record = run_experiment(cfg);
                const auto &drift = record.mitigated ? record.mitigated->drift : record.raw.drift;
                BinScanRow row;
                row.num_bins = b;
                row.theta_max = theta;
                row.schedule = kind;
                row.observed = drift.observed.global;
                row.observed_std = drift.observed_global_std;
                row.null_mean = drift.global_null.mean;
                row.null_std = drift.global_null.std;
                row.null_q99 = drift.global_null.q99;
                row.p_value = drift.global_null.p_value;
                row.stars = significance_stars(row.p_value);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

}  // namespace belldrift::harness
