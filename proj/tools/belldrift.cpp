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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "belldrift/harness.hpp"
#include "belldrift/io.hpp"
#include "belldrift/mitigation.hpp"
#include "belldrift/report.hpp"
#include "belldrift/stats.hpp"

using namespace belldrift;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

/// Config keys as flags. Flags given on the command line override a --config file.
struct ConfigFlags {
    std::string config_path;
    std::string label;
    std::string source = "quantum";
    double theta_max = 0.0;
    double depolarizing = 0.0;
    std::vector<double> readout_flips;
    std::string axes = "pauli";
    std::string profile = "constant";
    double p = 0.0;
    double p_lo = 0.0;
    double p_hi = 0.0;
    std::string schedule = "round-robin";
    int num_bins = 0;
    std::uint64_t shots = 0;
    int null_trials = stats::kDefaultNullTrials;
    int bootstrap = stats::kDefaultBootstrapReplicates;
    std::uint64_t seed = 0;
    bool mitigation = false;
    std::uint64_t calibration_shots = 0;
    double max_condition = mitigation::kDefaultMaxCondition;
    std::string drift_rule;
    unsigned threads = 1;

    std::map<std::string, CLI::Option *> opts;

    void add_to(CLI::App *app) {
        opts["config"] = app->add_option("--config", config_path, "JSON config file; flags override its keys")
                             ->check(CLI::ExistingFile);
        opts["label"] = app->add_option("--label", label, "experiment label");
        opts["source"] = app->add_option("--source", source, "quantum | lhv");
        opts["theta_max"] = app->add_option("--theta-max", theta_max, "final phase-drift angle (quantum)");
        opts["depolarizing_rate"] = app->add_option("--depolarizing-rate", depolarizing, "depolarizing rate (quantum)");
        opts["readout_flips"] =
            app->add_option("--readout-flips", readout_flips, "symmetric readout flip rates EPS_A EPS_B (quantum)")
                ->expected(2)
                ->delimiter(',');
        opts["axes"] = app->add_option("--axes", axes, "pauli | chsh-optimal (quantum)");
        opts["profile"] = app->add_option("--profile", profile, "constant | linear-ramp (lhv)");
        opts["p"] = app->add_option("--p", p, "mixture weight for a constant profile (lhv)");
        opts["p_lo"] = app->add_option("--p-lo", p_lo, "first-bin weight of a linear ramp (lhv)");
        opts["p_hi"] = app->add_option("--p-hi", p_hi, "last-bin weight of a linear ramp (lhv)");
        opts["schedule"] = app->add_option("--schedule", schedule, "round-robin | blocked");
        opts["num_bins"] = app->add_option("--num-bins", num_bins, "temporal bins K");
        opts["shots_per_bin"] = app->add_option("--shots-per-bin", shots, "shots per (context, bin)");
        opts["null_trials"] = app->add_option("--null-trials", null_trials, "Monte-Carlo null trials");
        opts["bootstrap_replicates"] = app->add_option("--bootstrap-replicates", bootstrap, "bootstrap replicates");
        opts["seed"] = app->add_option("--seed", seed, "root seed (required)");
        opts["mitigation"] = app->add_flag("--mitigation", mitigation, "mitigate readout per bin");
        opts["calibration_shots"] =
            app->add_option("--calibration-shots", calibration_shots, "shots per basis state; 0 = exact calibration");
        opts["max_condition"] = app->add_option("--max-condition", max_condition, "condition-number gate");
        opts["drift_rule"] = app->add_option("--drift-rule", drift_rule, "per-bin | per-slot");
        opts["threads"] = app->add_option("--threads", threads, "worker threads");
    }

    bool given(const std::string &key) const { return opts.at(key)->count() > 0; }

    /// `fallback_bins` fills num_bins when neither a flag nor the config file sets it.
    harness::ExperimentConfig build(std::optional<int> fallback_bins = std::nullopt) const {
        nlohmann::json j = nlohmann::json::object();
        if (given("config")) {
            j = io::config_to_json(io::read_config(config_path));
        } else {
            j["source"] = {{"type", source}};
        }
        if (!given("seed") && !j.contains("seed")) {
            throw ValidationError("--seed is required");
        }
        auto &s = j["source"];
        if (given("source") && s.value("type", std::string()) != source) {
            s = {{"type", source}};
        }
        const bool quantum = s.value("type", std::string()) == "quantum";
        if (quantum) {
            if (given("theta_max") || !s.contains("theta_max")) s["theta_max"] = theta_max;
            if (given("depolarizing_rate") || !s.contains("depolarizing_rate")) s["depolarizing_rate"] = depolarizing;
            if (given("axes") || !s.contains("axes")) s["axes"] = axes;
            if (given("readout_flips")) s["readout_flips"] = readout_flips;
        } else if (s.value("type", std::string()) == "lhv") {
            if (given("profile") || !s.contains("profile")) {
                s = {{"type", "lhv"}, {"profile", profile}};
            }
            if (s["profile"] == "constant") {
                if (given("p") || !s.contains("p")) s["p"] = p;
            } else {
                if (given("p_lo") || !s.contains("p_lo")) s["p_lo"] = p_lo;
                if (given("p_hi") || !s.contains("p_hi")) s["p_hi"] = p_hi;
            }
        }
        for (const char *k : {"theta_max", "depolarizing_rate", "axes", "readout_flips"}) {
            if (!quantum && given(k)) {
                throw ValidationError(std::string("--") + k + " applies to the quantum source only");
            }
        }
        for (const char *k : {"profile", "p", "p_lo", "p_hi"}) {
            if (quantum && given(k)) {
                throw ValidationError(std::string("--") + k + " applies to the lhv source only");
            }
        }
        auto set = [&](const char *key, const nlohmann::json &value) {
            if (given(key) || !j.contains(key)) {
                j[key] = value;
            }
        };
        set("label", label);
        set("schedule", schedule);
        if (given("num_bins")) {
            j["num_bins"] = num_bins;
        } else if (fallback_bins && !j.contains("num_bins")) {
            j["num_bins"] = *fallback_bins;
        }
        if (given("shots_per_bin")) j["shots_per_bin"] = shots;
        if (given("seed")) j["seed"] = seed;
        set("null_trials", null_trials);
        set("bootstrap_replicates", bootstrap);
        set("mitigation", mitigation);
        set("calibration_shots", calibration_shots);
        set("max_condition", max_condition);
        set("threads", threads);
        if (given("drift_rule")) j["drift_rule"] = drift_rule;
        return io::config_from_json(j);
    }
};

void print_summary(const harness::RunRecord &r) {
    auto line = [](const char *name, const harness::VersionedReports &v) {
        std::printf("%-9s S = %s +- %s   delta_op_global = %s (null mean %s, p = %s)   min p_Bonf = %s\n", name,
                    report::fmt(v.chsh.S, 4).c_str(), report::fmt(v.chsh.standard_error, 4).c_str(),
                    report::fmt(v.drift.observed.global, 4).c_str(), report::fmt(v.drift.global_null.mean, 4).c_str(),
                    report::fmt(v.drift.global_null.p_value, 4).c_str(),
                    report::fmt(v.no_signaling.min_p_bonferroni, 4).c_str());
    };
    std::printf("counts_hash %s\n", r.counts_hash.c_str());
    line("raw", r.raw);
    if (r.mitigated) {
        line("mitigated", *r.mitigated);
    }
    if (r.exposure) {
        std::printf("delta_sched = %s (%s)\n", report::fmt(r.exposure->delta_sched, 4).c_str(),
                    std::string(schedule::rule_name(r.exposure->rule)).c_str());
    }
    if (r.certificate) {
        std::printf("delta_ens_min = %s   S_LHV_min = %s   verdict: %s\n",
                    report::fmt(r.certificate->delta_ens_min, 4).c_str(),
                    report::fmt(r.certificate->s_lhv_min, 4).c_str(),
                    std::string(bell::verdict_name(r.certificate->verdict)).c_str());
    }
    if (r.model) {
        std::printf("model delta_ens (lambda) = %s   (outcome) = %s\n",
                    report::fmt(r.model->delta_ens_lambda, 4).c_str(),
                    report::fmt(r.model->delta_ens_outcome, 4).c_str());
    }
}

template <typename T>
std::vector<T> parse_list(const std::string &text, const char *what) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::istringstream is(item);
        T v{};
        if (!(is >> v) || !(is >> std::ws).eof()) {
            throw ValidationError(std::string(what) + ": cannot parse '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ValidationError(std::string(what) + ": empty list");
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Drift-aware Bell-CHSH simulation and analysis"};
    app.require_subcommand(1);

    // simulate
    auto *sim = app.add_subcommand("simulate", "generate counts from a source and schedule and analyze them");
    ConfigFlags sim_flags;
    sim_flags.add_to(sim);
    std::string sim_out, sim_counts, sim_report_dir;
    bool sim_svg = false;
    sim->add_option("--out", sim_out, "write the run record (JSON)");
    sim->add_option("--counts-out", sim_counts, "write the generated counts (.csv or .json)");
    sim->add_option("--report-dir", sim_report_dir, "write CSV reports into this directory");
    sim->add_flag("--svg", sim_svg, "also render SVG figures");

    // binscan
    auto *scan = app.add_subcommand("binscan", "observed vs null delta_op^global over bins, drift and schedules");
    ConfigFlags scan_flags;
    scan_flags.add_to(scan);
    std::string scan_bins = "3,6,9,12", scan_thetas = "0,0.01,0.1", scan_schedules = "round-robin,blocked";
    std::string scan_out, scan_svg;
    scan->add_option("--bins", scan_bins, "comma-separated bin counts")->capture_default_str();
    scan->add_option("--thetas", scan_thetas, "comma-separated theta_max values")->capture_default_str();
    scan->add_option("--schedules", scan_schedules, "comma-separated schedules")->capture_default_str();
    scan->add_option("--out", scan_out, "CSV output (stdout when omitted)");
    scan->add_option("--svg", scan_svg, "render the CSV as an SVG figure");

    // analyze
    auto *an = app.add_subcommand("analyze", "analyze ingested counts");
    std::string an_counts, an_cal, an_schedule, an_rule, an_out, an_report_dir, an_label, an_axes = "unknown";
    int an_trials = stats::kDefaultNullTrials, an_boot = stats::kDefaultBootstrapReplicates;
    std::uint64_t an_seed = 0;
    unsigned an_threads = 1;
    double an_kappa = mitigation::kDefaultMaxCondition, an_delta_sched = 0.0;
    int an_cal_index = 0;
    bool an_svg = false;
    an->add_option("--counts", an_counts, "counts file (.csv or .json)")->required()->check(CLI::ExistingFile);
    an->add_option("--calibration", an_cal, "4x4 assignment matrix file")->check(CLI::ExistingFile);
    an->add_option("--calibration-index", an_cal_index, "embedded calibration to use from a JSON counts file");
    an->add_option("--schedule", an_schedule, "execution schedule of the counts: round-robin | blocked");
    an->add_option("--drift-rule", an_rule, "per-bin | per-slot");
    auto *an_ds = an->add_option("--delta-sched", an_delta_sched, "schedule-exposure factor override");
    an->add_option("--null-trials", an_trials, "Monte-Carlo null trials");
    an->add_option("--bootstrap-replicates", an_boot, "bootstrap replicates");
    an->add_option("--seed", an_seed, "seed for null and bootstrap resampling")->required();
    an->add_option("--threads", an_threads, "worker threads");
    an->add_option("--max-condition", an_kappa, "condition-number gate");
    an->add_option("--label", an_label, "dataset label");
    an->add_option("--axes", an_axes, "measurement axes label recorded with the analysis");
    an->add_option("--out", an_out, "write the run record (JSON)");
    an->add_option("--report-dir", an_report_dir, "write CSV reports into this directory");
    an->add_flag("--svg", an_svg, "also render SVG figures");

    // null
    auto *nl = app.add_subcommand("null", "standalone Monte-Carlo null of delta_op");
    std::string nl_counts, nl_probs, nl_samples;
    std::uint64_t nl_shots = 0, nl_seed = 0;
    int nl_bins = 0, nl_trials = stats::kDefaultNullTrials;
    double nl_observed = 0.0;
    unsigned nl_threads = 1;
    auto *nl_counts_opt = nl->add_option("--counts", nl_counts, "match bins, shots and pooled distributions of a counts file")
                              ->check(CLI::ExistingFile);
    auto *nl_probs_opt = nl->add_option("--probs", nl_probs, "p00,p01,p10,p11 used for every context");
    nl->add_option("--shots-per-bin", nl_shots, "shots per bin (with --probs)");
    nl->add_option("--num-bins", nl_bins, "bins per context (with --probs)");
    nl->add_option("--trials", nl_trials, "trials");
    nl->add_option("--seed", nl_seed, "seed")->required();
    nl->add_option("--threads", nl_threads, "worker threads");
    auto *nl_obs = nl->add_option("--observed", nl_observed, "observed delta_op^global for a p-value");
    nl->add_option("--samples-out", nl_samples, "write the null sample as CSV");
    nl_counts_opt->excludes(nl_probs_opt);

    // mitigate
    auto *mit = app.add_subcommand("mitigate", "readout calibration tools");
    mit->require_subcommand(1);
    auto *mcal = mit->add_subcommand("calibrate", "build an assignment matrix from symmetric readout flips");
    double mc_ea = 0.0, mc_eb = 0.0, mc_depol = 0.0;
    std::uint64_t mc_shots = 0, mc_seed = 0;
    std::string mc_out;
    mcal->add_option("--eps-a", mc_ea, "flip probability of qubit A")->required();
    mcal->add_option("--eps-b", mc_eb, "flip probability of qubit B")->required();
    mcal->add_option("--depolarizing-rate", mc_depol, "depolarizing rate during calibration");
    mcal->add_option("--shots", mc_shots, "shots per basis state; 0 = exact");
    auto *mc_seed_opt = mcal->add_option("--seed", mc_seed, "seed (required with --shots)");
    mcal->add_option("--out", mc_out, "output matrix file (stdout when omitted)");

    auto *mapply = mit->add_subcommand("apply", "mitigate every (context, bin) of a counts file");
    std::string ma_cal, ma_counts, ma_out;
    double ma_kappa = mitigation::kDefaultMaxCondition;
    mapply->add_option("--calibration", ma_cal, "matrix file")->required()->check(CLI::ExistingFile);
    mapply->add_option("--counts", ma_counts, "counts file")->required()->check(CLI::ExistingFile);
    mapply->add_option("--max-condition", ma_kappa, "condition-number gate");
    mapply->add_option("--out", ma_out, "CSV of mitigated frequencies (stdout when omitted)");

    auto *mkappa = mit->add_subcommand("kappa", "condition number of an assignment matrix");
    std::string mk_cal;
    mkappa->add_option("--calibration", mk_cal, "matrix file")->required()->check(CLI::ExistingFile);

    auto *mcmp = mit->add_subcommand("compare", "drift between two calibration snapshots");
    std::vector<std::string> mcmp_files;
    mcmp->add_option("--calibration", mcmp_files, "two matrix files")->required()->expected(2)->check(CLI::ExistingFile);

    // report
    auto *rep = app.add_subcommand("report", "render CSV tables and SVG figures from run records or a bin scan");
    std::vector<std::string> rep_records;
    std::string rep_dir = ".", rep_binscan, rep_svg_out;
    bool rep_svg = false;
    rep->add_option("--record", rep_records, "run record JSON (repeatable)")->check(CLI::ExistingFile);
    rep->add_option("--out-dir", rep_dir, "output directory");
    rep->add_flag("--svg", rep_svg, "also render SVG figures");
    rep->add_option("--binscan", rep_binscan, "bin-scan CSV to render")->check(CLI::ExistingFile);
    rep->add_option("--binscan-svg", rep_svg_out, "output path for the bin-scan figure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*sim) {
            const auto config = sim_flags.build();
            const auto record = harness::run_experiment(config);
            print_summary(record);
            if (!sim_out.empty()) io::write_record(record, sim_out);
            if (!sim_counts.empty()) io::write_counts(record.counts, sim_counts);
            if (!sim_report_dir.empty()) {
                report::write_record_report(record, sim_report_dir, record.counts.experiment_id, sim_svg);
            }
        } else if (*scan) {
            const auto bins = parse_list<int>(scan_bins, "--bins");
            const auto tmpl = scan_flags.build(bins.empty() ? std::nullopt : std::optional<int>(bins.front()));
            const auto thetas = parse_list<double>(scan_thetas, "--thetas");
            std::vector<schedule::Kind> kinds;
            for (const auto &name : parse_list<std::string>(scan_schedules, "--schedules")) {
                kinds.push_back(schedule::parse_kind(name));
            }
            const auto rows = harness::bin_scan(tmpl, bins, thetas, kinds);
            const auto csv = report::bin_scan_csv(rows);
            if (scan_out.empty()) {
                std::cout << csv;
            } else {
                io::write_text(scan_out, csv);
            }
            if (!scan_svg.empty()) io::write_text(scan_svg, report::bin_scan_svg_from_csv(csv));
        } else if (*an) {
            auto ingested = io::ingest_counts(an_counts);
            harness::AnalysisOptions opt;
            opt.label = an_label;
            opt.null_trials = an_trials;
            opt.bootstrap_replicates = an_boot;
            opt.seed = an_seed;
            opt.threads = an_threads;
            opt.max_condition = an_kappa;
            opt.axes = an_axes;
            if (!an_cal.empty()) {
                opt.calibration = io::read_calibration(an_cal);
            } else if (!ingested.calibrations.empty()) {
                if (an_cal_index < 0 || an_cal_index >= static_cast<int>(ingested.calibrations.size())) {
                    throw ValidationError("--calibration-index out of range");
                }
                opt.calibration = ingested.calibrations[an_cal_index];
            }
            if (!an_schedule.empty()) {
                opt.schedule = schedule::make_schedule(schedule::parse_kind(an_schedule), ingested.counts.num_bins);
            }
            if (!an_rule.empty()) opt.drift_rule = schedule::parse_rule(an_rule);
            if (an_ds->count() > 0) opt.delta_sched = an_delta_sched;
            const auto record = harness::analyze(ingested.counts, opt);
            print_summary(record);
            if (!an_out.empty()) io::write_record(record, an_out);
            if (!an_report_dir.empty()) {
                report::write_record_report(record, an_report_dir,
                                            an_label.empty() ? record.counts.experiment_id : an_label, an_svg);
            }
        } else if (*nl) {
            stats::NullSpec spec;
            if (nl_counts_opt->count() > 0) {
                spec = stats::null_spec_for(io::ingest_counts(nl_counts).counts);
            } else if (nl_probs_opt->count() > 0) {
                const auto p = parse_list<double>(nl_probs, "--probs");
                if (p.size() != 4) throw ValidationError("--probs needs four values");
                if (nl_shots == 0 || nl_bins < 2) {
                    throw ValidationError("--probs needs --shots-per-bin > 0 and --num-bins >= 2");
                }
                const Probabilities probs{p[0], p[1], p[2], p[3]};
                require_simplex(probs, 1e-9, "--probs");
                spec.shots_per_bin = nl_shots;
                spec.bins_per_context.fill(nl_bins);
                spec.pooled.fill(probs);
            } else {
                throw ValidationError("null needs --counts or --probs");
            }
            if (nl_trials < 1) throw ValidationError("--trials must be positive");
            const auto sample = stats::mc_null(spec, nl_trials, nl_seed, {}, nl_threads);
            const double observed = nl_obs->count() > 0 ? nl_observed : 0.0;
            const auto s = stats::summarize(observed, sample.global);
            std::printf("trials %d\nmean %s\nstd %s\nq025 %s\nq975 %s\nq99 %s\n", nl_trials,
                        report::fmt(s.mean).c_str(), report::fmt(s.std).c_str(), report::fmt(s.q025).c_str(),
                        report::fmt(s.q975).c_str(), report::fmt(s.q99).c_str());
            if (nl_obs->count() > 0) std::printf("p_value %s\n", report::fmt(s.p_value).c_str());
            if (!nl_samples.empty()) {
                std::ostringstream out;
                out << "trial,xy,xy',x'y,x'y',global\n";
                for (std::size_t t = 0; t < sample.global.size(); ++t) {
                    out << t;
                    for (const auto &pc : sample.per_context) out << ',' << report::fmt(pc[t]);
                    out << ',' << report::fmt(sample.global[t]) << '\n';
                }
                io::write_text(nl_samples, out.str());
            }
        } else if (*mit) {
            if (*mcal) {
                qsim::NoiseSpec noise;
                noise.depolarizing_rate = mc_depol;
                noise.assignment = mitigation::AssignmentMatrix::symmetric_flips(mc_ea, mc_eb);
                mitigation::AssignmentMatrix m;
                if (mc_shots == 0) {
                    m = mitigation::calibrate_exact(noise);
                } else {
                    if (mc_seed_opt->count() == 0) throw ValidationError("--seed is required with --shots");
                    m = mitigation::calibrate(noise, mc_shots, mc_seed);
                }
                if (mc_out.empty()) {
                    io::write_calibration(m, std::cout);
                } else {
                    io::write_calibration(m, std::filesystem::path(mc_out));
                }
                std::fprintf(stderr, "kappa %s\n", report::fmt(mitigation::condition_number(m)).c_str());
            } else if (*mapply) {
                const auto m = io::read_calibration(std::filesystem::path(ma_cal));
                const auto counts = io::ingest_counts(ma_counts).counts;
                const auto result = mitigation::mitigate_binned(counts, m, ma_kappa);
                std::ostringstream out;
                out << "experiment_id,context,bin,p00,p01,p10,p11\n";
                for (Context c : kContexts) {
                    for (const auto &b : result.frequencies.of(c)) {
                        out << counts.experiment_id << ',' << context_label(c) << ',' << b.bin;
                        for (double v : b.probs) out << ',' << report::fmt(v, 10);
                        out << '\n';
                    }
                }
                if (ma_out.empty()) {
                    std::cout << out.str();
                } else {
                    io::write_text(ma_out, out.str());
                }
                std::fprintf(stderr, "clipped_cells %d\n", result.clipped_cells);
            } else if (*mkappa) {
                const auto m = io::read_calibration(std::filesystem::path(mk_cal));
                std::printf("%s\n", report::fmt(mitigation::condition_number(m), 10).c_str());
            } else if (*mcmp) {
                const auto a = io::read_calibration(std::filesystem::path(mcmp_files[0]));
                const auto b = io::read_calibration(std::filesystem::path(mcmp_files[1]));
                const auto d = mitigation::compare(a, b);
                std::printf("frobenius %s\nmax_abs_entry %s\nkappa_a %s\nkappa_b %s\n", report::fmt(d.frobenius).c_str(),
                            report::fmt(d.max_abs_entry).c_str(), report::fmt(d.condition_a).c_str(),
                            report::fmt(d.condition_b).c_str());
            }
        } else if (*rep) {
            if (rep_records.empty() && rep_binscan.empty()) {
                throw ValidationError("report needs --record or --binscan");
            }
            std::vector<harness::RunRecord> records;
            for (const auto &path : rep_records) {
                records.push_back(io::read_record(path));
            }
            for (std::size_t i = 0; i < records.size(); ++i) {
                const auto stem = std::filesystem::path(rep_records[i]).stem().string();
                for (const auto &p : report::write_record_report(records[i], rep_dir, stem, rep_svg)) {
                    std::printf("%s\n", p.string().c_str());
                }
            }
            if (!records.empty()) {
                const auto t3 = std::filesystem::path(rep_dir) / "schedule_table.csv";
                const auto t4 = std::filesystem::path(rep_dir) / "nosignaling_table.csv";
                io::write_text(t3, report::schedule_table_csv(records));
                io::write_text(t4, report::no_signaling_table_csv(records));
                std::printf("%s\n%s\n", t3.string().c_str(), t4.string().c_str());
            }
            if (!rep_binscan.empty()) {
                std::ifstream in(rep_binscan);
                std::stringstream ss;
                ss << in.rdbuf();
                const auto out = rep_svg_out.empty()
                                     ? std::filesystem::path(rep_dir) /
                                           (std::filesystem::path(rep_binscan).stem().string() + ".svg")
                                     : std::filesystem::path(rep_svg_out);
                io::write_text(out, report::bin_scan_svg_from_csv(ss.str()));
                std::printf("%s\n", out.string().c_str());
            }
        }
    } catch (const NumericalError &e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const ValidationError &e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return 0;
}
