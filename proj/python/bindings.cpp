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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "belldrift/bell.hpp"
#include "belldrift/harness.hpp"
#include "belldrift/io.hpp"
#include "belldrift/lhv.hpp"
#include "belldrift/mitigation.hpp"
#include "belldrift/qsim.hpp"
#include "belldrift/report.hpp"
#include "belldrift/stats.hpp"

namespace py = pybind11;
using namespace belldrift;

namespace {

using Matrix = std::array<std::array<double, 4>, 4>;

// JSON crosses the boundary as text; the Python package wraps it with the json module.
std::string run_experiment(const std::string &config_json) {
    const auto config = io::config_from_json(nlohmann::json::parse(config_json));
    return io::record_to_json(harness::run_experiment(config)).dump();
}

std::string analyze(const std::string &counts_json, std::uint64_t seed, int null_trials, int bootstrap_replicates,
                    std::optional<Matrix> calibration, std::optional<std::string> schedule_kind,
                    std::optional<double> delta_sched, double max_condition) {
    const auto ingested = io::counts_from_json(nlohmann::json::parse(counts_json));
    harness::AnalysisOptions opt;
    opt.seed = seed;
    opt.null_trials = null_trials;
    opt.bootstrap_replicates = bootstrap_replicates;
    opt.max_condition = max_condition;
    opt.delta_sched = delta_sched;
    if (calibration) {
        opt.calibration = mitigation::AssignmentMatrix(*calibration);
    } else if (!ingested.calibrations.empty()) {
        opt.calibration = ingested.calibrations.front();
    }
    if (schedule_kind) {
        opt.schedule = schedule::make_schedule(schedule::parse_kind(*schedule_kind), ingested.counts.num_bins);
    }
    return io::record_to_json(harness::analyze(ingested.counts, opt)).dump();
}

std::string bin_scan(const std::string &config_json, const std::vector<int> &bins, const std::vector<double> &thetas,
                     const std::vector<std::string> &schedules) {
    const auto tmpl = io::config_from_json(nlohmann::json::parse(config_json));
    std::vector<schedule::Kind> kinds;
    for (const auto &s : schedules) kinds.push_back(schedule::parse_kind(s));
    return report::bin_scan_csv(harness::bin_scan(tmpl, bins, thetas, kinds));
}

py::dict mc_null(std::uint64_t shots_per_bin, int num_bins, const std::array<Probabilities, 4> &pooled, int trials,
                 std::uint64_t seed) {
    const auto sample = stats::mc_null(shots_per_bin, num_bins, pooled, trials, seed);
    py::dict out;
    out["global"] = sample.global;
    py::dict per;
    for (Context c : kContexts) per[py::str(std::string(context_label(c)))] = sample.per_context[index_of(c)];
    out["per_context"] = per;
    return out;
}

Probabilities singlet_probabilities(double angle_a, double angle_b, double theta, double depolarizing_rate) {
    qsim::NoiseSpec noise;
    noise.depolarizing_rate = depolarizing_rate;
    return qsim::measure_joint(qsim::apply_drift(qsim::prepare_singlet(), theta),
                               qsim::MeasurementAxis::plane_xz(angle_a), qsim::MeasurementAxis::plane_xz(angle_b),
                               noise);
}

py::dict certify(double S, double delta_sched, double delta_op) {
    const auto c = bell::certify(S, delta_sched, delta_op);
    py::dict out;
    out["S"] = c.S;
    out["delta_ens_min"] = c.delta_ens_min;
    out["delta_sched"] = c.delta_sched;
    out["delta_op"] = c.delta_op;
    out["s_lhv_min"] = c.s_lhv_min;
    out["hall_required_M"] = c.hall_required_M;
    out["verdict"] = std::string(bell::verdict_name(c.verdict));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "belldrift native core";

    auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    (void)validation;

    m.def("run_experiment", &run_experiment, py::arg("config_json"),
          "Run one configured experiment; returns the run record as JSON text.");
    m.def("analyze", &analyze, py::arg("counts_json"), py::arg("seed"),
          py::arg("null_trials") = stats::kDefaultNullTrials,
          py::arg("bootstrap_replicates") = stats::kDefaultBootstrapReplicates, py::arg("calibration") = py::none(),
          py::arg("schedule") = py::none(), py::arg("delta_sched") = py::none(),
          py::arg("max_condition") = mitigation::kDefaultMaxCondition,
          "Analyze counts given as JSON text; returns the run record as JSON text.");
    m.def("bin_scan", &bin_scan, py::arg("config_json"), py::arg("bins"), py::arg("thetas"), py::arg("schedules"),
          "Bin scan; returns CSV text.");

    m.def("tv_distance", [](const std::vector<double> &p, const std::vector<double> &q) {
        return stats::tv_distance(p, q);
    });
    m.def("mc_null", &mc_null, py::arg("shots_per_bin"), py::arg("num_bins"), py::arg("pooled"), py::arg("trials"),
          py::arg("seed"));
    m.def("p_value", [](double observed, const std::vector<double> &null) { return stats::p_value(observed, null); });
    m.def("two_proportion_z", [](std::uint64_t s1, std::uint64_t n1, std::uint64_t s2, std::uint64_t n2) {
        const auto t = stats::two_proportion_z(s1, n1, s2, n2);
        return py::make_tuple(t.z, t.p_value);
    });

    m.def("singlet_probabilities", &singlet_probabilities, py::arg("angle_a"), py::arg("angle_b"),
          py::arg("theta") = 0.0, py::arg("depolarizing_rate") = 0.0,
          "Outcome distribution of the singlet for X-Z plane axes after phase drift theta.");
    m.def("correlator", [](const Probabilities &p) { return qsim::correlator(p); });

    m.def("lhv_analytic_S", &lhv::analytic_S, py::arg("p"));
    m.def("lhv_delta_ens", [](double p) { return lhv::model_delta_ens(lhv::ensembles(p)); }, py::arg("p"));

    m.def("relaxed_bound", [](double d) { return bell::relaxed_bound(d).formula; }, py::arg("delta_ens"));
    m.def("schedule_aware_bound", &bell::schedule_aware_bound, py::arg("delta_sched"), py::arg("delta_op"));
    m.def("min_delta_required", &bell::min_delta_required, py::arg("S"));
    m.def("hall_bound", [](double M) { return bell::hall_bound(M).formula; }, py::arg("M"));
    m.def("hall_threshold", &bell::hall_threshold);
    m.def("certify", &certify, py::arg("S"), py::arg("delta_sched"), py::arg("delta_op"));

    m.def("symmetric_flips", [](double a, double b) { return mitigation::AssignmentMatrix::symmetric_flips(a, b).entries(); },
          py::arg("eps_a"), py::arg("eps_b"));
    m.def("condition_number", [](const Matrix &e) { return mitigation::condition_number(mitigation::AssignmentMatrix(e)); });
    m.def(
        "mitigate",
        [](const Probabilities &freqs, const Matrix &e, double max_condition) {
            const auto r = mitigation::mitigate(freqs, mitigation::AssignmentMatrix(e), max_condition);
            return py::make_tuple(r.probs, r.clipped);
        },
        py::arg("frequencies"), py::arg("matrix"), py::arg("max_condition") = mitigation::kDefaultMaxCondition);
}
