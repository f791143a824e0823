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

#include "belldrift/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace belldrift::io {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        fields.push_back(first == std::string::npos ? std::string() : field.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

std::uint64_t parse_u64(const std::string &s, const std::string &where) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw ValidationError(where + ": expected a non-negative integer, got '" + s + "'");
    }
    try {
        return std::stoull(s);
    } catch (const std::exception &) {
        throw ValidationError(where + ": integer out of range '" + s + "'");
    }
}

// Assembles records into validated BinnedCounts. Records may arrive in any order.
struct CountsBuilder {
    std::string experiment_id;
    std::optional<std::uint64_t> shots;
    std::set<std::pair<std::size_t, int>> seen;
    BinnedCounts counts;

    void add(const std::string &where, const std::string &id, const std::string &context_label, std::uint64_t bin,
             const Counts &c, std::uint64_t record_shots) {
        if (experiment_id.empty()) {
            experiment_id = id;
        } else if (id != experiment_id) {
            throw ValidationError(where + ": experiment_id '" + id + "' differs from '" + experiment_id + "'");
        }
        Context ctx;
        try {
            ctx = parse_context(context_label);
        } catch (const ValidationError &e) {
            throw ValidationError(where + ": " + e.what());
        }
        if (bin < 1 || bin > 1000000) {
            throw ValidationError(where + ": bin must be a 1-based index");
        }
        const std::string cell = " (context " + context_label + ", bin " + std::to_string(bin) + ")";
        if (total(c) != record_shots) {
            throw ValidationError(where + cell + ": counts sum to " + std::to_string(total(c)) + " but shots is " +
                                  std::to_string(record_shots));
        }
        if (!shots) {
            shots = record_shots;
        } else if (*shots != record_shots) {
            throw ValidationError(where + cell + ": shots " + std::to_string(record_shots) +
                                  " differs from shots per bin " + std::to_string(*shots));
        }
        if (!seen.insert({index_of(ctx), static_cast<int>(bin)}).second) {
            throw ValidationError(where + cell + ": duplicate record");
        }
        counts.of(ctx).push_back({static_cast<int>(bin), c});
        counts.num_bins = std::max(counts.num_bins, static_cast<int>(bin));
    }

    BinnedCounts finish() {
        if (!shots) {
            throw ValidationError("counts file contains no records");
        }
        counts.experiment_id = experiment_id;
        counts.shots_per_bin = *shots;
        for (auto &cells : counts.contexts) {
            std::sort(cells.begin(), cells.end(), [](const BinCounts &a, const BinCounts &b) { return a.bin < b.bin; });
        }
        counts.validate();
        return counts;
    }
};

json summary_to_json(const stats::NullSummary &s) {
    return {{"mean", s.mean}, {"std", s.std}, {"q025", s.q025}, {"q975", s.q975}, {"q99", s.q99}, {"p_value", s.p_value}};
}

stats::NullSummary summary_from_json(const json &j) {
    return {j.at("mean").get<double>(), j.at("std").get<double>(),  j.at("q025").get<double>(),
            j.at("q975").get<double>(), j.at("q99").get<double>(), j.at("p_value").get<double>()};
}

json versioned_to_json(const harness::VersionedReports &r) {
    json drift = {{"delta_op", r.drift.observed.per_context},
                  {"delta_op_global", r.drift.observed.global},
                  {"observed_global_std", r.drift.observed_global_std},
                  {"num_null_trials", r.drift.num_null_trials},
                  {"mitigated", r.drift.mitigated},
                  {"global_null", summary_to_json(r.drift.global_null)}};
    drift["per_context_null"] = json::array();
    for (const auto &s : r.drift.per_context_null) {
        drift["per_context_null"].push_back(summary_to_json(s));
    }

    json chsh = {{"S", r.chsh.S},
                 {"standard_error", r.chsh.standard_error},
                 {"mitigated", r.chsh.mitigated},
                 {"schedule", r.chsh.schedule}};
    chsh["correlators"] = json::array();
    for (const auto &e : r.chsh.correlators) {
        chsh["correlators"].push_back({{"value", e.value}, {"standard_error", e.standard_error}});
    }

    json ns = {{"max_abs_marginal_deviation", r.no_signaling.max_abs_marginal_deviation},
               {"min_p", r.no_signaling.min_p},
               {"min_p_bonferroni", r.no_signaling.min_p_bonferroni}};
    ns["comparisons"] = json::array();
    for (const auto &c : r.no_signaling.comparisons) {
        ns["comparisons"].push_back({{"party", std::string(1, c.party)},
                                     {"first", context_label(c.first)},
                                     {"second", context_label(c.second)},
                                     {"difference", c.test.difference},
                                     {"z", c.test.z},
                                     {"p_value", c.test.p_value},
                                     {"exact", c.test.exact}});
    }
    return {{"drift", drift}, {"chsh", chsh}, {"no_signaling", ns}};
}

harness::VersionedReports versioned_from_json(const json &j) {
    harness::VersionedReports r;
    const auto &d = j.at("drift");
    r.drift.observed.per_context = d.at("delta_op").get<std::array<double, 4>>();
    r.drift.observed.global = d.at("delta_op_global").get<double>();
    r.drift.observed_global_std = d.at("observed_global_std").get<double>();
    r.drift.num_null_trials = d.at("num_null_trials").get<int>();
    r.drift.mitigated = d.at("mitigated").get<bool>();
    r.drift.global_null = summary_from_json(d.at("global_null"));
    for (std::size_t i = 0; i < 4; ++i) {
        r.drift.per_context_null[i] = summary_from_json(d.at("per_context_null").at(i));
    }

    const auto &c = j.at("chsh");
    for (std::size_t i = 0; i < 4; ++i) {
        const auto &e = c.at("correlators").at(i);
        r.chsh.correlators[i] = {e.at("value").get<double>(), e.at("standard_error").get<double>()};
    }
    r.chsh.S = c.at("S").get<double>();
    r.chsh.standard_error = c.at("standard_error").get<double>();
    r.chsh.mitigated = c.at("mitigated").get<bool>();
    r.chsh.schedule = c.at("schedule").get<std::string>();
    r.chsh.validate();

    const auto &n = j.at("no_signaling");
    r.no_signaling.max_abs_marginal_deviation = n.at("max_abs_marginal_deviation").get<double>();
    r.no_signaling.min_p = n.at("min_p").get<double>();
    r.no_signaling.min_p_bonferroni = n.at("min_p_bonferroni").get<double>();
    for (std::size_t i = 0; i < 4; ++i) {
        const auto &cmp = n.at("comparisons").at(i);
        auto &out = r.no_signaling.comparisons[i];
        out.party = cmp.at("party").get<std::string>().at(0);
        out.first = parse_context(cmp.at("first").get<std::string>());
        out.second = parse_context(cmp.at("second").get<std::string>());
        out.test = {cmp.at("difference").get<double>(), cmp.at("z").get<double>(), cmp.at("p_value").get<double>(),
                    cmp.at("exact").get<bool>()};
    }
    return r;
}

json matrix_to_json(const mitigation::AssignmentMatrix &m) { return m.entries(); }

mitigation::AssignmentMatrix matrix_from_json(const json &j) {
    return mitigation::AssignmentMatrix(j.get<mitigation::AssignmentMatrix::Entries>());
}

json schedule_to_json(const schedule::Schedule &s) {
    json slots = json::array();
    for (const auto &slot : s.slots) {
        slots.push_back({context_label(slot.context), slot.bin});
    }
    return {{"kind", schedule::kind_name(s.kind)}, {"num_bins", s.num_bins}, {"slots", slots}};
}

schedule::Schedule schedule_from_json(const json &j) {
    schedule::Schedule s;
    s.kind = schedule::parse_kind(j.at("kind").get<std::string>());
    s.num_bins = j.at("num_bins").get<int>();
    for (const auto &slot : j.at("slots")) {
        s.slots.push_back({parse_context(slot.at(0).get<std::string>()), slot.at(1).get<int>()});
    }
    s.validate();
    return s;
}

json frequencies_to_json(const BinnedFrequencies &f) {
    json out = {{"num_bins", f.num_bins}, {"records", json::array()}};
    for (Context c : kContexts) {
        for (const auto &b : f.of(c)) {
            out["records"].push_back({{"context", context_label(c)}, {"bin", b.bin}, {"probs", b.probs}});
        }
    }
    return out;
}

BinnedFrequencies frequencies_from_json(const json &j) {
    BinnedFrequencies f;
    f.num_bins = j.at("num_bins").get<int>();
    for (const auto &r : j.at("records")) {
        f.of(parse_context(r.at("context").get<std::string>()))
            .push_back({r.at("bin").get<int>(), r.at("probs").get<Probabilities>()});
    }
    return f;
}

template <typename T>
json optional_to_json(const std::optional<T> &v) {
    return v ? json(*v) : json(nullptr);
}

void reject_unknown_keys(const json &j, std::initializer_list<std::string_view> allowed, const std::string &where) {
    for (const auto &[key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ValidationError(where + ": unknown key '" + key + "'");
        }
    }
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::filesystem::path &path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error &e) {
        throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

}  // namespace

void write_counts_csv(const BinnedCounts &counts, std::ostream &out) {
    out << "experiment_id,context,bin,n00,n01,n10,n11,shots\n";
    for (Context c : kContexts) {
        for (const auto &b : counts.of(c)) {
            out << counts.experiment_id << ',' << context_label(c) << ',' << b.bin << ',' << b.counts[0] << ','
                << b.counts[1] << ',' << b.counts[2] << ',' << b.counts[3] << ',' << total(b.counts) << '\n';
        }
    }
}

BinnedCounts read_counts_csv(std::istream &in) {
    static const std::vector<std::string> kHeader = {"experiment_id", "context", "bin", "n00",
                                                     "n01",           "n10",     "n11", "shots"};
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    CountsBuilder builder;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') {
            continue;
        }
        const auto fields = split_csv_line(line);
        const std::string where = "line " + std::to_string(line_no);
        if (!header_seen) {
            if (fields != kHeader) {
                throw ValidationError(where + ": expected header experiment_id,context,bin,n00,n01,n10,n11,shots");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != kHeader.size()) {
            throw ValidationError(where + ": expected 8 fields, found " + std::to_string(fields.size()));
        }
        Counts c{};
        for (std::size_t i = 0; i < 4; ++i) {
            c[i] = parse_u64(fields[3 + i], where + " field " + kHeader[3 + i]);
        }
        builder.add(where, fields[0], fields[1], parse_u64(fields[2], where + " field bin"), c,
                    parse_u64(fields[7], where + " field shots"));
    }
    if (!header_seen) {
        throw ValidationError("counts CSV is empty");
    }
    return builder.finish();
}

json counts_to_json(const BinnedCounts &counts, const std::vector<mitigation::AssignmentMatrix> &cal) {
    json j = {{"experiment_id", counts.experiment_id},
              {"num_bins", counts.num_bins},
              {"shots_per_bin", counts.shots_per_bin},
              {"records", json::array()}};
    for (Context c : kContexts) {
        for (const auto &b : counts.of(c)) {
            j["records"].push_back(
                {{"context", context_label(c)}, {"bin", b.bin}, {"counts", b.counts}, {"shots", total(b.counts)}});
        }
    }
    if (!cal.empty()) {
        j["calibration"] = json::array();
        for (const auto &m : cal) {
            j["calibration"].push_back(matrix_to_json(m));
        }
    }
    return j;
}

IngestedCounts counts_from_json(const json &j) {
    if (!j.is_object()) {
        throw ValidationError("counts JSON must be an object");
    }
    reject_unknown_keys(j, {"experiment_id", "num_bins", "shots_per_bin", "records", "calibration"}, "counts JSON");
    if (!j.contains("records") || !j.at("records").is_array()) {
        throw ValidationError("counts JSON: missing 'records' array");
    }
    IngestedCounts out;
    CountsBuilder builder;
    const std::string id = j.value("experiment_id", std::string("run"));
    std::size_t index = 0;
    for (const auto &r : j.at("records")) {
        const std::string where = "record " + std::to_string(index++);
        try {
            reject_unknown_keys(r, {"experiment_id", "context", "bin", "counts", "shots"}, where);
            const auto c = r.at("counts").get<std::vector<std::uint64_t>>();
            if (c.size() != 4) {
                throw ValidationError(where + ": 'counts' must have 4 entries");
            }
            builder.add(where, r.value("experiment_id", id), r.at("context").get<std::string>(),
                        r.at("bin").get<std::uint64_t>(), Counts{c[0], c[1], c[2], c[3]},
                        r.at("shots").get<std::uint64_t>());
        } catch (const json::exception &e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
    out.counts = builder.finish();
    if (j.contains("num_bins")) {
        const int declared = j.at("num_bins").get<int>();
        if (declared < out.counts.num_bins) {
            throw ValidationError("counts JSON: num_bins " + std::to_string(declared) + " is below the largest bin " +
                                  std::to_string(out.counts.num_bins));
        }
        out.counts.num_bins = declared;
    }
    if (j.contains("shots_per_bin") && j.at("shots_per_bin").get<std::uint64_t>() != out.counts.shots_per_bin) {
        throw ValidationError("counts JSON: shots_per_bin disagrees with the records");
    }
    if (j.contains("calibration")) {
        std::size_t k = 0;
        for (const auto &m : j.at("calibration")) {
            try {
                out.calibrations.push_back(matrix_from_json(m));
            } catch (const std::exception &e) {
                throw ValidationError("calibration " + std::to_string(k) + ": " + e.what());
            }
            ++k;
        }
    }
    return out;
}

IngestedCounts ingest_counts(const std::filesystem::path &path) {
    if (path.extension() == ".json") {
        return counts_from_json(parse_json_file(path));
    }
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path.string() + "'");
    }
    try {
        return {read_counts_csv(in), {}};
    } catch (const ValidationError &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_counts(const BinnedCounts &counts, const std::filesystem::path &path) {
    if (path.extension() == ".json") {
        write_text(path, counts_to_json(counts).dump(2) + "\n");
        return;
    }
    std::ostringstream out;
    write_counts_csv(counts, out);
    write_text(path, out.str());
}

mitigation::AssignmentMatrix read_calibration(std::istream &in) {
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::string token;
        while (ss >> token) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(token, &used));
                if (used != token.size()) {
                    throw std::invalid_argument(token);
                }
            } catch (const std::exception &) {
                throw ValidationError("calibration line " + std::to_string(line_no) + ": '" + token +
                                      "' is not a number");
            }
        }
    }
    if (values.size() != 16) {
        throw ValidationError("calibration matrix needs 16 entries (4x4 row-major), found " +
                              std::to_string(values.size()));
    }
    mitigation::AssignmentMatrix::Entries e{};
    for (std::size_t i = 0; i < 16; ++i) {
        e[i / 4][i % 4] = values[i];
    }
    return mitigation::AssignmentMatrix(e);
}

mitigation::AssignmentMatrix read_calibration(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path.string() + "'");
    }
    try {
        return read_calibration(in);
    } catch (const ValidationError &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_calibration(const mitigation::AssignmentMatrix &m, std::ostream &out) {
    out << "# assignment matrix M[x][y] = P(meas = x | prep = y), rows x = 00,01,10,11\n";
    out.precision(17);
    for (const auto &row : m.entries()) {
        out << row[0] << ' ' << row[1] << ' ' << row[2] << ' ' << row[3] << '\n';
    }
}

void write_calibration(const mitigation::AssignmentMatrix &m, const std::filesystem::path &path) {
    std::ostringstream out;
    write_calibration(m, out);
    write_text(path, out.str());
}

json config_to_json(const harness::ExperimentConfig &config) {
    json source;
    if (const auto *q = std::get_if<harness::QuantumSource>(&config.source)) {
        source = {{"type", "quantum"},
                  {"theta_max", q->theta_max},
                  {"depolarizing_rate", q->depolarizing_rate},
                  {"axes", harness::axes_name(q->axes)}};
        source["readout_flips"] =
            q->readout_flips ? json::array({q->readout_flips->first, q->readout_flips->second}) : json(nullptr);
    } else {
        const auto &l = std::get<harness::LhvSource>(config.source);
        if (l.profile == lhv::PProfile::Kind::Constant) {
            source = {{"type", "lhv"}, {"profile", "constant"}, {"p", l.p_lo}};
        } else {
            source = {{"type", "lhv"}, {"profile", "linear-ramp"}, {"p_lo", l.p_lo}, {"p_hi", l.p_hi}};
        }
    }
    json j = {{"label", config.label},
              {"source", source},
              {"schedule", schedule::kind_name(config.schedule)},
              {"num_bins", config.num_bins},
              {"shots_per_bin", config.shots_per_bin},
              {"null_trials", config.null_trials},
              {"bootstrap_replicates", config.bootstrap_replicates},
              {"seed", optional_to_json(config.seed)},
              {"mitigation", config.mitigation},
              {"calibration_shots", config.calibration_shots},
              {"max_condition", config.max_condition},
              {"threads", config.threads}};
    j["drift_rule"] = config.drift_rule ? json(schedule::rule_name(*config.drift_rule)) : json(nullptr);
    return j;
}

harness::ExperimentConfig config_from_json(const json &j) {
    if (!j.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    reject_unknown_keys(j,
                        {"label", "source", "schedule", "num_bins", "shots_per_bin", "null_trials",
                         "bootstrap_replicates", "seed", "mitigation", "calibration_shots", "max_condition",
                         "drift_rule", "threads"},
                        "config");
    harness::ExperimentConfig c;
    try {
        for (const char *key : {"source", "num_bins", "shots_per_bin", "seed"}) {
            if (!j.contains(key) || j.at(key).is_null()) {
                throw ValidationError(std::string("config: missing required key '") + key + "'");
            }
        }
        c.label = j.value("label", std::string());
        const auto &s = j.at("source");
        const auto type = s.at("type").get<std::string>();
        if (type == "quantum") {
            reject_unknown_keys(s, {"type", "theta_max", "depolarizing_rate", "axes", "readout_flips"}, "config.source");
            harness::QuantumSource q;
            q.theta_max = s.value("theta_max", 0.0);
            q.depolarizing_rate = s.value("depolarizing_rate", 0.0);
            q.axes = harness::parse_axes(s.value("axes", std::string("pauli")));
            if (s.contains("readout_flips") && !s.at("readout_flips").is_null()) {
                const auto f = s.at("readout_flips").get<std::array<double, 2>>();
                q.readout_flips = std::pair{f[0], f[1]};
            }
            c.source = q;
        } else if (type == "lhv") {
            reject_unknown_keys(s, {"type", "profile", "p", "p_lo", "p_hi"}, "config.source");
            harness::LhvSource l;
            const auto profile = s.value("profile", std::string("constant"));
            if (profile == "constant") {
                l.profile = lhv::PProfile::Kind::Constant;
                l.p_lo = l.p_hi = s.at("p").get<double>();
            } else if (profile == "linear-ramp") {
                l.profile = lhv::PProfile::Kind::LinearRamp;
                l.p_lo = s.at("p_lo").get<double>();
                l.p_hi = s.at("p_hi").get<double>();
            } else {
                throw ValidationError("config.source.profile: unknown profile '" + profile + "'");
            }
            c.source = l;
        } else {
            throw ValidationError("config.source.type: unknown source '" + type + "' (expected quantum or lhv)");
        }
        c.schedule = schedule::parse_kind(j.value("schedule", std::string("round-robin")));
        c.num_bins = j.at("num_bins").get<int>();
        c.shots_per_bin = j.at("shots_per_bin").get<std::uint64_t>();
        c.null_trials = j.value("null_trials", stats::kDefaultNullTrials);
        c.bootstrap_replicates = j.value("bootstrap_replicates", stats::kDefaultBootstrapReplicates);
        c.seed = j.at("seed").get<std::uint64_t>();
        c.mitigation = j.value("mitigation", false);
        c.calibration_shots = j.value("calibration_shots", std::uint64_t{0});
        c.max_condition = j.value("max_condition", mitigation::kDefaultMaxCondition);
        c.threads = j.value("threads", 1u);
        if (j.contains("drift_rule") && !j.at("drift_rule").is_null()) {
            c.drift_rule = schedule::parse_rule(j.at("drift_rule").get<std::string>());
        }
    } catch (const json::exception &e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

harness::ExperimentConfig read_config(const std::filesystem::path &path) { return config_from_json(parse_json_file(path)); }

json record_to_json(const harness::RunRecord &r, bool include_timing) {
    const auto &a = r.analysis;
    json analysis = {{"label", a.label},
                     {"null_trials", a.null_trials},
                     {"bootstrap_replicates", a.bootstrap_replicates},
                     {"seed", a.seed},
                     {"threads", a.threads},
                     {"max_condition", a.max_condition},
                     {"axes", a.axes},
                     {"delta_sched", optional_to_json(a.delta_sched)}};
    analysis["calibration"] = a.calibration ? matrix_to_json(*a.calibration) : json(nullptr);
    analysis["schedule"] = a.schedule ? schedule_to_json(*a.schedule) : json(nullptr);
    analysis["drift_rule"] = a.drift_rule ? json(schedule::rule_name(*a.drift_rule)) : json(nullptr);

    json j = {{"config", r.config ? config_to_json(*r.config) : json(nullptr)},
              {"analysis", analysis},
              {"counts", counts_to_json(r.counts)},
              {"counts_hash", r.counts_hash},
              {"raw", versioned_to_json(r.raw)},
              {"clipped_cells", r.clipped_cells}};
    j["mitigated"] = r.mitigated ? versioned_to_json(*r.mitigated) : json(nullptr);
    j["mitigated_frequencies"] = r.mitigated_frequencies ? frequencies_to_json(*r.mitigated_frequencies) : json(nullptr);
    if (r.exposure) {
        j["exposure"] = {{"rule", schedule::rule_name(r.exposure->rule)},
                         {"occupancy", r.exposure->occupancy},
                         {"delta_sched", r.exposure->delta_sched}};
    } else {
        j["exposure"] = nullptr;
    }
    if (r.certificate) {
        const auto &c = *r.certificate;
        j["certificate"] = {{"S", c.S},
                            {"delta_ens_min", c.delta_ens_min},
                            {"delta_sched", c.delta_sched},
                            {"delta_op", c.delta_op},
                            {"s_lhv_min", c.s_lhv_min},
                            {"relaxed_bound_at_delta_op", c.relaxed_at_delta_op.formula},
                            {"relaxed_bound_at_delta_op_clamped", c.relaxed_at_delta_op.clamped},
                            {"hall_required_M", c.hall_required_M},
                            {"hall_bound_at_required", c.hall_at_required.formula},
                            {"verdict", bell::verdict_name(c.verdict)}};
    } else {
        j["certificate"] = nullptr;
    }
    if (r.model) {
        j["model"] = {{"mean_weights", r.model->mean_weights},
                      {"delta_ens_lambda", r.model->delta_ens_lambda},
                      {"delta_ens_outcome", r.model->delta_ens_outcome},
                      {"analytic_S", r.model->analytic_S}};
    } else {
        j["model"] = nullptr;
    }
    if (include_timing) {
        j["wall_seconds"] = r.wall_seconds;
    }
    return j;
}

harness::RunRecord record_from_json(const json &j) {
    harness::RunRecord r;
    try {
        if (!j.at("config").is_null()) {
            r.config = config_from_json(j.at("config"));
        }
        const auto &a = j.at("analysis");
        r.analysis.label = a.at("label").get<std::string>();
        r.analysis.null_trials = a.at("null_trials").get<int>();
        r.analysis.bootstrap_replicates = a.at("bootstrap_replicates").get<int>();
        r.analysis.seed = a.at("seed").get<std::uint64_t>();
        r.analysis.threads = a.at("threads").get<unsigned>();
        r.analysis.max_condition = a.at("max_condition").get<double>();
        r.analysis.axes = a.at("axes").get<std::string>();
        if (!a.at("delta_sched").is_null()) {
            r.analysis.delta_sched = a.at("delta_sched").get<double>();
        }
        if (!a.at("calibration").is_null()) {
            r.analysis.calibration = matrix_from_json(a.at("calibration"));
        }
        if (!a.at("schedule").is_null()) {
            r.analysis.schedule = schedule_from_json(a.at("schedule"));
        }
        if (!a.at("drift_rule").is_null()) {
            r.analysis.drift_rule = schedule::parse_rule(a.at("drift_rule").get<std::string>());
        }
        r.counts = counts_from_json(j.at("counts")).counts;
        r.counts_hash = j.at("counts_hash").get<std::string>();
        r.raw = versioned_from_json(j.at("raw"));
        r.clipped_cells = j.at("clipped_cells").get<int>();
        if (!j.at("mitigated").is_null()) {
            r.mitigated = versioned_from_json(j.at("mitigated"));
        }
        if (!j.at("mitigated_frequencies").is_null()) {
            r.mitigated_frequencies = frequencies_from_json(j.at("mitigated_frequencies"));
        }
        if (!j.at("exposure").is_null()) {
            const auto &e = j.at("exposure");
            schedule::ExposureReport rep;
            rep.rule = schedule::parse_rule(e.at("rule").get<std::string>());
            rep.occupancy = e.at("occupancy").get<std::array<std::vector<double>, 4>>();
            rep.delta_sched = e.at("delta_sched").get<double>();
            r.exposure = rep;
        }
        if (!j.at("certificate").is_null()) {
            const auto &c = j.at("certificate");
            r.certificate = bell::certify(c.at("S").get<double>(), c.at("delta_sched").get<double>(),
                                          c.at("delta_op").get<double>());
        }
        if (!j.at("model").is_null()) {
            const auto &m = j.at("model");
            r.model = harness::ModelDivergence{m.at("mean_weights").get<std::array<double, 4>>(),
                                               m.at("delta_ens_lambda").get<double>(),
                                               m.at("delta_ens_outcome").get<double>(),
                                               m.at("analytic_S").get<double>()};
        }
        r.wall_seconds = j.value("wall_seconds", 0.0);
    } catch (const json::exception &e) {
        throw ValidationError(std::string("run record: ") + e.what());
    }
    if (!harness::verify_record(r)) {
        throw ValidationError("run record: counts_hash does not match the stored counts");
    }
    return r;
}

harness::RunRecord read_record(const std::filesystem::path &path) { return record_from_json(parse_json_file(path)); }

void write_record(const harness::RunRecord &record, const std::filesystem::path &path) {
    write_text(path, record_to_json(record).dump(2) + "\n");
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ValidationError("cannot write '" + path.string() + "'");
    }
    out << text;
    out.flush();
    if (!out) {
        throw ValidationError("failed writing '" + path.string() + "'");
    }
}

}  // namespace belldrift::io
