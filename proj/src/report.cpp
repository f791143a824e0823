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

#include "belldrift/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "belldrift/io.hpp"

namespace belldrift::report {

namespace {

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_record(const std::string &line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    return fields;
}

std::vector<std::vector<std::string>> parse_table(const std::string &csv, const std::string &expected_header,
                                                  const char *what) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || (line.empty() ? line : line.substr(0, line.find_last_not_of('\r') + 1)) !=
                                       expected_header) {
        throw ValidationError(std::string(what) + ": unexpected header");
    }
    const auto width = split_csv_record(expected_header).size();
    std::vector<std::vector<std::string>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        auto fields = split_csv_record(line);
        if (fields.size() != width) {
            throw ValidationError(std::string(what) + " line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(width) + " fields");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

double parse_double(const std::string &s, const char *what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception &) {
        throw ValidationError(std::string(what) + ": '" + s + "' is not a number");
    }
}

const harness::VersionedReports &preferred(const harness::RunRecord &r) { return r.mitigated ? *r.mitigated : r.raw; }

std::string dataset_name(const harness::RunRecord &r) {
    return r.analysis.label.empty() ? r.counts.experiment_id : r.analysis.label;
}

std::vector<std::pair<std::string, const harness::VersionedReports *>> versions(const harness::RunRecord &r) {
    std::vector<std::pair<std::string, const harness::VersionedReports *>> out{{"raw", &r.raw}};
    if (r.mitigated) {
        out.emplace_back("mitigated", &*r.mitigated);
    }
    return out;
}

/// One bar group in a figure.
struct Bar {
    std::string label;
    double observed = 0.0;
    double null_mean = 0.0;
    double null_std = 0.0;
    double null_q99 = 0.0;
    std::string stars;
};

std::string xml_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render_bars(const std::string &title, const std::vector<Bar> &bars) {
    constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 90, kGroup = 56, kPlotH = 240;
    const double width = kLeft + kRight + kGroup * std::max<std::size_t>(bars.size(), 1);
    const double height = kTop + kPlotH + kBottom;
    double ymax = 0.0;
    for (const auto &b : bars) {
        ymax = std::max({ymax, b.observed, b.null_mean + b.null_std, b.null_q99});
    }
    ymax = ymax > 0 ? ymax * 1.15 : 1.0;
    auto y = [&](double v) { return kTop + kPlotH * (1.0 - v / ymax); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width, 0) << "\" height=\"" << fmt(height, 0)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << fmt(width / 2, 1) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
      << xml_escape(title) << "</text>\n";
    s << "<line x1=\"" << fmt(kLeft, 1) << "\" y1=\"" << fmt(kTop, 1) << "\" x2=\"" << fmt(kLeft, 1) << "\" y2=\""
      << fmt(kTop + kPlotH, 1) << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << fmt(kLeft, 1) << "\" y1=\"" << fmt(kTop + kPlotH, 1) << "\" x2=\"" << fmt(width - kRight, 1)
      << "\" y2=\"" << fmt(kTop + kPlotH, 1) << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = ymax * t / 4.0;
        s << "<text x=\"" << fmt(kLeft - 4, 1) << "\" y=\"" << fmt(y(v) + 4, 1) << "\" text-anchor=\"end\">"
          << fmt(v, 3) << "</text>\n";
    }
    s << "<text x=\"14\" y=\"" << fmt(kTop + kPlotH / 2, 1) << "\" transform=\"rotate(-90 14 "
      << fmt(kTop + kPlotH / 2, 1) << ")\" text-anchor=\"middle\">delta_op</text>\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto &b = bars[i];
        const double x0 = kLeft + kGroup * static_cast<double>(i) + 8;
        const double bw = 18;
        s << "<rect x=\"" << fmt(x0, 1) << "\" y=\"" << fmt(y(b.observed), 1) << "\" width=\"" << fmt(bw, 1)
          << "\" height=\"" << fmt(kTop + kPlotH - y(b.observed), 1) << "\" fill=\"#1f4e79\"/>\n";
        const double xn = x0 + bw + 2;
        s << "<rect x=\"" << fmt(xn, 1) << "\" y=\"" << fmt(y(b.null_mean), 1) << "\" width=\"" << fmt(bw, 1)
          << "\" height=\"" << fmt(kTop + kPlotH - y(b.null_mean), 1) << "\" fill=\"#b0b0b0\"/>\n";
        const double xc = xn + bw / 2;
        s << "<line x1=\"" << fmt(xc, 1) << "\" y1=\"" << fmt(y(std::max(0.0, b.null_mean - b.null_std)), 1)
          << "\" x2=\"" << fmt(xc, 1) << "\" y2=\"" << fmt(y(b.null_mean + b.null_std), 1)
          << "\" stroke=\"black\"/>\n";
        s << "<line x1=\"" << fmt(xn, 1) << "\" y1=\"" << fmt(y(b.null_q99), 1) << "\" x2=\"" << fmt(xn + bw, 1)
          << "\" y2=\"" << fmt(y(b.null_q99), 1) << "\" stroke=\"#c00000\" stroke-dasharray=\"3,2\"/>\n";
        if (!b.stars.empty()) {
            s << "<text x=\"" << fmt(x0 + bw / 2, 1) << "\" y=\"" << fmt(y(b.observed) - 4, 1)
              << "\" text-anchor=\"middle\">" << b.stars << "</text>\n";
        }
        const double lx = x0 + bw;
        const double ly = kTop + kPlotH + 12;
        s << "<text x=\"" << fmt(lx, 1) << "\" y=\"" << fmt(ly, 1) << "\" text-anchor=\"end\" transform=\"rotate(-45 "
          << fmt(lx, 1) << ' ' << fmt(ly, 1) << ")\">" << xml_escape(b.label) << "</text>\n";
    }
    const double ly = height - 12;
    s << "<rect x=\"" << fmt(kLeft, 1) << "\" y=\"" << fmt(ly - 9, 1)
      << "\" width=\"10\" height=\"10\" fill=\"#1f4e79\"/>\n";
    s << "<text x=\"" << fmt(kLeft + 14, 1) << "\" y=\"" << fmt(ly, 1) << "\">observed</text>\n";
    s << "<rect x=\"" << fmt(kLeft + 80, 1) << "\" y=\"" << fmt(ly - 9, 1)
      << "\" width=\"10\" height=\"10\" fill=\"#b0b0b0\"/>\n";
    s << "<text x=\"" << fmt(kLeft + 94, 1) << "\" y=\"" << fmt(ly, 1) << "\">null mean, 1 std, q99 (dashed)</text>\n";
    s << "</svg>\n";
    return s.str();
}

constexpr const char *kDriftHeader = "Version,context,delta_op,null_mean,null_std,null_q025,null_q975,null_q99,p_value,stars";
constexpr const char *kBinScanHeader = "B,theta_max,schedule,observed,observed_std,null_mean,null_std,null_q99,p_value,stars";

}  // namespace

std::string fmt(double x, int precision) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, x);
    std::string s(buf);
    // Avoid "-0.000000" for values that round to zero.
    if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

std::string schedule_table_csv(std::span<const harness::RunRecord> records) {
    std::ostringstream out;
    out << "Schedule,S_r,δ_op(global),δ_ens,δ_ens(outcome),δ_sched\n";
    for (const auto &r : records) {
        const auto &v = preferred(r);
        out << csv_field(v.chsh.schedule) << ',' << fmt(v.chsh.S, 3) << ',' << fmt(v.drift.observed.global, 3) << ',';
        if (r.model) {
            out << fmt(r.model->delta_ens_lambda, 3) << ',' << fmt(r.model->delta_ens_outcome, 3);
        } else {
            out << ',';
        }
        out << ',';
        if (r.certificate) {
            out << fmt(r.certificate->delta_sched, 3);
        } else if (r.exposure) {
            out << fmt(r.exposure->delta_sched, 3);
        }
        out << '\n';
    }
    return out.str();
}

std::string no_signaling_table_csv(std::span<const harness::RunRecord> records) {
    std::ostringstream out;
    out << "Dataset,Version,max|ΔP|,min p,min p_Bonf\n";
    for (const auto &r : records) {
        for (const auto &[name, v] : versions(r)) {
            const auto &ns = v->no_signaling;
            out << csv_field(dataset_name(r)) << ',' << name << ',' << fmt(ns.max_abs_marginal_deviation, 4) << ','
                << fmt(ns.min_p, 4) << ',' << fmt(ns.min_p_bonferroni, 4) << '\n';
        }
    }
    return out.str();
}

std::string drift_csv(const harness::RunRecord &record) {
    std::ostringstream out;
    out << kDriftHeader << '\n';
    auto row = [&](const std::string &version, const std::string &ctx, double observed, const stats::NullSummary &n) {
        out << version << ',' << csv_field(ctx) << ',' << fmt(observed) << ',' << fmt(n.mean) << ',' << fmt(n.std)
            << ',' << fmt(n.q025) << ',' << fmt(n.q975) << ',' << fmt(n.q99) << ',' << fmt(n.p_value) << ','
            << harness::significance_stars(n.p_value) << '\n';
    };
    for (const auto &[name, v] : versions(record)) {
        for (Context c : kContexts) {
            const auto i = index_of(c);
            row(name, std::string(context_label(c)), v->drift.observed.per_context[i], v->drift.per_context_null[i]);
        }
        row(name, "global", v->drift.observed.global, v->drift.global_null);
    }
    return out.str();
}

std::string chsh_csv(const harness::RunRecord &record) {
    std::ostringstream out;
    out << "Version,context,E,standard_error\n";
    for (const auto &[name, v] : versions(record)) {
        for (Context c : kContexts) {
            const auto &e = v->chsh.correlators[index_of(c)];
            out << name << ',' << csv_field(std::string(context_label(c))) << ',' << fmt(e.value) << ','
                << fmt(e.standard_error) << '\n';
        }
        out << name << ",S," << fmt(v->chsh.S) << ',' << fmt(v->chsh.standard_error) << '\n';
    }
    return out.str();
}

std::string certificate_csv(const harness::RunRecord &record) {
    std::ostringstream out;
    out << "quantity,value\n";
    auto kv = [&](const std::string &k, const std::string &v) { out << k << ',' << csv_field(v) << '\n'; };
    kv("dataset", dataset_name(record));
    kv("counts_hash", record.counts_hash);
    kv("schedule", record.raw.chsh.schedule);
    kv("axes", record.analysis.axes);
    kv("clipped_cells", std::to_string(record.clipped_cells));
    if (record.exposure) {
        kv("drift_rule", std::string(schedule::rule_name(record.exposure->rule)));
        kv("exposure_delta_sched", fmt(record.exposure->delta_sched));
    }
    if (record.certificate) {
        const auto &c = *record.certificate;
        kv("S", fmt(c.S));
        kv("delta_ens_min", fmt(c.delta_ens_min));
        kv("delta_sched", fmt(c.delta_sched));
        kv("delta_op", fmt(c.delta_op));
        kv("S_LHV_min", fmt(c.s_lhv_min));
        kv("relaxed_bound_at_delta_op", fmt(c.relaxed_at_delta_op.formula));
        kv("relaxed_bound_at_delta_op_clamped", fmt(c.relaxed_at_delta_op.clamped));
        kv("hall_required_M", fmt(c.hall_required_M));
        kv("hall_bound_at_required_M", fmt(c.hall_at_required.formula));
        kv("verdict", std::string(bell::verdict_name(c.verdict)));
    }
    if (record.model) {
        const auto &m = *record.model;
        for (Context c : kContexts) {
            kv("mean_p_" + std::string(context_label(c)), fmt(m.mean_weights[index_of(c)]));
        }
        kv("delta_ens_lambda", fmt(m.delta_ens_lambda));
        kv("delta_ens_outcome", fmt(m.delta_ens_outcome));
        kv("analytic_S", fmt(m.analytic_S));
    }
    kv("hall_threshold_formula", fmt(bell::hall_threshold()));
    kv("hall_threshold_quoted", fmt(bell::kHallQuotedThreshold, 2));
    kv("hall_threshold_note", std::string(bell::hall_threshold_note()));
    return out.str();
}

std::string bin_scan_csv(std::span<const harness::BinScanRow> rows) {
    std::ostringstream out;
    out << kBinScanHeader << '\n';
    for (const auto &r : rows) {
        out << r.num_bins << ',' << fmt(r.theta_max) << ',' << schedule::kind_name(r.schedule) << ','
            << fmt(r.observed) << ',' << fmt(r.observed_std) << ',' << fmt(r.null_mean) << ',' << fmt(r.null_std)
            << ',' << fmt(r.null_q99) << ',' << fmt(r.p_value) << ',' << r.stars << '\n';
    }
    return out.str();
}

std::vector<harness::BinScanRow> parse_bin_scan_csv(const std::string &csv) {
    std::vector<harness::BinScanRow> rows;
    for (const auto &f : parse_table(csv, kBinScanHeader, "bin-scan CSV")) {
        harness::BinScanRow r;
        r.num_bins = static_cast<int>(parse_double(f[0], "B"));
        r.theta_max = parse_double(f[1], "theta_max");
        r.schedule = schedule::parse_kind(f[2]);
        r.observed = parse_double(f[3], "observed");
        r.observed_std = parse_double(f[4], "observed_std");
        r.null_mean = parse_double(f[5], "null_mean");
        r.null_std = parse_double(f[6], "null_std");
        r.null_q99 = parse_double(f[7], "null_q99");
        r.p_value = parse_double(f[8], "p_value");
        r.stars = f[9];
        rows.push_back(r);
    }
    return rows;
}

std::string drift_svg_from_csv(const std::string &drift_csv_text) {
    std::vector<Bar> bars;
    for (const auto &f : parse_table(drift_csv_text, kDriftHeader, "drift CSV")) {
        bars.push_back({f[0] + " " + f[1], parse_double(f[2], "delta_op"), parse_double(f[3], "null_mean"),
                        parse_double(f[4], "null_std"), parse_double(f[7], "null_q99"), f[9]});
    }
    return render_bars("Operational drift: observed vs IID null", bars);
}

std::string bin_scan_svg_from_csv(const std::string &bin_scan_csv_text) {
    std::vector<Bar> bars;
    for (const auto &f : parse_table(bin_scan_csv_text, kBinScanHeader, "bin-scan CSV")) {
        bars.push_back({f[2] + " theta=" + f[1] + " B=" + f[0], parse_double(f[3], "observed"),
                        parse_double(f[5], "null_mean"), parse_double(f[6], "null_std"),
                        parse_double(f[7], "null_q99"), f[9]});
    }
    return render_bars("Global drift vs number of bins", bars);
}

std::vector<std::filesystem::path> write_record_report(const harness::RunRecord &record,
                                                       const std::filesystem::path &dir, const std::string &stem,
                                                       bool svg) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ValidationError("cannot create '" + dir.string() + "': " + ec.message());
    }
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string &suffix, const std::string &text) {
        const auto path = dir / (stem + suffix);
        io::write_text(path, text);
        written.push_back(path);
    };
    const std::span<const harness::RunRecord> one(&record, 1);
    const auto drift = drift_csv(record);
    emit("_drift.csv", drift);
    emit("_chsh.csv", chsh_csv(record));
    emit("_certificate.csv", certificate_csv(record));
    emit("_schedule.csv", schedule_table_csv(one));
    emit("_nosignaling.csv", no_signaling_table_csv(one));
    if (svg) {
        emit("_drift.svg", drift_svg_from_csv(drift));
    }
    return written;
}

}  // namespace belldrift::report
