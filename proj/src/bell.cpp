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

#include "belldrift/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "belldrift/rng.hpp"
#include "belldrift/stats.hpp"

namespace belldrift::bell {

namespace {

void require_unit_interval(double v, std::string_view name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << name << " = " << v << " outside [0, 1]";
        throw ValidationError(msg.str());
    }
}

BoundValue clamp_bound(double formula) {
    return {formula, std::min(formula, kAlgebraicMax), formula > kAlgebraicMax};
}

}  // namespace

Correlator correlator(const Counts &counts) {
    const auto n = total(counts);
    if (n == 0) {
        throw ValidationError("correlator of zero shots");
    }
    return correlator(frequencies(counts), static_cast<double>(n));
}

Correlator correlator(const Probabilities &p, double shots) {
    if (!(shots > 0.0)) {
        throw ValidationError("correlator needs a positive shot count");
    }
    const double e = std::clamp(p[0] - p[1] - p[2] + p[3], -1.0, 1.0);
    return {e, std::sqrt(std::max(0.0, 1.0 - e * e) / shots)};
}

void ChshReport::validate() const {
    double s = 0.0;
    for (Context c : kContexts) {
        const double e = correlators[index_of(c)].value;
        if (!(std::abs(e) <= 1.0)) {
            throw ValidationError("correlator for context " + std::string(context_label(c)) + " outside [-1, 1]");
        }
        s += chsh_sign(c) * e;
    }
    if (std::abs(s - S) > 1e-12) {
        throw ValidationError("S does not equal E_xy + E_xy' + E_x'y - E_x'y'");
    }
}

ChshReport chsh_S(const std::array<Correlator, 4> &correlators) {
    ChshReport r;
    r.correlators = correlators;
    double var = 0.0;
    for (Context c : kContexts) {
        const auto &e = correlators[index_of(c)];
        r.S += chsh_sign(c) * e.value;
        var += e.standard_error * e.standard_error;
    }
    r.standard_error = std::sqrt(var);
    r.validate();
    return r;
}

BoundValue relaxed_bound(double delta_ens) {
    require_unit_interval(delta_ens, "delta_ens");
    return clamp_bound(2.0 + 6.0 * delta_ens);
}

double min_delta_required(double S) {
    if (!std::isfinite(S)) {
        throw ValidationError("S must be finite");
    }
    return std::max(0.0, (std::abs(S) - 2.0) / 6.0);
}

double schedule_aware_bound(double delta_sched, double delta_op) {
    require_unit_interval(delta_sched, "delta_sched");
    require_unit_interval(delta_op, "delta_op");
    return 2.0 + 6.0 * delta_sched * delta_op;
}

BoundValue hall_bound(double measurement_dependence) {
    require_unit_interval(measurement_dependence, "measurement dependence M");
    return clamp_bound(2.0 + 3.0 * measurement_dependence);
}

double hall_required(double S) {
    if (!std::isfinite(S)) {
        throw ValidationError("S must be finite");
    }
    return std::max(0.0, (std::abs(S) - 2.0) / 3.0);
}

double hall_threshold() { return 2.0 * (std::numbers::sqrt2 - 1.0) / 3.0; }

std::string_view hall_threshold_note() {
    return "Hall threshold 2(sqrt2-1)/3 = 0.2761; the commonly quoted '~14%' does not match this value";
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::NoViolation:
            return "no-violation";
        case Verdict::WithinRelaxedBound:
            return "within-relaxed-bound";
        case Verdict::ExceedsScheduleAwareBound:
            return "exceeds-schedule-aware-bound";
    }
    return "unknown";
}

void BoundCertificate::validate() const {
    if (delta_ens_min < 0.0 || s_lhv_min < 2.0) {
        throw ValidationError("bound certificate has negative divergence or S_LHV^min below 2");
    }
    const double abs_s = std::abs(S);
    const Verdict expected = abs_s <= 2.0       ? Verdict::NoViolation
                             : abs_s <= s_lhv_min ? Verdict::WithinRelaxedBound
                                                  : Verdict::ExceedsScheduleAwareBound;
    if (expected != verdict) {
        throw ValidationError("bound certificate verdict is inconsistent with its comparisons");
    }
}

BoundCertificate certify(double S, double delta_sched, double delta_op) {
    BoundCertificate c;
    c.S = S;
    c.delta_ens_min = min_delta_required(S);
    c.delta_sched = delta_sched;
    c.delta_op = delta_op;
    c.s_lhv_min = schedule_aware_bound(delta_sched, delta_op);
    c.relaxed_at_delta_op = relaxed_bound(delta_op);
    c.hall_required_M = hall_required(S);
    c.hall_at_required = clamp_bound(2.0 + 3.0 * c.hall_required_M);
    const double abs_s = std::abs(S);
    c.verdict = abs_s <= 2.0          ? Verdict::NoViolation
                : abs_s <= c.s_lhv_min ? Verdict::WithinRelaxedBound
                                       : Verdict::ExceedsScheduleAwareBound;
    return c;
}

double max_abs_S(const std::array<std::vector<double>, 4> &ensembles) {
    const std::size_t n = ensembles[0].size();
    for (const auto &e : ensembles) {
        if (e.size() != n) {
            throw ValidationError("ensembles must share one hidden-variable space");
        }
    }
    double best_max = 0.0;
    double best_min = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double hi = -1e300;
        double lo = 1e300;
        // Strategy bits: A(x), A(x'), B(y), B(y').
        for (int s = 0; s < 16; ++s) {
            const std::array<int, 2> a = {(s & 1) ? -1 : 1, (s & 2) ? -1 : 1};
            const std::array<int, 2> b = {(s & 4) ? -1 : 1, (s & 8) ? -1 : 1};
            double v = 0.0;
            for (Context c : kContexts) {
                const int x = a[static_cast<std::size_t>(alice_setting(c))] * b[static_cast<std::size_t>(bob_setting(c))];
                v += chsh_sign(c) * ensembles[index_of(c)][j] * x;
            }
            hi = std::max(hi, v);
            lo = std::min(lo, v);
        }
        best_max += hi;
        best_min += lo;
    }
    return std::max(best_max, -best_min);
}

BruteForceResult bound_bruteforce_check(double delta, int trials, std::uint64_t seed, int num_hidden) {
    require_unit_interval(delta, "delta");
    if (trials < 1 || num_hidden < 1) {
        throw ValidationError("brute-force check needs at least one trial and one hidden state");
    }
    const auto n = static_cast<std::size_t>(num_hidden);
    BruteForceResult result;
    result.bound = 2.0 + 6.0 * delta;
    result.trials = trials;

    auto random_distribution = [n](Rng &rng) {
        std::exponential_distribution<double> expo(1.0);
        std::bernoulli_distribution sparse(0.3);
        std::vector<double> v(n);
        double sum = 0.0;
        for (auto &x : v) {
            x = sparse(rng) ? 0.0 : expo(rng);
            sum += x;
        }
        if (sum <= 0.0) {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            v[pick(rng)] = 1.0;
            sum = 1.0;
        }
        for (auto &x : v) {
            x /= sum;
        }
        return v;
    };

    for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        const auto base = random_distribution(rng);
        std::array<std::vector<double>, 4> raw;
        for (auto &r : raw) {
            r = random_distribution(rng);
        }
        double spread = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = i + 1; j < 4; ++j) {
                spread = std::max(spread, stats::tv_distance(raw[i], raw[j]));
            }
        }
        // Shrinking towards a common base scales every pairwise TV by the same factor.
        const double scale = spread > 0.0 ? std::min(1.0, delta / spread) : 0.0;
        std::array<std::vector<double>, 4> ens;
        for (std::size_t c = 0; c < 4; ++c) {
            ens[c].resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                ens[c][j] = base[j] + scale * (raw[c][j] - base[j]);
            }
        }
        const double s = max_abs_S(ens);
        result.worst_abs_S = std::max(result.worst_abs_S, s);
        if (s > result.bound + 1e-9) {
            result.passed = false;
        }
    }
    return result;
}

}  // namespace belldrift::bell
