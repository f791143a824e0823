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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "../oracles.hpp"
#include "belldrift/bell.hpp"
#include "belldrift/lhv.hpp"

using namespace belldrift;
using namespace belldrift::bell;

namespace {

/// max |S| by enumerating every global response table (16^n of them).
double enumerate_all_tables(const std::array<std::vector<double>, 4> &ens) {
    const std::size_t n = ens[0].size();
    std::uint64_t tables = 1;
    for (std::size_t j = 0; j < n; ++j) tables *= 16;
    double best = 0;
    for (std::uint64_t t = 0; t < tables; ++t) {
        double s = 0;
        std::uint64_t code = t;
        for (std::size_t j = 0; j < n; ++j, code /= 16) {
            const int bits = static_cast<int>(code % 16);
            const int ax = bits & 1 ? -1 : 1, axp = bits & 2 ? -1 : 1, by = bits & 4 ? -1 : 1, byp = bits & 8 ? -1 : 1;
            s += ens[0][j] * ax * by + ens[1][j] * ax * byp + ens[2][j] * axp * by - ens[3][j] * axp * byp;
        }
        best = std::max(best, std::abs(s));
    }
    return best;
}

std::vector<double> random_simplex(std::mt19937_64 &rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(n);
    double t = 0;
    for (auto &v : p) t += (v = e(rng));
    for (auto &v : p) v /= t;
    return p;
}

}  // namespace

TEST_CASE("correlator estimator") {
    CHECK(correlator(Counts{256, 256, 256, 256}).value == 0.0);
    CHECK(correlator(Counts{512, 0, 0, 512}).value == 1.0);
    CHECK(correlator(Counts{512, 0, 0, 512}).standard_error == 0.0);
    const auto e = correlator(Counts{400, 100, 100, 400});
    CHECK(e.value == doctest::Approx(0.6));
    CHECK(e.standard_error == doctest::Approx(std::sqrt((1 - 0.36) / 1000)));
    CHECK_THROWS_AS(correlator(Counts{0, 0, 0, 0}), ValidationError);
    const double h = std::cos(std::numbers::pi / 4);
    const auto p = correlator(Probabilities{(1 - h) / 4, (1 + h) / 4, (1 + h) / 4, (1 - h) / 4}, 1e6);
    CHECK(p.value == doctest::Approx(-h).epsilon(1e-14));
}

TEST_CASE("CHSH combination and sign lock") {
    const Correlator half{0.5, 0.01};
    const auto r = chsh_S({half, half, half, half});
    CHECK(r.S == doctest::Approx(1.0));
    CHECK(r.standard_error == doctest::Approx(0.02));
    CHECK_NOTHROW(r.validate());

    auto swapped = chsh_S({Correlator{0.9, 0}, Correlator{0.7, 0}, Correlator{0.7, 0}, Correlator{-0.7, 0}});
    CHECK(swapped.S == doctest::Approx(3.0));
    std::swap(swapped.correlators[0], swapped.correlators[3]);
    CHECK_THROWS_AS(swapped.validate(), ValidationError);

    auto too_big = r;
    too_big.correlators[1].value = 1.2;
    too_big.S = 1.7;
    CHECK_THROWS_AS(too_big.validate(), ValidationError);
}

TEST_CASE("bound arithmetic") {
    CHECK(relaxed_bound(0).formula == 2.0);
    CHECK(relaxed_bound(0.124).formula == doctest::Approx(2.744));
    const auto one = relaxed_bound(1.0);
    CHECK(one.formula == 8.0);
    CHECK(one.clamped == 4.0);
    CHECK(one.exceeds_algebraic_max);
    CHECK_FALSE(relaxed_bound(0.2).exceeds_algebraic_max);
    CHECK_THROWS_AS(relaxed_bound(-0.1), ValidationError);
    CHECK_THROWS_AS(relaxed_bound(1.1), ValidationError);

    CHECK(std::abs(min_delta_required(2 * std::sqrt(2.0)) - 0.13807) < 1e-5);
    CHECK(min_delta_required(1.5) == 0.0);
    CHECK(min_delta_required(2.0) == 0.0);
    CHECK(min_delta_required(-2.6) == doctest::Approx(0.1));
    const double at_269 = min_delta_required(2.69);
    CHECK(at_269 >= 0.11);
    CHECK(at_269 <= 0.12);

    CHECK(schedule_aware_bound(1, 0.089) == doctest::Approx(2.534));
    CHECK(schedule_aware_bound(1, 0.062) == doctest::Approx(2.372));
    CHECK(schedule_aware_bound(0, 0.3) == 2.0);
    CHECK_THROWS_AS(schedule_aware_bound(1.2, 0.1), ValidationError);
    CHECK_THROWS_AS(schedule_aware_bound(0.5, -0.1), ValidationError);

    CHECK(hall_bound(0).formula == 2.0);
    CHECK(std::abs(hall_bound(hall_threshold()).formula - 2 * std::sqrt(2.0)) < 1e-12);
    CHECK(hall_threshold() == doctest::Approx(2 * (std::sqrt(2.0) - 1) / 3));
    CHECK(hall_bound(1).formula == 5.0);
    CHECK(hall_bound(1).clamped == 4.0);
    CHECK_THROWS_AS(hall_bound(2), ValidationError);
    CHECK(hall_required(2 * std::sqrt(2.0)) == doctest::Approx(hall_threshold()));
    CHECK(hall_required(1.0) == 0.0);
    CHECK_FALSE(hall_threshold_note().empty());

    for (int i = 1; i <= 100; ++i) {
        const double lo = (i - 1) / 100.0, hi = i / 100.0;
        REQUIRE(relaxed_bound(hi).formula > relaxed_bound(lo).formula);
        REQUIRE(hall_bound(hi).formula > hall_bound(lo).formula);
        REQUIRE(schedule_aware_bound(1, hi) > schedule_aware_bound(1, lo));
        REQUIRE(schedule_aware_bound(hi, 0.5) > schedule_aware_bound(lo, 0.5));
    }
}

TEST_CASE("certificates") {
    const auto none = certify(1.9, 1, 0.1);
    CHECK(none.verdict == Verdict::NoViolation);
    CHECK(none.delta_ens_min == 0.0);
    const auto within = certify(2.3, 1, 0.089);
    CHECK(within.s_lhv_min == doctest::Approx(2.534));
    CHECK(within.verdict == Verdict::WithinRelaxedBound);
    const auto exceeds = certify(-2.8, 1, 0.062);
    CHECK(exceeds.verdict == Verdict::ExceedsScheduleAwareBound);
    CHECK(exceeds.delta_ens_min == doctest::Approx(0.8 / 6));
    CHECK(exceeds.hall_required_M == doctest::Approx(0.8 / 3));
    for (const auto &c : {none, within, exceeds}) CHECK_NOTHROW(c.validate());
    auto broken = within;
    broken.verdict = Verdict::NoViolation;
    CHECK_THROWS_AS(broken.validate(), ValidationError);
    CHECK(verdict_name(Verdict::WithinRelaxedBound) != verdict_name(Verdict::NoViolation));
}

TEST_CASE("max_abs_S matches exhaustive table enumeration") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + t % 3;
        std::array<std::vector<double>, 4> ens;
        for (auto &e : ens) e = random_simplex(rng, n);
        REQUIRE(std::abs(max_abs_S(ens) - enumerate_all_tables(ens)) < 1e-12);
    }
    std::array<std::vector<double>, 4> same;
    for (auto &e : same) e = {0.2, 0.3, 0.5};
    CHECK(max_abs_S(same) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("the drifting table model saturates the relaxed bound") {
    for (double p : {0.0, 0.05, 0.1, 0.15, 0.3}) {
        std::array<std::vector<double>, 4> ens;
        for (int c = 0; c < 4; ++c) {
            const auto w = oracle::table_ensemble(c, p);
            ens[c] = {w.begin(), w.end()};
        }
        CHECK(max_abs_S(ens) == doctest::Approx(2 + 6 * p).epsilon(1e-14));
        CHECK(lhv::analytic_S(p) == doctest::Approx(relaxed_bound(lhv::model_delta_ens(lhv::ensembles(p))).formula));
    }
}

TEST_CASE("brute-force bound check") {
    const auto zero = bound_bruteforce_check(0.0, 500, 1);
    CHECK(zero.passed);
    CHECK(zero.worst_abs_S <= 2.0 + 1e-12);
    CHECK(zero.worst_abs_S == doctest::Approx(2.0));
    const auto r = bound_bruteforce_check(0.1, 10000, 2);
    CHECK(r.passed);
    CHECK(r.trials == 10000);
    CHECK(r.bound == doctest::Approx(2.6));
    CHECK(r.worst_abs_S <= 2.6 + 1e-9);
    CHECK(r.worst_abs_S > 2.0);
    CHECK(bound_bruteforce_check(0.1, 300, 7).worst_abs_S == bound_bruteforce_check(0.1, 300, 7).worst_abs_S);
    CHECK_THROWS_AS(bound_bruteforce_check(1.5, 10, 1), ValidationError);
    CHECK_THROWS_AS(bound_bruteforce_check(0.1, 0, 1), ValidationError);
}
