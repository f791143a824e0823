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
#include <random>

#include "doctest.h"

#include "../oracles.hpp"
#include "belldrift/bell.hpp"
#include "belldrift/lhv.hpp"

using namespace belldrift;
using namespace belldrift::lhv;

namespace {

double ramp(int k, int K) { return 0.15 * (k - 1) / (K - 1); }

/// Outcome distribution of a context under ensemble w, from the hand-written response rows.
std::vector<double> oracle_outcomes(int context, const std::array<double, 5> &w) {
    std::vector<double> p(4, 0.0);
    const int a = context / 2, b = context % 2;
    for (int j = 0; j < 5; ++j) {
        const int bit_a = oracle::kA[j][a] == 1 ? 0 : 1;
        const int bit_b = oracle::kB[j][b] == 1 ? 0 : 1;
        p[static_cast<std::size_t>(2 * bit_a + bit_b)] += w[j];
    }
    return p;
}

}  // namespace

TEST_CASE("canonical response table matches the transcribed table") {
    const auto t = ResponseTable::canonical();
    CHECK_NOTHROW(t.validate());
    for (int j = 0; j < 5; ++j) {
        for (int s = 0; s < 2; ++s) {
            CHECK(t.alice[s][j] == oracle::kA[j][s]);
            CHECK(t.bob[s][j] == oracle::kB[j][s]);
        }
    }
    auto bad = t;
    bad.alice[0][2] = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("ensembles follow the weight table and are stochastic") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1.0 / 3);
    for (int t = 0; t < 1000; ++t) {
        const double p = u(rng);
        const auto all = ensembles(p);
        for (int c = 0; c < 4; ++c) {
            const auto w = oracle::table_ensemble(c, p);
            double sum = 0;
            for (int j = 0; j < 5; ++j) {
                REQUIRE(all[c][j] == doctest::Approx(w[j]).epsilon(1e-15));
                REQUIRE(all[c][j] >= 0);
                sum += all[c][j];
            }
            REQUIRE(std::abs(sum - 1) < 1e-12);
            // Same p in every context: lambda_5 weight identical.
            REQUIRE(all[c][4] == all[0][4]);
        }
    }
    CHECK_THROWS_AS(ensemble(Context::XY, -0.01), ValidationError);
    CHECK_THROWS_AS(ensemble(Context::XY, 0.34), ValidationError);
    CHECK_NOTHROW(ensemble(Context::XY, 1.0 / 3));
}

TEST_CASE("analytic correlators and S") {
    CHECK(analytic_correlator(Context::XY, 0.1) == doctest::Approx(1.0));
    CHECK(analytic_correlator(Context::XpYp, 0.1) == doctest::Approx(0.4));
    CHECK(analytic_correlator(Context::XpYp, 0.0) == 1.0);
    CHECK(analytic_S(0) == 2.0);
    CHECK(analytic_S(0.15) == doctest::Approx(2.9));
    CHECK(analytic_S(1.0 / 3) == doctest::Approx(4.0));
    CHECK_THROWS_AS(analytic_S(0.5), ValidationError);
    for (int i = 0; i <= 999; ++i) {
        const double p = (1.0 / 3) * i / 999;
        double s = 0;
        for (Context c : kContexts) {
            REQUIRE(std::abs(analytic_correlator(c, p) - oracle::table_correlator(static_cast<int>(index_of(c)), p)) <
                    1e-14);
            s += chsh_sign(c) * analytic_correlator(c, p);
        }
        REQUIRE(std::abs(analytic_S(p) - s) < 1e-12);
    }
}

TEST_CASE("outcome distributions") {
    const auto d = outcome_distribution(Context::XpYp, ensemble(Context::XpYp, 0.1));
    CHECK(d[0] == doctest::Approx(0.7));
    CHECK(d[1] == doctest::Approx(0.1));
    CHECK(d[2] == doctest::Approx(0.2));
    CHECK(d[3] == 0.0);
    for (Context c : kContexts) {
        const int ci = static_cast<int>(index_of(c));
        const auto lib = outcome_distribution(c, ensemble(c, 0.2));
        const auto ref = oracle_outcomes(ci, oracle::table_ensemble(ci, 0.2));
        for (int x = 0; x < 4; ++x) CHECK(lib[x] == doctest::Approx(ref[x]).epsilon(1e-14));
    }
}

TEST_CASE("PProfile") {
    const auto r = PProfile::linear_ramp(0, 0.15, 12);
    CHECK(r.at(1) == 0.0);
    CHECK(r.at(12) == doctest::Approx(0.15).epsilon(1e-15));
    for (int k = 1; k <= 12; ++k) CHECK(r.at(k) == doctest::Approx(ramp(k, 12)).epsilon(1e-14));
    CHECK(PProfile::linear_ramp(0.05, 0.15, 1).at(1) == 0.05);
    CHECK(PProfile::constant(0.08, 4).at(3) == 0.08);
    CHECK_THROWS_AS(PProfile::linear_ramp(0, 0.4, 3), ValidationError);
    CHECK_THROWS_AS(PProfile::constant(0.1, 0), ValidationError);
    CHECK_THROWS_AS(r.at(13), ValidationError);
}

TEST_CASE("sampling: degenerate, determinism, S estimates") {
    const auto rr = schedule::make_schedule(schedule::Kind::RoundRobin, 4);
    const auto zero = sample_lhv_counts(PProfile::constant(0, 4), rr, 500, 1);
    for (Context c : kContexts)
        for (const auto &b : zero.of(c)) CHECK(b.counts == Counts{500, 0, 0, 0});
    CHECK(sample_lhv_counts(PProfile::constant(0.1, 4), rr, 300, 9) ==
          sample_lhv_counts(PProfile::constant(0.1, 4), rr, 300, 9));
    CHECK_THROWS_AS(sample_lhv_counts(PProfile::constant(0.1, 5), rr, 300, 9), ValidationError);

    const auto rr10 = schedule::make_schedule(schedule::Kind::RoundRobin, 10);
    const auto c = sample_lhv_counts(PProfile::constant(0.1, 10), rr10, 10000, 4);
    double S = 0;
    for (Context ctx : kContexts) S += chsh_sign(ctx) * bell::correlator(c.pooled(ctx)).value;
    CHECK(std::abs(S - 2.6) < 0.02);

    // Blocked ramp: only E_x'y' depends on p, so S = 2 + 6 mean(p seen by x'y').
    const int K = 12;
    const auto bl = schedule::make_schedule(schedule::Kind::Blocked, K);
    const auto counts = sample_lhv_counts(PProfile::linear_ramp(0, 0.15, K), bl, 1024, 5);
    double mean_p = 0;
    for (int pos = 3 * K; pos < 4 * K; ++pos) mean_p += ramp(pos * K / (4 * K) + 1, K) / K;
    double Sb = 0;
    for (Context ctx : kContexts) Sb += chsh_sign(ctx) * bell::correlator(counts.pooled(ctx)).value;
    CHECK(std::abs(Sb - (2 + 6 * mean_p)) < 0.03);
    CHECK(mean_weights(PProfile::linear_ramp(0, 0.15, K), bl, schedule::DriftIndexRule::PerSlot)[3] ==
          doctest::Approx(mean_p).epsilon(1e-14));
}

TEST_CASE("sampled correlators converge to analytic values") {
    const auto rr = schedule::make_schedule(schedule::Kind::RoundRobin, 2);
    const auto counts = sample_lhv_counts(PProfile::constant(0.12, 2), rr, 500000, 77);
    for (Context c : kContexts) {
        const auto e = bell::correlator(counts.pooled(c));
        const double exact = analytic_correlator(c, 0.12);
        const double se = std::max(std::sqrt((1 - exact * exact) / 1e6), 1e-12);
        CHECK(std::abs(e.value - exact) <= 5 * se);
    }
}

TEST_CASE("time-averaged ensembles") {
    const auto rr = schedule::make_schedule(schedule::Kind::RoundRobin, 12);
    const auto constant = time_averaged_ensembles(PProfile::constant(0.08, 12), rr);
    for (Context c : kContexts)
        for (int j = 0; j < 5; ++j) CHECK(constant[index_of(c)][j] == doctest::Approx(ensemble(c, 0.08)[j]));

    const auto ramp_profile = PProfile::linear_ramp(0, 0.15, 12);
    const auto means = mean_weights(ramp_profile, rr, schedule::DriftIndexRule::PerBin);
    for (double m : means) CHECK(m == doctest::Approx(0.075));

    std::vector<schedule::Slot> slots;
    for (Context c : {Context::XY, Context::XYp, Context::XpY})
        for (int b = 1; b <= 12; ++b) slots.push_back({c, b});
    for (int b = 7; b <= 12; ++b) slots.push_back({Context::XpYp, b});
    const auto custom = schedule::make_custom(12, slots);
    double expected = 0;
    for (int k = 7; k <= 12; ++k) expected += ramp(k, 12) / 6;
    const auto avg = time_averaged_ensembles(ramp_profile, custom, schedule::DriftIndexRule::PerBin);
    CHECK(avg[3][1] == doctest::Approx(expected));
    CHECK(avg[3][0] == 0.0);
    CHECK(avg[3][4] == doctest::Approx(1 - 3 * expected));

    const auto missing = schedule::make_custom(12, {{Context::XY, 1}});
    CHECK_THROWS_AS(time_averaged_ensembles(ramp_profile, missing, schedule::DriftIndexRule::PerBin), ValidationError);
}

TEST_CASE("model divergence is exact TV") {
    CHECK(model_delta_ens(ensembles(0.0)) == 0.0);
    const std::array<Ensemble, 4> same{ensemble(Context::XY, 0.1), ensemble(Context::XY, 0.1),
                                       ensemble(Context::XY, 0.1), ensemble(Context::XY, 0.1)};
    CHECK(model_delta_ens(same) == 0.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1.0 / 3);
    for (int t = 0; t < 200; ++t) {
        const double p = u(rng);
        REQUIRE(std::abs(model_delta_ens(ensembles(p)) - p) < 1e-12);
        std::array<Ensemble, 4> mixed;
        std::array<double, 4> ps;
        for (int c = 0; c < 4; ++c) {
            ps[c] = u(rng);
            mixed[c] = ensemble(kContexts[c], ps[c]);
        }
        double lam = 0, out = 0;
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                const auto wi = oracle::table_ensemble(i, ps[i]), wj = oracle::table_ensemble(j, ps[j]);
                lam = std::max(lam, oracle::tv_by_events({wi.begin(), wi.end()}, {wj.begin(), wj.end()}));
                out = std::max(out, oracle::tv_by_events(oracle_outcomes(i, wi), oracle_outcomes(j, wj)));
            }
        }
        REQUIRE(std::abs(model_delta_ens(mixed) - lam) < 1e-12);
        REQUIRE(std::abs(outcome_delta_ens(mixed) - out) < 1e-12);
    }
    const auto ramp_profile = PProfile::linear_ramp(0, 0.15, 12);
    const double rr = model_delta_ens(time_averaged_ensembles(ramp_profile, schedule::make_schedule(schedule::Kind::RoundRobin, 12)));
    const double bl = model_delta_ens(time_averaged_ensembles(ramp_profile, schedule::make_schedule(schedule::Kind::Blocked, 12)));
    CHECK(rr == doctest::Approx(0.075));
    CHECK(bl > rr);
}
