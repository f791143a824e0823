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
#include "belldrift/qsim.hpp"
#include "belldrift/stats.hpp"

using namespace belldrift;
using namespace belldrift::stats;

namespace {

std::vector<double> random_simplex(std::mt19937_64 &rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(n);
    double t = 0;
    for (auto &v : p) t += (v = e(rng));
    for (auto &v : p) v /= t;
    return p;
}

BinnedCounts binned_from(const std::array<std::vector<Counts>, 4> &cells) {
    BinnedCounts b;
    b.experiment_id = "t";
    b.num_bins = static_cast<int>(cells[0].size());
    b.shots_per_bin = total(cells[0][0]);
    for (int c = 0; c < 4; ++c)
        for (std::size_t k = 0; k < cells[c].size(); ++k)
            b.contexts[c].push_back({static_cast<int>(k + 1), cells[c][k]});
    return b;
}

BinnedCounts iid_counts(const Probabilities &p, int bins, std::uint64_t shots, std::uint64_t seed) {
    std::array<std::vector<Counts>, 4> cells;
    for (int c = 0; c < 4; ++c)
        for (int k = 0; k < bins; ++k)
            cells[c].push_back(qsim::sample_counts(p, shots, seed * 1000 + static_cast<std::uint64_t>(c * 100 + k)));
    return binned_from(cells);
}

}  // namespace

TEST_CASE("tv_distance examples and errors") {
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    CHECK(tv_distance(p, p) == 0.0);
    CHECK(tv_distance(std::vector<double>{1, 0, 0, 0}, std::vector<double>{0, 1, 0, 0}) == 1.0);
    CHECK(tv_distance(std::vector<double>{0.5, 0.5, 0, 0}, std::vector<double>{0.25, 0.25, 0.25, 0.25}) ==
          doctest::Approx(0.5));
    CHECK_THROWS_AS(tv_distance(std::vector<double>{1, 0}, std::vector<double>{1, 0, 0}), ValidationError);
    CHECK_THROWS_AS(tv_distance(std::vector<double>{0.5, 0.4}, std::vector<double>{1, 0}), ValidationError);
}

TEST_CASE("tv metric axioms and event oracle") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 10000; ++t) {
        const auto p = random_simplex(rng, 5), q = random_simplex(rng, 5), r = random_simplex(rng, 5);
        const double pq = tv_distance(p, q);
        REQUIRE(pq == tv_distance(q, p));
        REQUIRE(pq > 0.0);
        REQUIRE(tv_distance(p, p) == 0.0);
        REQUIRE(pq <= tv_distance(p, r) + tv_distance(r, q) + 1e-15);
        REQUIRE(std::abs(pq - oracle::tv_by_events(p, q)) < 1e-12);
    }
}

TEST_CASE("tv contracts under stochastic channels") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 10000; ++t) {
        std::array<std::vector<double>, 5> columns;
        for (auto &c : columns) c = random_simplex(rng, 4);
        const auto mu = random_simplex(rng, 5), nu = random_simplex(rng, 5);
        std::vector<double> cmu(4, 0.0), cnu(4, 0.0);
        for (int x = 0; x < 4; ++x) {
            for (int j = 0; j < 5; ++j) {
                cmu[x] += columns[j][x] * mu[j];
                cnu[x] += columns[j][x] * nu[j];
            }
        }
        REQUIRE(tv_distance(cmu, cnu) <= tv_distance(mu, nu) + 1e-12);
    }
}

TEST_CASE("delta_op") {
    std::array<std::vector<Counts>, 4> same;
    for (auto &c : same) c = {Counts{10, 20, 30, 40}, Counts{10, 20, 30, 40}, Counts{10, 20, 30, 40}};
    const auto zero = delta_op(binned_from(same));
    CHECK(zero.global == 0.0);
    for (double v : zero.per_context) CHECK(v == 0.0);

    auto disjoint = same;
    disjoint[2] = {Counts{100, 0, 0, 0}, Counts{0, 100, 0, 0}, Counts{100, 0, 0, 0}};
    const auto d = delta_op(binned_from(disjoint));
    CHECK(d.per_context[2] == 1.0);
    CHECK(d.global == 1.0);

    std::array<std::vector<Counts>, 4> one;
    for (auto &c : one) c = {Counts{1, 1, 1, 1}};
    CHECK_THROWS_AS(delta_op(binned_from(one)), ValidationError);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 200; ++t) {
        const auto b = iid_counts({0.4, 0.1, 0.1, 0.4}, 2 + t % 7, 64, static_cast<std::uint64_t>(t));
        const auto r = delta_op(b);
        double global = 0;
        for (int c = 0; c < 4; ++c) {
            double best = 0;
            for (const auto &x : b.contexts[c]) {
                for (const auto &y : b.contexts[c]) {
                    double s = 0;
                    for (int i = 0; i < 4; ++i)
                        s += std::abs(static_cast<double>(x.counts[i]) - static_cast<double>(y.counts[i]));
                    best = std::max(best, s / 2 / 64);
                }
            }
            REQUIRE(std::abs(r.per_context[c] - best) < 1e-12);
            global = std::max(global, best);
        }
        REQUIRE(r.global == doctest::Approx(global));
    }
}

TEST_CASE("mc_null basics and determinism") {
    NullSpec degenerate;
    degenerate.shots_per_bin = 100;
    degenerate.bins_per_context = {3, 3, 3, 3};
    degenerate.pooled.fill({1, 0, 0, 0});
    const auto d = mc_null(degenerate, 1, 7);
    CHECK(d.global == std::vector<double>{0.0});

    const auto data = iid_counts({0.3, 0.2, 0.2, 0.3}, 6, 1024, 1);
    const auto spec = null_spec_for(data);
    const auto a = mc_null(spec, 300, 99);
    const auto b = mc_null(spec, 300, 99);
    const auto c = mc_null(spec, 300, 99, {}, 4);
    CHECK(a.global == b.global);
    CHECK(a.global == c.global);
    CHECK(a.per_context == c.per_context);
    CHECK(mc_null(spec, 300, 100).global != a.global);
    CHECK_THROWS_AS(mc_null(spec, 0, 1), ValidationError);
}

TEST_CASE("mc_null mean agrees with an independent resampling oracle") {
    const Probabilities uniform{0.25, 0.25, 0.25, 0.25};
    const int K = 6, trials = 2000;
    const std::uint64_t shots = 1024;
    const auto null = mc_null(shots, K, {uniform, uniform, uniform, uniform}, trials, 5);
    double oracle_mean = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::vector<double>> freqs;
        for (int k = 0; k < K; ++k) {
            const auto c = oracle::sample_shots(uniform, shots, static_cast<std::uint64_t>(t * K + k + 12345));
            freqs.push_back({c[0] / 1024.0, c[1] / 1024.0, c[2] / 1024.0, c[3] / 1024.0});
        }
        double best = 0;
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) best = std::max(best, oracle::tv_by_events(freqs[i], freqs[j]));
        oracle_mean += best / trials;
    }
    for (int c = 0; c < 4; ++c) {
        const double m = mean(null.per_context[c]);
        CHECK(std::abs(m - oracle_mean) < 0.1 * oracle_mean);
    }
}

TEST_CASE("null mean grows with the number of bins") {
    const Probabilities p{0.4, 0.1, 0.1, 0.4};
    double previous = 0;
    for (int K : {3, 6, 9, 12}) {
        const auto n = mc_null(1024, K, {p, p, p, p}, 500, 8);
        const double m = mean(n.global);
        CHECK(m >= previous);
        previous = m;
    }
}

TEST_CASE("p_value and summaries") {
    std::vector<double> null(999);
    for (int i = 0; i < 999; ++i) null[i] = i;
    CHECK(p_value(5000, null) == doctest::Approx(1.0 / 1000));
    CHECK(p_value(-1, null) == 1.0);
    CHECK(std::abs(p_value(499, null) - 0.5) < 0.01);
    CHECK_THROWS_AS(p_value(1, std::vector<double>{}), ValidationError);
    CHECK(mean(null) == doctest::Approx(499));
    CHECK(quantile(null, 0.5) == doctest::Approx(499));
    CHECK(quantile(null, 0.0) == 0);
    CHECK(quantile(null, 1.0) == 998);
    CHECK(stddev(std::vector<double>{1, 2, 3, 4}) == doctest::Approx(std::sqrt(5.0 / 3)));
    const auto s = summarize(997.5, null);
    CHECK(s.p_value == doctest::Approx(2.0 / 1000));
    CHECK(s.q99 == doctest::Approx(quantile(null, 0.99)));
}

TEST_CASE("IID p-values are not anti-conservative (reduced run)") {
    int below = 0;
    const int runs = 200;
    for (int r = 0; r < runs; ++r) {
        const auto data = iid_counts({0.35, 0.15, 0.15, 0.35}, 6, 1024, static_cast<std::uint64_t>(r + 500));
        const auto rep = drift_report(data, 199, static_cast<std::uint64_t>(r), {}, 0);
        REQUIRE(rep.global_null.p_value > 0.0);
        REQUIRE(rep.global_null.p_value <= 1.0);
        below += rep.global_null.p_value < 0.05;
    }
    CHECK(below <= 0.05 * runs + 3 * std::sqrt(0.05 * 0.95 * runs));
}

TEST_CASE("drift_report with identity transform equals plain report") {
    const auto data = iid_counts({0.3, 0.2, 0.1, 0.4}, 4, 512, 3);
    const auto plain = drift_report(data, 100, 1, {}, 20);
    const auto same = drift_report(data, 100, 1, [](const Counts &c) { return frequencies(c); }, 20);
    CHECK(plain.observed.global == same.observed.global);
    CHECK(plain.global_null.mean == same.global_null.mean);
    CHECK(plain.observed_global_std == same.observed_global_std);
    CHECK(plain.observed_global_std > 0);
    CHECK(plain.num_null_trials == 100);
}

TEST_CASE("marginals") {
    const auto m = marginals(Counts{0, 512, 512, 0});
    CHECK(m.alice == std::array<double, 2>{0.5, 0.5});
    CHECK(m.bob == std::array<double, 2>{0.5, 0.5});
    const auto one = marginals(Counts{1024, 0, 0, 0});
    CHECK(one.alice == std::array<double, 2>{1, 0});
    CHECK(one.bob == std::array<double, 2>{1, 0});
    CHECK_THROWS_AS(marginals(Counts{0, 0, 0, 0}), ValidationError);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        Counts c{rng() % 100, rng() % 100, rng() % 100, rng() % 100 + 1};
        const double n = static_cast<double>(total(c));
        const auto mm = marginals(c);
        CHECK(mm.alice[0] == doctest::Approx((c[0] + c[1]) / n));
        CHECK(mm.bob[0] == doctest::Approx((c[0] + c[2]) / n));
        CHECK(mm.alice[0] + mm.alice[1] == doctest::Approx(1.0));
    }
}

TEST_CASE("two-proportion z against closed form and chi-square oracle") {
    const auto same = two_proportion_z(std::uint64_t{300}, 1024, std::uint64_t{300}, 1024);
    CHECK(same.z == 0.0);
    CHECK(same.p_value == 1.0);
    CHECK(same.difference == 0.0);

    const auto t = two_proportion_z(std::uint64_t{512}, 1024, std::uint64_t{576}, 1024);
    const double p1 = 0.5, p2 = 576.0 / 1024, pool = 1088.0 / 2048;
    const double z = (p1 - p2) / std::sqrt(pool * (1 - pool) * (2.0 / 1024));
    CHECK(std::abs(t.z - z) < 1e-10);
    CHECK(std::abs(t.p_value - std::erfc(std::abs(z) / std::sqrt(2.0))) < 1e-10);

    std::mt19937_64 rng(31);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t n1 = 50 + rng() % 2000, n2 = 50 + rng() % 2000;
        const std::uint64_t s1 = 1 + rng() % (n1 - 1), s2 = 1 + rng() % (n2 - 1);
        const auto r = two_proportion_z(s1, n1, s2, n2);
        const auto o = oracle::pearson_2x2(static_cast<double>(s1), static_cast<double>(n1),
                                           static_cast<double>(s2), static_cast<double>(n2));
        REQUIRE(std::abs(r.z * r.z - o.statistic) < 1e-10 * std::max(1.0, o.statistic));
        REQUIRE(std::abs(r.p_value - o.p_value) < 1e-10);
        REQUIRE(r.difference == doctest::Approx(static_cast<double>(s1) / n1 - static_cast<double>(s2) / n2));
    }

    const auto exact_equal = two_proportion_z(std::uint64_t{0}, 100, std::uint64_t{0}, 200);
    CHECK(exact_equal.exact);
    CHECK(exact_equal.p_value == 1.0);
    CHECK(std::abs(normal_two_sided_p(1.959963984540054) - 0.05) < 1e-12);
}

TEST_CASE("no-signaling report") {
    const std::array<Counts, 4> same{Counts{100, 200, 300, 400}, Counts{100, 200, 300, 400},
                                     Counts{100, 200, 300, 400}, Counts{100, 200, 300, 400}};
    const auto r = no_signaling_test(same);
    CHECK(r.max_abs_marginal_deviation == 0.0);
    CHECK(r.min_p == 1.0);
    CHECK(r.min_p_bonferroni == 1.0);

    const std::array<Counts, 4> skew{Counts{500, 100, 200, 224}, Counts{400, 100, 300, 224},
                                     Counts{300, 300, 200, 224}, Counts{200, 300, 300, 224}};
    const auto s = no_signaling_test(skew);
    CHECK(s.comparisons[0].party == 'A');
    CHECK(s.comparisons[0].first == Context::XY);
    CHECK(s.comparisons[0].second == Context::XYp);
    CHECK(s.comparisons[1].first == Context::XpY);
    CHECK(s.comparisons[1].second == Context::XpYp);
    CHECK(s.comparisons[2].party == 'B');
    CHECK(s.comparisons[2].first == Context::XY);
    CHECK(s.comparisons[2].second == Context::XpY);
    CHECK(s.comparisons[3].first == Context::XYp);
    CHECK(s.comparisons[3].second == Context::XpYp);
    // Alice(xy) = 600/1024, Alice(xy') = 500/1024.
    CHECK(s.comparisons[0].test.difference == doctest::Approx(100.0 / 1024));
    double max_dev = 0, min_p = 1;
    for (const auto &c : s.comparisons) {
        max_dev = std::max(max_dev, std::abs(c.test.difference));
        min_p = std::min(min_p, c.test.p_value);
    }
    CHECK(s.max_abs_marginal_deviation == doctest::Approx(max_dev));
    CHECK(s.min_p == min_p);
    CHECK(s.min_p_bonferroni == doctest::Approx(std::min(1.0, 4 * min_p)));
    CHECK(s.min_p_bonferroni >= s.min_p);
}
