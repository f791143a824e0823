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

#include "belldrift/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

#include "belldrift/rng.hpp"

namespace belldrift::stats {

namespace {

double tv_unchecked(const Probabilities &p, const Probabilities &q) {
    double l1 = 0.0;
    for (std::size_t i = 0; i < kNumOutcomes; ++i) {
        l1 += std::abs(p[i] - q[i]);
    }
    return 0.5 * l1;
}

double max_pairwise_tv(std::span<const Probabilities> bins) {
    double worst = 0.0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        for (std::size_t j = i + 1; j < bins.size(); ++j) {
            worst = std::max(worst, tv_unchecked(bins[i], bins[j]));
        }
    }
    return worst;
}

Probabilities apply_transform(const BinTransform &transform, const Counts &counts) {
    return transform ? transform(counts) : frequencies(counts);
}

void require_two_bins(std::size_t n, Context c) {
    if (n < 2) {
        throw ValidationError("context " + std::string(context_label(c)) +
                              " needs at least two bins for drift statistics");
    }
}

// Runs body(t) for t in [0, n) on up to `threads` workers. Each index is
// processed exactly once; results must be written to per-index storage.
template <typename Body>
void parallel_for(int n, unsigned threads, Body body) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1))));
    if (workers == 1) {
        for (int t = 0; t < n; ++t) {
            body(t);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int t = static_cast<int>(w); t < n; t += static_cast<int>(workers)) {
                body(t);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

}  // namespace

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw ValidationError("tv_distance: distributions have different support sizes (" + std::to_string(p.size()) +
                              " vs " + std::to_string(q.size()) + ")");
    }
    require_simplex(p, 1e-9, "tv_distance first argument");
    require_simplex(q, 1e-9, "tv_distance second argument");
    double l1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        l1 += std::abs(p[i] - q[i]);
    }
    return std::min(1.0, 0.5 * l1);
}

DriftStatistics delta_op(const BinnedCounts &binned) {
    DriftStatistics out;
    std::vector<Probabilities> bins;
    for (Context c : kContexts) {
        const auto &cells = binned.of(c);
        require_two_bins(cells.size(), c);
        bins.clear();
        for (const auto &cell : cells) {
            if (total(cell.counts) == 0) {
                throw ValidationError("context " + std::string(context_label(c)) + ", bin " +
                                      std::to_string(cell.bin) + " has zero shots");
            }
            bins.push_back(frequencies(cell.counts));
        }
        out.per_context[index_of(c)] = max_pairwise_tv(bins);
        out.global = std::max(out.global, out.per_context[index_of(c)]);
    }
    return out;
}

DriftStatistics delta_op(const BinnedFrequencies &binned) {
    DriftStatistics out;
    std::vector<Probabilities> bins;
    for (Context c : kContexts) {
        const auto &cells = binned.of(c);
        require_two_bins(cells.size(), c);
        bins.clear();
        for (const auto &cell : cells) {
            require_simplex(cell.probs, 1e-9, "bin distribution");
            bins.push_back(cell.probs);
        }
        out.per_context[index_of(c)] = max_pairwise_tv(bins);
        out.global = std::max(out.global, out.per_context[index_of(c)]);
    }
    return out;
}

NullSpec null_spec_for(const BinnedCounts &binned) {
    NullSpec spec;
    spec.shots_per_bin = binned.shots_per_bin;
    for (Context c : kContexts) {
        spec.bins_per_context[index_of(c)] = static_cast<int>(binned.of(c).size());
        spec.pooled[index_of(c)] = frequencies(binned.pooled(c));
    }
    return spec;
}

NullSample mc_null(const NullSpec &spec, int trials, std::uint64_t seed, const BinTransform &transform,
                   unsigned threads) {
    if (trials < 1) {
        throw ValidationError("mc_null needs at least one trial");
    }
    if (spec.shots_per_bin == 0) {
        throw ValidationError("mc_null needs positive shots per bin");
    }
    for (Context c : kContexts) {
        require_two_bins(static_cast<std::size_t>(std::max(spec.bins_per_context[index_of(c)], 0)), c);
        require_simplex(spec.pooled[index_of(c)], 1e-9, "pooled distribution");
    }

    NullSample out;
    for (auto &v : out.per_context) {
        v.assign(static_cast<std::size_t>(trials), 0.0);
    }
    out.global.assign(static_cast<std::size_t>(trials), 0.0);

    parallel_for(trials, threads, [&](int t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<Probabilities> bins;
        double global = 0.0;
        for (Context c : kContexts) {
            const auto ci = index_of(c);
            bins.clear();
            for (int k = 0; k < spec.bins_per_context[ci]; ++k) {
                bins.push_back(apply_transform(transform, sample_multinomial(rng, spec.pooled[ci], spec.shots_per_bin)));
            }
            const double d = max_pairwise_tv(bins);
            out.per_context[ci][static_cast<std::size_t>(t)] = d;
            global = std::max(global, d);
        }
        out.global[static_cast<std::size_t>(t)] = global;
    });
    return out;
}

NullSample mc_null(std::uint64_t shots_per_bin, int num_bins, const std::array<Probabilities, 4> &pooled, int trials,
                   std::uint64_t seed) {
    NullSpec spec{shots_per_bin, {num_bins, num_bins, num_bins, num_bins}, pooled};
    return mc_null(spec, trials, seed);
}

double p_value(double observed, std::span<const double> null_sample) {
    if (null_sample.empty()) {
        throw ValidationError("p_value needs a nonempty null sample");
    }
    const auto exceed = std::count_if(null_sample.begin(), null_sample.end(), [&](double v) { return v >= observed; });
    return (1.0 + static_cast<double>(exceed)) / (1.0 + static_cast<double>(null_sample.size()));
}

double mean(std::span<const double> xs) {
    if (xs.empty()) {
        return 0.0;
    }
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
    if (xs.size() < 2) {
        return 0.0;
    }
    const double m = mean(xs);
    double ss = 0.0;
    for (double v : xs) {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile(std::span<const double> xs, double q) {
    if (xs.empty()) {
        throw ValidationError("quantile of an empty sample");
    }
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

NullSummary summarize(double observed, std::span<const double> null_sample) {
    NullSummary s;
    s.mean = mean(null_sample);
    s.std = stddev(null_sample);
    s.q025 = quantile(null_sample, 0.025);
    s.q975 = quantile(null_sample, 0.975);
    s.q99 = quantile(null_sample, 0.99);
    s.p_value = p_value(observed, null_sample);
    return s;
}

double bootstrap_std(const BinnedCounts &binned, int replicates, std::uint64_t seed, const BinTransform &transform) {
    if (replicates < 2) {
        return 0.0;
    }
    std::vector<double> globals(static_cast<std::size_t>(replicates), 0.0);
    std::vector<Probabilities> bins;
    for (int r = 0; r < replicates; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        double global = 0.0;
        for (Context c : kContexts) {
            bins.clear();
            for (const auto &cell : binned.of(c)) {
                const auto resampled = sample_multinomial(rng, frequencies(cell.counts), binned.shots_per_bin);
                bins.push_back(apply_transform(transform, resampled));
            }
            global = std::max(global, max_pairwise_tv(bins));
        }
        globals[static_cast<std::size_t>(r)] = global;
    }
    return stddev(globals);
}

DriftReport drift_report(const BinnedCounts &binned, int trials, std::uint64_t seed, const BinTransform &transform,
                         int bootstrap_replicates, unsigned threads) {
    binned.validate();
    DriftReport report;
    report.mitigated = static_cast<bool>(transform);
    if (transform) {
        BinnedFrequencies transformed;
        transformed.num_bins = binned.num_bins;
        for (Context c : kContexts) {
            for (const auto &cell : binned.of(c)) {
                transformed.of(c).push_back({cell.bin, transform(cell.counts)});
            }
        }
        report.observed = delta_op(transformed);
    } else {
        report.observed = delta_op(binned);
    }
    const auto null = mc_null(null_spec_for(binned), trials, derive_seed(seed, 1), transform, threads);
    for (Context c : kContexts) {
        const auto ci = index_of(c);
        report.per_context_null[ci] = summarize(report.observed.per_context[ci], null.per_context[ci]);
    }
    report.global_null = summarize(report.observed.global, null.global);
    report.num_null_trials = trials;
    report.observed_global_std = bootstrap_std(binned, bootstrap_replicates, derive_seed(seed, 2), transform);
    return report;
}

Marginals marginals(const Counts &counts) {
    if (total(counts) == 0) {
        throw ValidationError("marginals of zero shots");
    }
    return marginals(frequencies(counts));
}

Marginals marginals(const Probabilities &p) {
    Marginals m;
    m.alice = {p[0] + p[1], p[2] + p[3]};
    m.bob = {p[0] + p[2], p[1] + p[3]};
    return m;
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::numbers::sqrt2); }

ProportionTest two_proportion_z(double p1, double n1, double p2, double n2) {
    if (!(n1 > 0.0 && n2 > 0.0)) {
        throw ValidationError("two-proportion test needs positive sample sizes");
    }
    ProportionTest t;
    t.difference = p1 - p2;
    const double pooled = (p1 * n1 + p2 * n2) / (n1 + n2);
    const double var = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2);
    if (pooled <= 0.0 || pooled >= 1.0 || !(var > 0.0)) {
        t.exact = true;
        t.z = 0.0;
        t.p_value = t.difference == 0.0 ? 1.0 : 0.0;
        return t;
    }
    t.z = t.difference / std::sqrt(var);
    t.p_value = normal_two_sided_p(t.z);
    return t;
}

ProportionTest two_proportion_z(std::uint64_t successes1, std::uint64_t n1, std::uint64_t successes2,
                                std::uint64_t n2) {
    if (n1 == 0 || n2 == 0) {
        throw ValidationError("two-proportion test needs positive sample sizes");
    }
    return two_proportion_z(static_cast<double>(successes1) / static_cast<double>(n1), static_cast<double>(n1),
                            static_cast<double>(successes2) / static_cast<double>(n2), static_cast<double>(n2));
}

NoSignalingReport no_signaling_test(const std::array<Probabilities, 4> &probs, const std::array<double, 4> &shots) {
    std::array<Marginals, 4> m;
    for (Context c : kContexts) {
        if (!(shots[index_of(c)] > 0.0)) {
            throw ValidationError("context " + std::string(context_label(c)) + " has zero shots");
        }
        m[index_of(c)] = marginals(probs[index_of(c)]);
    }
    auto compare = [&](char party, Context a, Context b) {
        MarginalComparison cmp{party, a, b, {}};
        const auto ia = index_of(a);
        const auto ib = index_of(b);
        const double pa = party == 'A' ? m[ia].alice[0] : m[ia].bob[0];
        const double pb = party == 'A' ? m[ib].alice[0] : m[ib].bob[0];
        cmp.test = two_proportion_z(pa, shots[ia], pb, shots[ib]);
        return cmp;
    };

    NoSignalingReport r;
    r.comparisons = {compare('A', Context::XY, Context::XYp), compare('A', Context::XpY, Context::XpYp),
                     compare('B', Context::XY, Context::XpY), compare('B', Context::XYp, Context::XpYp)};
    for (const auto &cmp : r.comparisons) {
        r.max_abs_marginal_deviation = std::max(r.max_abs_marginal_deviation, std::abs(cmp.test.difference));
        r.min_p = std::min(r.min_p, cmp.test.p_value);
    }
    r.max_abs_marginal_deviation = std::min(1.0, r.max_abs_marginal_deviation);
    r.min_p_bonferroni = std::min(1.0, 4.0 * r.min_p);
    return r;
}

NoSignalingReport no_signaling_test(const std::array<Counts, 4> &counts) {
    std::array<Probabilities, 4> probs{};
    std::array<double, 4> shots{};
    for (Context c : kContexts) {
        const auto n = total(counts[index_of(c)]);
        if (n == 0) {
            throw ValidationError("context " + std::string(context_label(c)) + " has zero shots");
        }
        probs[index_of(c)] = frequencies(counts[index_of(c)]);
        shots[index_of(c)] = static_cast<double>(n);
    }
    return no_signaling_test(probs, shots);
}

}  // namespace belldrift::stats
