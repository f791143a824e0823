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

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"

#include "../oracles.hpp"
#include "belldrift/schedule.hpp"

using namespace belldrift;
using namespace belldrift::schedule;

namespace {

const Context XY = Context::XY, XYp = Context::XYp, XpY = Context::XpY, XpYp = Context::XpYp;

/// Occupancy histograms built slot by slot, then max pairwise event-gap TV.
double oracle_delta_sched(const Schedule &s, DriftIndexRule rule) {
    const int k = s.num_bins;
    const std::size_t n = s.slots.size();
    std::map<int, std::vector<double>> hist;
    for (std::size_t i = 0; i < n; ++i) {
        const int c = static_cast<int>(index_of(s.slots[i].context));
        const int d = rule == DriftIndexRule::PerBin ? s.slots[i].bin : static_cast<int>(i * k / n) + 1;
        auto &h = hist[c];
        h.resize(static_cast<std::size_t>(k), 0.0);
        h[static_cast<std::size_t>(d - 1)] += 1;
    }
    for (auto &[c, h] : hist) {
        double t = 0;
        for (double v : h) t += v;
        for (double &v : h) v /= t;
    }
    double best = 0;
    for (auto &[c1, h1] : hist)
        for (auto &[c2, h2] : hist) best = std::max(best, oracle::tv_by_events(h1, h2));
    return best;
}

}  // namespace

TEST_CASE("round-robin and blocked slot orders") {
    const auto rr = make_schedule(Kind::RoundRobin, 2);
    const std::vector<Slot> rr_expected{{XY, 1}, {XYp, 1}, {XpY, 1}, {XpYp, 1},
                                        {XY, 2}, {XYp, 2}, {XpY, 2}, {XpYp, 2}};
    CHECK(rr.slots == rr_expected);
    const auto bl = make_schedule(Kind::Blocked, 2);
    const std::vector<Slot> bl_expected{{XY, 1},  {XY, 2},  {XYp, 1},  {XYp, 2},
                                        {XpY, 1}, {XpY, 2}, {XpYp, 1}, {XpYp, 2}};
    CHECK(bl.slots == bl_expected);
    const auto b12 = make_schedule(Kind::Blocked, 12);
    for (std::size_t i = 36; i < 48; ++i) CHECK(b12.slots[i].context == XpYp);
    CHECK_THROWS_AS(make_schedule(Kind::RoundRobin, 0), ValidationError);
    CHECK_THROWS_AS(make_schedule(Kind::Custom, 3), ValidationError);
}

TEST_CASE("slot coverage is a permutation of the grid") {
    for (int k = 1; k <= 12; ++k) {
        for (Kind kind : {Kind::RoundRobin, Kind::Blocked}) {
            const auto s = make_schedule(kind, k);
            std::set<std::pair<int, int>> seen;
            for (const auto &slot : s.slots) seen.insert({static_cast<int>(index_of(slot.context)), slot.bin});
            CHECK(seen.size() == static_cast<std::size_t>(4 * k));
            CHECK(s.slots.size() == static_cast<std::size_t>(4 * k));
            CHECK_NOTHROW(s.validate());
        }
    }
}

TEST_CASE("validation") {
    auto s = make_schedule(Kind::RoundRobin, 3);
    s.slots.pop_back();
    CHECK_THROWS_AS(s.validate(), ValidationError);
    CHECK_THROWS_AS(make_custom(2, {{XY, 1}, {XY, 1}}), ValidationError);
    CHECK_THROWS_AS(make_custom(2, {{XY, 3}}), ValidationError);
    CHECK_THROWS_AS(make_custom(2, {{XY, 0}}), ValidationError);
    CHECK_NOTHROW(make_custom(2, {{XY, 1}, {XpYp, 2}}));
}

TEST_CASE("names parse") {
    CHECK(parse_kind("round-robin") == Kind::RoundRobin);
    CHECK(parse_kind("rr") == Kind::RoundRobin);
    CHECK(parse_kind("blocked") == Kind::Blocked);
    CHECK(parse_kind("unbalanced") == Kind::Blocked);
    CHECK(parse_kind(kind_name(Kind::Custom)) == Kind::Custom);
    CHECK_THROWS_AS(parse_kind("weekly"), ValidationError);
    CHECK(parse_rule(rule_name(DriftIndexRule::PerSlot)) == DriftIndexRule::PerSlot);
    CHECK(parse_rule(rule_name(DriftIndexRule::PerBin)) == DriftIndexRule::PerBin);
    CHECK_THROWS_AS(parse_rule("hourly"), ValidationError);
    CHECK(default_rule(Kind::Blocked) == DriftIndexRule::PerSlot);
    CHECK(default_rule(Kind::RoundRobin) == DriftIndexRule::PerBin);
}

TEST_CASE("drift indices") {
    const auto bl = make_schedule(Kind::Blocked, 12);
    const auto per_slot = context_drift_indices(bl, DriftIndexRule::PerSlot);
    CHECK(per_slot[index_of(XY)] == std::vector<int>{1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3});
    CHECK(per_slot[index_of(XpYp)] == std::vector<int>{10, 10, 10, 10, 11, 11, 11, 11, 12, 12, 12, 12});
    const auto per_bin = context_drift_indices(bl, DriftIndexRule::PerBin);
    for (const auto &v : per_bin) CHECK(v == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    const auto rr = make_schedule(Kind::RoundRobin, 5);
    CHECK(drift_indices(rr, DriftIndexRule::PerSlot) == drift_indices(rr, DriftIndexRule::PerBin));
}

TEST_CASE("exposure limits") {
    for (int k : {1, 2, 3, 6, 12}) {
        CHECK(exposure(make_schedule(Kind::RoundRobin, k), DriftIndexRule::PerBin).delta_sched == 0.0);
        CHECK(exposure(make_schedule(Kind::RoundRobin, k), DriftIndexRule::PerSlot).delta_sched == 0.0);
        CHECK(exposure(make_schedule(Kind::Blocked, k), DriftIndexRule::PerBin).delta_sched == 0.0);
    }
    for (int k : {4, 8, 12}) {
        CHECK(exposure(make_schedule(Kind::Blocked, k)).delta_sched == doctest::Approx(1.0).epsilon(1e-15));
    }
    const auto one = make_custom(1, {{XY, 1}, {XYp, 1}, {XpY, 1}, {XpYp, 1}});
    CHECK(exposure(one, DriftIndexRule::PerBin).delta_sched == 0.0);
    const auto rep = exposure(make_schedule(Kind::Blocked, 12));
    for (const auto &h : rep.occupancy) {
        double t = 0;
        for (double v : h) t += v;
        CHECK(t == doctest::Approx(1.0));
    }
}

TEST_CASE("exposure matches occupancy oracle on random custom schedules") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 500; ++t) {
        const int k = std::uniform_int_distribution<int>(1, 8)(rng);
        std::vector<Slot> grid;
        for (Context c : kContexts)
            for (int b = 1; b <= k; ++b)
                if (rng() % 3 != 0 || b == 1) grid.push_back({c, b});
        std::shuffle(grid.begin(), grid.end(), rng);
        const auto s = make_custom(k, grid);
        for (auto rule : {DriftIndexRule::PerBin, DriftIndexRule::PerSlot}) {
            const auto rep = exposure(s, rule);
            REQUIRE(std::abs(rep.delta_sched - oracle_delta_sched(s, rule)) < 1e-12);
            REQUIRE(rep.delta_sched >= 0.0);
            REQUIRE(rep.delta_sched <= 1.0);
        }
        // Relabeling contexts leaves the factor unchanged.
        std::array<Context, 4> perm = kContexts;
        std::shuffle(perm.begin(), perm.end(), rng);
        auto relabeled = grid;
        for (auto &slot : relabeled) slot.context = perm[index_of(slot.context)];
        REQUIRE(exposure(make_custom(k, relabeled), DriftIndexRule::PerBin).delta_sched ==
                doctest::Approx(exposure(s, DriftIndexRule::PerBin).delta_sched).epsilon(1e-12));
        // Moving one slot onto a fresh bin used by no other context never lowers it.
        auto moved = grid;
        const std::size_t i = rng() % moved.size();
        moved[i].bin = k + 1;
        REQUIRE(exposure(make_custom(k + 1, moved), DriftIndexRule::PerBin).delta_sched >=
                exposure(s, DriftIndexRule::PerBin).delta_sched - 1e-12);
    }
}
