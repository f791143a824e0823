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

#include "belldrift/core.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace belldrift {

std::string_view context_label(Context c) {
    switch (c) {
        case Context::XY:
            return "xy";
        case Context::XYp:
            return "xy'";
        case Context::XpY:
            return "x'y";
        case Context::XpYp:
            return "x'y'";
    }
    throw ValidationError("invalid context value");
}

Context parse_context(std::string_view label) {
    for (Context c : kContexts) {
        if (context_label(c) == label) {
            return c;
        }
    }
    throw ValidationError("unknown context label '" + std::string(label) + "' (expected xy, xy', x'y or x'y')");
}

std::uint64_t total(const Counts &counts) {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

Probabilities frequencies(const Counts &counts) {
    auto n = total(counts);
    if (n == 0) {
        throw ValidationError("cannot form frequencies from zero shots");
    }
    Probabilities p{};
    for (std::size_t i = 0; i < kNumOutcomes; ++i) {
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    }
    return p;
}

void require_simplex(std::span<const double> p, double tol, std::string_view what) {
    double sum = 0.0;
    for (double v : p) {
        if (!std::isfinite(v) || v < -tol) {
            std::ostringstream msg;
            msg << what << ": entry " << v << " is not a valid probability";
            throw ValidationError(msg.str());
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
        std::ostringstream msg;
        msg << what << ": probabilities sum to " << sum << ", expected 1";
        throw ValidationError(msg.str());
    }
}

Counts BinnedCounts::pooled(Context c) const {
    Counts out{};
    for (const auto &b : of(c)) {
        for (std::size_t i = 0; i < kNumOutcomes; ++i) {
            out[i] += b.counts[i];
        }
    }
    return out;
}

void BinnedCounts::validate() const {
    if (num_bins < 1) {
        throw ValidationError("binned counts need at least one bin");
    }
    if (shots_per_bin == 0) {
        throw ValidationError("shots_per_bin must be positive");
    }
    for (Context c : kContexts) {
        std::set<int> seen;
        int previous = 0;
        for (const auto &b : of(c)) {
            std::ostringstream where;
            where << "context " << context_label(c) << ", bin " << b.bin;
            if (b.bin < 1 || b.bin > num_bins) {
                throw ValidationError(where.str() + ": bin outside 1.." + std::to_string(num_bins));
            }
            if (!seen.insert(b.bin).second) {
                throw ValidationError(where.str() + ": duplicate bin");
            }
            if (b.bin < previous) {
                throw ValidationError(where.str() + ": bins not in increasing order");
            }
            previous = b.bin;
            if (total(b.counts) != shots_per_bin) {
                throw ValidationError(where.str() + ": counts sum to " + std::to_string(total(b.counts)) +
                                      ", expected " + std::to_string(shots_per_bin));
            }
        }
    }
}

BinnedFrequencies to_frequencies(const BinnedCounts &binned) {
    BinnedFrequencies out;
    out.num_bins = binned.num_bins;
    for (Context c : kContexts) {
        for (const auto &b : binned.of(c)) {
            out.of(c).push_back({b.bin, frequencies(b.counts)});
        }
    }
    return out;
}

}  // namespace belldrift
