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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace belldrift {

/// Raised for malformed inputs: bad arguments, schema violations, invalid files.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot proceed (singular or badly conditioned matrices).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The four CHSH measurement contexts, in canonical order.
///
/// The order is also the blocked-schedule execution order and the index into
/// every per-context array in the library.
enum class Context : std::uint8_t { XY = 0, XYp = 1, XpY = 2, XpYp = 3 };

inline constexpr std::array<Context, 4> kContexts = {Context::XY, Context::XYp, Context::XpY, Context::XpYp};

constexpr std::size_t index_of(Context c) { return static_cast<std::size_t>(c); }

/// Setting indices (0 = unprimed, 1 = primed) for Alice and Bob.
constexpr int alice_setting(Context c) { return index_of(c) >= 2 ? 1 : 0; }
constexpr int bob_setting(Context c) { return index_of(c) % 2 == 1 ? 1 : 0; }

/// CHSH sign: minus on x'y'.
constexpr double chsh_sign(Context c) { return c == Context::XpYp ? -1.0 : 1.0; }

/// Labels used in files: xy, xy', x'y, x'y'.
std::string_view context_label(Context c);
Context parse_context(std::string_view label);

/// Two-bit outcomes are indexed 2*a + b with qubit/party A as the left bit:
/// 0 -> "00", 1 -> "01", 2 -> "10", 3 -> "11".
inline constexpr std::size_t kNumOutcomes = 4;

using Probabilities = std::array<double, kNumOutcomes>;
using Counts = std::array<std::uint64_t, kNumOutcomes>;

std::uint64_t total(const Counts &counts);
Probabilities frequencies(const Counts &counts);

/// Checks entries >= -tol and sum within tol of 1. Throws ValidationError naming `what`.
void require_simplex(std::span<const double> p, double tol, std::string_view what);

/// Counts for one temporal bin of one context. Bins are 1-based.
struct BinCounts {
    int bin = 0;
    Counts counts{};
    bool operator==(const BinCounts &) const = default;
};

/// Shot counts organized by context and temporal bin.
///
/// Every bin holds exactly `shots_per_bin` shots. A context may cover any
/// subset of 1..num_bins (custom schedules), stored in increasing bin order.
struct BinnedCounts {
    std::string experiment_id;
    int num_bins = 0;
    std::uint64_t shots_per_bin = 0;
    std::array<std::vector<BinCounts>, 4> contexts;

    const std::vector<BinCounts> &of(Context c) const { return contexts[index_of(c)]; }
    std::vector<BinCounts> &of(Context c) { return contexts[index_of(c)]; }

    /// Sum of a context's counts over all of its bins.
    Counts pooled(Context c) const;

    /// Throws ValidationError on wrong shot totals, duplicate or out-of-range bins.
    void validate() const;

    bool operator==(const BinnedCounts &) const = default;
};

/// Per-(context, bin) outcome frequencies, e.g. after readout mitigation.
struct BinFrequencies {
    int bin = 0;
    Probabilities probs{};
    bool operator==(const BinFrequencies &) const = default;
};

struct BinnedFrequencies {
    int num_bins = 0;
    std::array<std::vector<BinFrequencies>, 4> contexts;

    const std::vector<BinFrequencies> &of(Context c) const { return contexts[index_of(c)]; }
    std::vector<BinFrequencies> &of(Context c) { return contexts[index_of(c)]; }

    bool operator==(const BinnedFrequencies &) const = default;
};

BinnedFrequencies to_frequencies(const BinnedCounts &binned);

}  // namespace belldrift
