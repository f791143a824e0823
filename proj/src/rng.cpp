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

#include "belldrift/rng.hpp"

#include <array>
#include <vector>

namespace belldrift {

namespace {

std::uint64_t seed_from(std::initializer_list<std::uint64_t> words) {
    std::vector<std::uint32_t> halves;
    halves.reserve(2 * words.size());
    for (auto w : words) {
        halves.push_back(static_cast<std::uint32_t>(w));
        halves.push_back(static_cast<std::uint32_t>(w >> 32));
    }
    std::seed_seq seq(halves.begin(), halves.end());
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) { return seed_from({root, stream}); }

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream_a, std::uint64_t stream_b) {
    return seed_from({root, stream_a, stream_b});
}

void sample_multinomial(Rng &rng, std::span<const double> probs, std::uint64_t shots,
                        std::span<std::uint64_t> out) {
    if (out.size() != probs.size()) {
        throw ValidationError("multinomial output size does not match probability vector");
    }
    // suffix[i] = mass of outcomes i..n-1, negatives within tolerance clipped to 0.
    std::vector<double> suffix(probs.size() + 1, 0.0);
    for (std::size_t i = probs.size(); i-- > 0;) {
        if (!(probs[i] >= -1e-12)) {
            throw ValidationError("multinomial probability is negative or not finite");
        }
        suffix[i] = suffix[i + 1] + (probs[i] > 0.0 ? probs[i] : 0.0);
    }
    if (suffix[0] <= 0.0) {
        throw ValidationError("multinomial probabilities have no mass");
    }
    std::uint64_t remaining = shots;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double p = probs[i] > 0.0 ? probs[i] : 0.0;
        std::uint64_t k = 0;
        if (remaining > 0 && p > 0.0) {
            if (suffix[i + 1] <= 0.0) {
                k = remaining;
            } else {
                double conditional = p / suffix[i];
                std::binomial_distribution<std::uint64_t> binom(remaining, conditional < 1.0 ? conditional : 1.0);
                k = binom(rng);
            }
        }
        out[i] = k;
        remaining -= k;
    }
}

Counts sample_multinomial(Rng &rng, const Probabilities &probs, std::uint64_t shots) {
    Counts out{};
    sample_multinomial(rng, probs, shots, out);
    return out;
}

}  // namespace belldrift
