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

#include <cstdint>
#include <random>
#include <span>

#include "belldrift/core.hpp"

namespace belldrift {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from a root seed and a stream index.
///
/// Stream seeds depend only on (root, stream), never on call order, so
/// parallel and sequential executions draw identical samples.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream_a, std::uint64_t stream_b);

/// Multinomial draw by sequential conditional binomials. `out.size()` must equal `probs.size()`.
void sample_multinomial(Rng &rng, std::span<const double> probs, std::uint64_t shots,
                        std::span<std::uint64_t> out);

Counts sample_multinomial(Rng &rng, const Probabilities &probs, std::uint64_t shots);

}  // namespace belldrift
