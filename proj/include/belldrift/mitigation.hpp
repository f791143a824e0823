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
#include <cstdint>
#include <string>

#include "belldrift/core.hpp"

namespace belldrift::qsim {
struct NoiseSpec;
}

namespace belldrift::mitigation {

/// Two-qubit readout assignment matrix, entry (x, y) = P(measured x | prepared y).
///
/// Acts on column probability vectors; every column sums to one.
class AssignmentMatrix {
public:
    using Entries = std::array<std::array<double, 4>, 4>;

    AssignmentMatrix();  // identity
    /// Rows are measured outcomes, columns are prepared states. Throws
    /// ValidationError unless entries are in [0, 1] and each column sums to 1 within 1e-9.
    explicit AssignmentMatrix(const Entries &row_major, std::uint64_t calibration_shots = 0,
                              std::string label = {});

    static AssignmentMatrix identity() { return AssignmentMatrix(); }
    /// Tensor product of independent symmetric bit flips on A (left bit) and B.
    static AssignmentMatrix symmetric_flips(double eps_a, double eps_b);

    double operator()(std::size_t measured, std::size_t prepared) const { return entries_[measured][prepared]; }
    const Entries &entries() const { return entries_; }
    std::uint64_t calibration_shots() const { return calibration_shots_; }
    const std::string &label() const { return label_; }

    /// M p.
    Probabilities apply(const Probabilities &p) const;

    bool operator==(const AssignmentMatrix &) const = default;

private:
    Entries entries_{};
    std::uint64_t calibration_shots_ = 0;
    std::string label_;
};

/// Column y is the exact outcome distribution of basis state y under `noise`.
AssignmentMatrix calibrate_exact(const qsim::NoiseSpec &noise);
/// Column y is the empirical distribution of `shots_per_basis_state` shots of basis state y.
AssignmentMatrix calibrate(const qsim::NoiseSpec &noise, std::uint64_t shots_per_basis_state, std::uint64_t seed);
/// Columns are the normalized count vectors observed for prepared states 00, 01, 10, 11.
AssignmentMatrix calibrate_from_counts(const std::array<Counts, 4> &counts_per_prepared_state);

/// 2-norm condition number (ratio of extreme singular values).
/// Throws NumericalError when the smallest singular value is below 1e-12.
double condition_number(const AssignmentMatrix &m);

inline constexpr double kDefaultMaxCondition = 100.0;

struct MitigatedDistribution {
    Probabilities probs{};
    bool clipped = false;
};

/// Linear inversion M^-1 p followed by clipping negatives and renormalizing.
/// Throws NumericalError when M is singular or its condition number exceeds `max_condition`.
MitigatedDistribution mitigate(const Probabilities &frequencies, const AssignmentMatrix &m,
                               double max_condition = kDefaultMaxCondition);
MitigatedDistribution mitigate(const Counts &counts, const AssignmentMatrix &m,
                               double max_condition = kDefaultMaxCondition);

struct MitigatedBins {
    BinnedFrequencies frequencies;
    int clipped_cells = 0;
};

/// Mitigates every (context, bin) cell independently. Errors name the offending cell.
MitigatedBins mitigate_binned(const BinnedCounts &binned, const AssignmentMatrix &m,
                              double max_condition = kDefaultMaxCondition);

/// Change between two calibration snapshots.
struct CalibrationDrift {
    double frobenius = 0.0;
    double max_abs_entry = 0.0;
    double condition_a = 0.0;
    double condition_b = 0.0;
};

CalibrationDrift compare(const AssignmentMatrix &a, const AssignmentMatrix &b);

}  // namespace belldrift::mitigation
