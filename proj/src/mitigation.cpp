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

#include "belldrift/mitigation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "belldrift/qsim.hpp"
#include "belldrift/rng.hpp"

namespace belldrift::mitigation {

namespace {

Eigen::Matrix4d as_eigen(const AssignmentMatrix &m) {
    Eigen::Matrix4d out;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out(r, c) = m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    return out;
}

AssignmentMatrix::Entries columns_to_entries(const std::array<Probabilities, 4> &columns) {
    AssignmentMatrix::Entries e{};
    for (std::size_t y = 0; y < 4; ++y) {
        for (std::size_t x = 0; x < 4; ++x) {
            e[x][y] = columns[y][x];
        }
    }
    return e;
}

qsim::TwoQubitState basis_state(std::size_t index) {
    qsim::TwoQubitState s;
    s.amplitudes[index] = 1.0;
    return s;
}

}  // namespace

AssignmentMatrix::AssignmentMatrix() {
    for (std::size_t i = 0; i < 4; ++i) {
        entries_[i][i] = 1.0;
    }
}

AssignmentMatrix::AssignmentMatrix(const Entries &row_major, std::uint64_t calibration_shots, std::string label)
    : entries_(row_major), calibration_shots_(calibration_shots), label_(std::move(label)) {
    for (std::size_t y = 0; y < 4; ++y) {
        double sum = 0.0;
        for (std::size_t x = 0; x < 4; ++x) {
            const double v = entries_[x][y];
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                std::ostringstream msg;
                msg << "assignment matrix entry (" << x << ", " << y << ") = " << v << " is outside [0, 1]";
                throw ValidationError(msg.str());
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            std::ostringstream msg;
            msg << "assignment matrix column " << y << " sums to " << sum << ", expected 1";
            throw ValidationError(msg.str());
        }
    }
}

AssignmentMatrix AssignmentMatrix::symmetric_flips(double eps_a, double eps_b) {
    if (!(eps_a >= 0.0 && eps_a <= 1.0 && eps_b >= 0.0 && eps_b <= 1.0)) {
        throw ValidationError("flip probabilities must lie in [0, 1]");
    }
    auto flip = [](std::size_t measured, std::size_t prepared, double eps) {
        return measured == prepared ? 1.0 - eps : eps;
    };
    Entries e{};
    for (std::size_t x = 0; x < 4; ++x) {
        for (std::size_t y = 0; y < 4; ++y) {
            e[x][y] = flip(x >> 1, y >> 1, eps_a) * flip(x & 1, y & 1, eps_b);
        }
    }
    return AssignmentMatrix(e);
}

Probabilities AssignmentMatrix::apply(const Probabilities &p) const {
    Probabilities out{};
    for (std::size_t x = 0; x < 4; ++x) {
        for (std::size_t y = 0; y < 4; ++y) {
            out[x] += entries_[x][y] * p[y];
        }
    }
    return out;
}

AssignmentMatrix calibrate_exact(const qsim::NoiseSpec &noise) {
    std::array<Probabilities, 4> columns{};
    for (std::size_t y = 0; y < 4; ++y) {
        columns[y] = qsim::measure_joint(basis_state(y), qsim::MeasurementAxis::z(), qsim::MeasurementAxis::z(), noise);
    }
    return AssignmentMatrix(columns_to_entries(columns), 0, "exact");
}

AssignmentMatrix calibrate(const qsim::NoiseSpec &noise, std::uint64_t shots_per_basis_state, std::uint64_t seed) {
    if (shots_per_basis_state == 0) {
        throw ValidationError("calibration needs at least one shot per basis state");
    }
    std::array<Counts, 4> counts{};
    for (std::size_t y = 0; y < 4; ++y) {
        const auto dist =
            qsim::measure_joint(basis_state(y), qsim::MeasurementAxis::z(), qsim::MeasurementAxis::z(), noise);
        counts[y] = qsim::sample_counts(dist, shots_per_basis_state, derive_seed(seed, y));
    }
    return calibrate_from_counts(counts);
}

AssignmentMatrix calibrate_from_counts(const std::array<Counts, 4> &counts_per_prepared_state) {
    std::array<Probabilities, 4> columns{};
    std::uint64_t shots = 0;
    for (std::size_t y = 0; y < 4; ++y) {
        const auto n = total(counts_per_prepared_state[y]);
        if (n == 0) {
            throw ValidationError("calibration column " + std::to_string(y) + " has zero total counts");
        }
        columns[y] = frequencies(counts_per_prepared_state[y]);
        shots = y == 0 ? n : std::min(shots, n);
    }
    return AssignmentMatrix(columns_to_entries(columns), shots, "empirical");
}

double condition_number(const AssignmentMatrix &m) {
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(as_eigen(m));
    const auto &s = svd.singularValues();
    const double smallest = s(3);
    if (smallest < 1e-12) {
        throw NumericalError("assignment matrix is singular (smallest singular value below 1e-12)");
    }
    return s(0) / smallest;
}

MitigatedDistribution mitigate(const Probabilities &frequencies, const AssignmentMatrix &m, double max_condition) {
    require_simplex(frequencies, 1e-9, "raw frequencies");
    const double kappa = condition_number(m);
    if (kappa > max_condition) {
        std::ostringstream msg;
        msg << "assignment matrix condition number " << kappa << " exceeds limit " << max_condition;
        throw NumericalError(msg.str());
    }
    const Eigen::Vector4d raw(frequencies[0], frequencies[1], frequencies[2], frequencies[3]);
    const Eigen::Vector4d solved = as_eigen(m).partialPivLu().solve(raw);

    MitigatedDistribution out;
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        double v = solved(i);
        if (v < 0.0) {
            out.clipped = true;
            v = 0.0;
        }
        out.probs[static_cast<std::size_t>(i)] = v;
        sum += v;
    }
    if (!(sum > 0.0)) {
        throw NumericalError("mitigated distribution has no positive mass");
    }
    for (auto &v : out.probs) {
        v /= sum;
    }
    return out;
}

MitigatedDistribution mitigate(const Counts &counts, const AssignmentMatrix &m, double max_condition) {
    if (total(counts) == 0) {
        throw ValidationError("cannot mitigate zero shots");
    }
    return mitigate(frequencies(counts), m, max_condition);
}

MitigatedBins mitigate_binned(const BinnedCounts &binned, const AssignmentMatrix &m, double max_condition) {
    MitigatedBins out;
    out.frequencies.num_bins = binned.num_bins;
    for (Context c : kContexts) {
        for (const auto &b : binned.of(c)) {
            try {
                auto mitigated = mitigate(b.counts, m, max_condition);
                out.frequencies.of(c).push_back({b.bin, mitigated.probs});
                out.clipped_cells += mitigated.clipped ? 1 : 0;
            } catch (const NumericalError &e) {
                throw NumericalError("context " + std::string(context_label(c)) + ", bin " + std::to_string(b.bin) +
                                     ": " + e.what());
            } catch (const ValidationError &e) {
                throw ValidationError("context " + std::string(context_label(c)) + ", bin " +
                                      std::to_string(b.bin) + ": " + e.what());
            }
        }
    }
    return out;
}

CalibrationDrift compare(const AssignmentMatrix &a, const AssignmentMatrix &b) {
    const Eigen::Matrix4d diff = as_eigen(a) - as_eigen(b);
    CalibrationDrift d;
    d.frobenius = diff.norm();
    d.max_abs_entry = diff.cwiseAbs().maxCoeff();
    d.condition_a = condition_number(a);
    d.condition_b = condition_number(b);
    return d;
}

}  // namespace belldrift::mitigation
