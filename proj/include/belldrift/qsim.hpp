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
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "belldrift/core.hpp"
#include "belldrift/mitigation.hpp"

namespace belldrift::qsim {

using Amplitude = std::complex<double>;

/// Pure two-qubit state, amplitudes indexed |q_A q_B> in the order 00, 01, 10, 11.
struct TwoQubitState {
    std::array<Amplitude, 4> amplitudes{};

    double norm_squared() const;
};

/// Measurement axis for one qubit. PlaneXZ is an axis in the X-Z plane at
/// `angle` radians from +Z towards +X.
struct MeasurementAxis {
    enum class Kind { PauliX, PauliY, PauliZ, PlaneXZ };

    Kind kind = Kind::PauliZ;
    double angle = 0.0;

    static MeasurementAxis x() { return {Kind::PauliX, 0.0}; }
    static MeasurementAxis y() { return {Kind::PauliY, 0.0}; }
    static MeasurementAxis z() { return {Kind::PauliZ, 0.0}; }
    /// Angle is normalized to (-pi, pi]. Throws ValidationError if not finite.
    static MeasurementAxis plane_xz(double angle);
};

struct NoiseSpec {
    double depolarizing_rate = 0.0;
    std::optional<mitigation::AssignmentMatrix> assignment;

    void validate() const;
};

/// Linear phase-drift ramp from -theta_max to +theta_max over num_bins bins.
struct PhaseDriftProfile {
    double theta_max = 0.0;
    std::vector<double> values;

    static PhaseDriftProfile linear(double theta_max, int num_bins);
    int num_bins() const { return static_cast<int>(values.size()); }
    /// Drift angle of 1-based bin `bin`.
    double at(int bin) const;
};

/// Axes (qubit A, qubit B) for each CHSH context.
using ContextAxes = std::array<std::pair<MeasurementAxis, MeasurementAxis>, 4>;

/// Fixed Pauli contexts: xy=(X,Y), xy'=(X,Z), x'y=(Z,Y), x'y'=(Z,Z).
ContextAxes pauli_contexts();
/// CHSH-optimal X-Z plane axes: A in {0, pi/2}, B in {pi/4, -pi/4}.
ContextAxes chsh_optimal_contexts();

/// (|01> - |10>)/sqrt(2).
TwoQubitState prepare_singlet();

/// Applies exp(-i theta Z_A) exp(+i theta Z_B).
TwoQubitState apply_drift(const TwoQubitState &state, double theta);

/// Outcome probabilities after rotating each axis onto Z, depolarizing, then
/// readout assignment. Throws ValidationError when the state norm deviates by more than 1e-9.
Probabilities measure_joint(const TwoQubitState &state, const MeasurementAxis &axis_a,
                            const MeasurementAxis &axis_b, const NoiseSpec &noise = {});

/// Multinomial sample of `shots` outcomes; deterministic in `seed`.
Counts sample_counts(const Probabilities &dist, std::uint64_t shots, std::uint64_t seed);

/// Correlator <A B> of an outcome distribution (+1 for 00/11, -1 for 01/10).
double correlator(const Probabilities &dist);

}  // namespace belldrift::qsim
