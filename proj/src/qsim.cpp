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

#include "belldrift/qsim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "belldrift/rng.hpp"

namespace belldrift::qsim {

namespace {

using Gate = std::array<std::array<Amplitude, 2>, 2>;

// Single-qubit unitary whose Z measurement afterwards measures `axis`.
Gate rotation_onto_z(const MeasurementAxis &axis) {
    const double h = std::numbers::sqrt2 / 2.0;
    const Amplitude i{0.0, 1.0};
    switch (axis.kind) {
        case MeasurementAxis::Kind::PauliX:
            return {{{h, h}, {h, -h}}};
        case MeasurementAxis::Kind::PauliY:
            // H S^dagger
            return {{{h, -i * h}, {h, i * h}}};
        case MeasurementAxis::Kind::PauliZ:
            return {{{1.0, 0.0}, {0.0, 1.0}}};
        case MeasurementAxis::Kind::PlaneXZ: {
            // R_Y(-angle)
            const double c = std::cos(axis.angle / 2.0);
            const double s = std::sin(axis.angle / 2.0);
            return {{{c, s}, {-s, c}}};
        }
    }
    throw ValidationError("invalid measurement axis");
}

// +1 for |0>, -1 for |1>.
constexpr double z_eigenvalue(std::size_t bit) { return bit == 0 ? 1.0 : -1.0; }

}  // namespace

double TwoQubitState::norm_squared() const {
    double n = 0.0;
    for (const auto &a : amplitudes) {
        n += std::norm(a);
    }
    return n;
}

MeasurementAxis MeasurementAxis::plane_xz(double angle) {
    if (!std::isfinite(angle)) {
        throw ValidationError("measurement angle must be finite");
    }
    double a = std::remainder(angle, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) {
        a += 2.0 * std::numbers::pi;
    }
    return {Kind::PlaneXZ, a};
}

void NoiseSpec::validate() const {
    if (!(depolarizing_rate >= 0.0 && depolarizing_rate <= 1.0)) {
        throw ValidationError("depolarizing_rate must lie in [0, 1]");
    }
}

PhaseDriftProfile PhaseDriftProfile::linear(double theta_max, int num_bins) {
    if (num_bins < 1) {
        throw ValidationError("drift profile needs at least one bin");
    }
    if (!std::isfinite(theta_max)) {
        throw ValidationError("theta_max must be finite");
    }
    PhaseDriftProfile profile;
    profile.theta_max = theta_max;
    profile.values.resize(static_cast<std::size_t>(num_bins), 0.0);
    if (num_bins >= 2) {
        for (int b = 0; b < num_bins; ++b) {
            profile.values[static_cast<std::size_t>(b)] =
                -theta_max + 2.0 * theta_max * static_cast<double>(b) / static_cast<double>(num_bins - 1);
        }
    }
    return profile;
}

double PhaseDriftProfile::at(int bin) const {
    if (bin < 1 || bin > num_bins()) {
        throw ValidationError("drift bin " + std::to_string(bin) + " outside 1.." + std::to_string(num_bins()));
    }
    return values[static_cast<std::size_t>(bin - 1)];
}

ContextAxes pauli_contexts() {
    return {{{MeasurementAxis::x(), MeasurementAxis::y()},
             {MeasurementAxis::x(), MeasurementAxis::z()},
             {MeasurementAxis::z(), MeasurementAxis::y()},
             {MeasurementAxis::z(), MeasurementAxis::z()}}};
}

ContextAxes chsh_optimal_contexts() {
    using std::numbers::pi;
    const auto a0 = MeasurementAxis::plane_xz(0.0);
    const auto a1 = MeasurementAxis::plane_xz(pi / 2.0);
    const auto b0 = MeasurementAxis::plane_xz(pi / 4.0);
    const auto b1 = MeasurementAxis::plane_xz(-pi / 4.0);
    return {{{a0, b0}, {a0, b1}, {a1, b0}, {a1, b1}}};
}

TwoQubitState prepare_singlet() {
    const double h = std::numbers::sqrt2 / 2.0;
    return {{Amplitude{0.0}, Amplitude{h}, Amplitude{-h}, Amplitude{0.0}}};
}

TwoQubitState apply_drift(const TwoQubitState &state, double theta) {
    TwoQubitState out;
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
            const double phase = -theta * z_eigenvalue(a) + theta * z_eigenvalue(b);
            out.amplitudes[2 * a + b] = state.amplitudes[2 * a + b] * std::polar(1.0, phase);
        }
    }
    return out;
}

Probabilities measure_joint(const TwoQubitState &state, const MeasurementAxis &axis_a,
                            const MeasurementAxis &axis_b, const NoiseSpec &noise) {
    const double n2 = state.norm_squared();
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "state is not normalized (norm " << std::sqrt(n2) << ")";
        throw ValidationError(msg.str());
    }
    noise.validate();
    const Gate ua = rotation_onto_z(axis_a);
    const Gate ub = rotation_onto_z(axis_b);

    Probabilities p{};
    for (std::size_t a2 = 0; a2 < 2; ++a2) {
        for (std::size_t b2 = 0; b2 < 2; ++b2) {
            Amplitude amp{0.0};
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) {
                    amp += ua[a2][a] * ub[b2][b] * state.amplitudes[2 * a + b];
                }
            }
            p[2 * a2 + b2] = std::norm(amp) / n2;
        }
    }

    const double r = noise.depolarizing_rate;
    if (r > 0.0) {
        for (auto &v : p) {
            v = (1.0 - r) * v + r / 4.0;
        }
    }
    if (noise.assignment) {
        p = noise.assignment->apply(p);
    }
    return p;
}

Counts sample_counts(const Probabilities &dist, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw ValidationError("shots must be positive");
    }
    for (double v : dist) {
        if (v < -1e-12) {
            throw ValidationError("outcome distribution has a negative probability");
        }
    }
    require_simplex(dist, 1e-9, "outcome distribution");
    Rng rng(seed);
    return sample_multinomial(rng, dist, shots);
}

double correlator(const Probabilities &dist) { return dist[0] - dist[1] - dist[2] + dist[3]; }

}  // namespace belldrift::qsim
