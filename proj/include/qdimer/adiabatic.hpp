// Copyright 2026 The qdimer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdimer/circuit.hpp"
#include "qdimer/lowering.hpp"
#include "qdimer/noise.hpp"
#include "qdimer/state_vector.hpp"

namespace qdimer::adiabatic {

enum class Method { I, II };

inline std::string method_name(Method m) { return m == Method::I ? "I" : "II"; }

inline Method method_from_name(const std::string &name) {
    if (name == "I" || name == "i" || name == "1") {
        return Method::I;
    }
    if (name == "II" || name == "ii" || name == "2") {
        return Method::II;
    }
    throw std::invalid_argument("unknown method '" + name + "' (expected I or II)");
}

/// Digitized adiabatic schedule: evolve H(s) = -(X1+X2) + (s/2tau) Z1Z2 from
/// s=0 to s=U*tau in first-order Trotter steps of size delta.
///
/// Method I fixes (delta, tau) and grows N_steps = U*tau/delta with U.
/// Method II fixes N_steps = 5 and shrinks tau = 5*delta/U.
struct TrotterSchedule {
    Method method = Method::I;
    double u = 0.0;
    double delta = 0.1;
    double tau = 0.1;
    int n_steps = 0;

    /// Experiment preset, delta = tau = 0.1. U must sit on the method's
    /// finite grid (U*tau/delta integral) and within the controller bound
    /// N_steps <= 6.
    static TrotterSchedule method_i_preset(double u, double delta = 0.1, double tau = 0.1) {
        if (delta <= 0.0 || tau <= 0.0) {
            throw std::invalid_argument("TrotterSchedule: delta and tau must be positive");
        }
        const double exact = u * tau / delta;
        const double rounded = std::round(exact);
        if (std::abs(rounded - exact) > 1e-9) {
            throw std::invalid_argument("method I: U*tau/delta must be integral for presets");
        }
        if (rounded < 0.0 || rounded > 6.0) {
            throw std::invalid_argument("method I preset: N_steps must be in 0..6");
        }
        return {Method::I, u, delta, tau, static_cast<int>(rounded)};
    }

    /// Experiment preset, delta = 0.25, N_steps = 5, tau = 5*delta/U.
    /// U = 0 is rejected (tau diverges); see method_ii_reference_circuit.
    static TrotterSchedule method_ii_preset(double u, double delta = 0.25) {
        if (delta <= 0.0) {
            throw std::invalid_argument("TrotterSchedule: delta must be positive");
        }
        if (u <= 0.0) {
            throw std::invalid_argument("method II: U must be positive (tau = 5*delta/U)");
        }
        if (u > 5.0 + 1e-12) {
            throw std::invalid_argument("method II preset: U must not exceed N_steps = 5");
        }
        return {Method::II, u, delta, 5.0 * delta / u, 5};
    }

    /// Unbounded method-I-style schedule for parameter scans: N rounds freely
    /// and the controller bound does not apply.
    static TrotterSchedule scan(double u, double delta, double tau) {
        if (delta <= 0.0 || tau <= 0.0) {
            throw std::invalid_argument("TrotterSchedule: delta and tau must be positive");
        }
        if (u < 0.0) {
            throw std::invalid_argument("TrotterSchedule: U must be non-negative");
        }
        return {Method::I, u, delta, tau, static_cast<int>(std::round(u * tau / delta))};
    }
};

namespace detail {

inline void append_prep_gates(Circuit &circuit, int qa, int qb, double delta,
                              const std::vector<double> &zz_angles) {
    circuit.append(Gate::h(qa)).append(Gate::h(qb));
    for (double theta : zz_angles) {
        circuit.append(Gate::rx(qa, -2.0 * delta));
        circuit.append(Gate::rx(qb, -2.0 * delta));
        circuit.append(Gate::rzz(qa, qb, theta));
    }
}

inline std::vector<double> zz_angles(const TrotterSchedule &s) {
    // step m contributes exp(-i m delta^2/(2 tau) Z1Z2) = Rzz(m delta^2/tau)
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(s.n_steps));
    for (int m = 1; m <= s.n_steps; ++m) {
        angles.push_back(static_cast<double>(m) * s.delta * s.delta / s.tau);
    }
    return angles;
}

}  // namespace detail

/// State-preparation circuit on qubits (qa, qb) of an existing register.
inline void append_prep_block(Circuit &circuit, const TrotterSchedule &schedule,
                              int qa, int qb) {
    detail::append_prep_gates(circuit, qa, qb, schedule.delta, detail::zz_angles(schedule));
}

/// Two-qubit ground-state preparation circuit: Hadamards, then per step
/// Rx(-2 delta) on both qubits and Rzz(m delta^2 / tau).
inline Circuit build_prep_circuit(const TrotterSchedule &schedule) {
    Circuit circuit(2);
    append_prep_block(circuit, schedule, 0, 1);
    return circuit;
}

/// Method II gate sequence in the U -> 0 limit (all ZZ angles vanish but the
/// gates are still applied). Used to measure the energy offset at U = 0.
inline Circuit method_ii_reference_circuit(double delta = 0.25, int n_steps = 5) {
    Circuit circuit(2);
    detail::append_prep_gates(circuit, 0, 1, delta,
                              std::vector<double>(static_cast<std::size_t>(n_steps), 0.0));
    return circuit;
}

inline StateVector prepare_state(const TrotterSchedule &schedule) {
    StateVector state(2);
    state.apply(build_prep_circuit(schedule));
    return state;
}

struct EnergyEstimate {
    double h_expect = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double z1z2 = 0.0;
    std::optional<double> corrected;
};

namespace detail {

inline EnergyEstimate combine(double u, double x1, double x2, double z1z2) {
    EnergyEstimate e;
    e.x1 = x1;
    e.x2 = x2;
    e.z1z2 = z1z2;
    e.h_expect = -(x1 + x2) + u / 2.0 * z1z2;
    return e;
}

inline double signed_mean(const ShotRecord &rec, std::uint64_t mask) {
    double acc = 0.0;
    const double total = static_cast<double>(rec.total_shots());
    for (const auto &[outcome, count] : rec.counts) {
        const std::uint64_t idx = ShotRecord::index_of(outcome);
        const bool odd = std::popcount(idx & mask) & 1;
        acc += (odd ? -1.0 : 1.0) * static_cast<double>(count);
    }
    return acc / total;
}

}  // namespace detail

/// <H> from exact expectation values of X1, X2 and Z1Z2 on the prepared state.
inline EnergyEstimate estimate_energy_exact(const TrotterSchedule &schedule) {
    const StateVector state = prepare_state(schedule);
    return detail::combine(schedule.u, state.expectation_pauli("XI"),
                           state.expectation_pauli("IX"),
                           state.expectation_pauli("ZZ"));
}

/// <H> from two sampled runs: a Z-basis measurement, and a second preparation
/// followed by Hadamards for the X-basis values.
inline EnergyEstimate estimate_energy_sampled(const TrotterSchedule &schedule,
                                              std::uint64_t shots, std::uint64_t seed) {
    const StateVector state = prepare_state(schedule);
    const ShotRecord z_rec = state.sample_shots(shots, derive_seed(seed, 101));

    StateVector x_state = prepare_state(schedule);
    x_state.apply(Gate::h(0));
    x_state.apply(Gate::h(1));
    const ShotRecord x_rec = x_state.sample_shots(shots, derive_seed(seed, 202));

    return detail::combine(schedule.u, detail::signed_mean(x_rec, 0b10),
                           detail::signed_mean(x_rec, 0b01),
                           detail::signed_mean(z_rec, 0b11));
}

/// Noisy <H>: both runs are lowered to native gates and sampled under the
/// depolarizing trajectory model.
inline EnergyEstimate estimate_energy_noisy(const TrotterSchedule &schedule,
                                            std::uint64_t shots, const NoiseModel &noise,
                                            const SignParams &signs = {}) {
    Circuit z_circuit = build_prep_circuit(schedule);
    Circuit x_circuit = z_circuit;
    x_circuit.append(Gate::h(0)).append(Gate::h(1));

    NoiseModel z_noise = noise;
    z_noise.seed = derive_seed(noise.seed, 101);
    NoiseModel x_noise = noise;
    x_noise.seed = derive_seed(noise.seed, 202);

    const ShotRecord z_rec =
        run_noisy(lower_circuit(z_circuit, signs).native_circuit, z_noise, shots);
    const ShotRecord x_rec =
        run_noisy(lower_circuit(x_circuit, signs).native_circuit, x_noise, shots);
    return detail::combine(schedule.u, detail::signed_mean(x_rec, 0b10),
                           detail::signed_mean(x_rec, 0b01),
                           detail::signed_mean(z_rec, 0b11));
}

/// Noisy <H> of the method-II U=0 reference sequence minus the ideal value -2.
/// Only the X-basis run is needed: the ZZ term carries zero weight at U = 0.
inline double measure_method_ii_offset(double delta, std::uint64_t shots,
                                       const NoiseModel &noise,
                                       const SignParams &signs = {}) {
    Circuit x_circuit = method_ii_reference_circuit(delta);
    x_circuit.append(Gate::h(0)).append(Gate::h(1));

    NoiseModel x_noise = noise;
    x_noise.seed = derive_seed(noise.seed, 404);

    const ShotRecord x_rec =
        run_noisy(lower_circuit(x_circuit, signs).native_circuit, x_noise, shots);
    const double h = -(detail::signed_mean(x_rec, 0b10) + detail::signed_mean(x_rec, 0b01));
    return h - (-2.0);
}

struct EnergyPoint {
    double u = 0.0;
    double h = 0.0;
};

/// Method I: subtract a straight line of the given slope (h - slope*U).
/// Method II: subtract a uniform offset measured at U = 0.
inline std::vector<EnergyPoint> apply_energy_correction(std::vector<EnergyPoint> points,
                                                        Method method,
                                                        double correction_param) {
    if (points.empty()) {
        throw std::invalid_argument("apply_energy_correction: empty input");
    }
    for (EnergyPoint &p : points) {
        p.h = (method == Method::I) ? p.h - correction_param * p.u
                                    : p.h - correction_param;
    }
    return points;
}

}  // namespace qdimer::adiabatic
