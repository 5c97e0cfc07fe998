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

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "qdimer/dense_matrix.hpp"

namespace qdimer::hubbard {

/// Two-site Fermi-Hubbard dimer at half filling, S_z = 0, in the
/// first-quantized two-qubit encoding. Energies are in units of the hopping
/// strength t, which is scaled to 1.
struct HubbardParams {
    double u = 0.0;  // on-site interaction U/t
};

/// Qubit Hamiltonian -(X1 + X2) + (U/2) Z1 Z2 as a 4x4 real symmetric matrix.
inline DenseMatrix qubit_hamiltonian(const HubbardParams &params) {
    const double u = params.u;
    DenseMatrix h(4);
    h(0, 0) = u / 2.0; h(1, 1) = -u / 2.0; h(2, 2) = -u / 2.0; h(3, 3) = u / 2.0;
    // -(X (x) I): flips qubit 0 (MSB); -(I (x) X): flips qubit 1
    h(0, 2) = -1.0; h(2, 0) = -1.0; h(1, 3) = -1.0; h(3, 1) = -1.0;
    h(0, 1) = -1.0; h(1, 0) = -1.0; h(2, 3) = -1.0; h(3, 2) = -1.0;
    return h;
}

/// Hamiltonian in the Slater-determinant basis, which equals the qubit
/// Hamiltonian plus the constant shift U/2.
inline DenseMatrix site_hamiltonian(const HubbardParams &params) {
    const double u = params.u, t = 1.0;
    return DenseMatrix(4, {u, -t, -t, 0.0,
                           -t, 0.0, 0.0, -t,
                           -t, 0.0, 0.0, -t,
                           0.0, -t, -t, u});
}

struct SpectralResult {
    std::array<double, 4> eigenvalues{};        // ascending
    std::array<cplx, 4> ground_state{};         // phase-fixed, normalized
    double ground_energy = 0.0;
};

/// Exact diagonalization of the qubit Hamiltonian. The ground state's phase
/// is fixed so its first nonzero amplitude is real positive. Throws if the
/// ground level is degenerate (never happens for finite U).
inline SpectralResult exact_ground_state(const HubbardParams &params) {
    const SymmetricEigen eig = symmetric_eigen(qubit_hamiltonian(params));
    if (eig.eigenvalues[1] - eig.eigenvalues[0] < 1e-9) {
        throw std::runtime_error("exact_ground_state: degenerate ground space");
    }
    SpectralResult out;
    for (int k = 0; k < 4; ++k) {
        out.eigenvalues[static_cast<std::size_t>(k)] = eig.eigenvalues[static_cast<std::size_t>(k)];
    }
    out.ground_energy = eig.eigenvalues[0];

    double sign = 1.0;
    for (double v : eig.vectors[0]) {
        if (std::abs(v) > 1e-12) {
            sign = (v > 0) ? 1.0 : -1.0;
            break;
        }
    }
    for (int k = 0; k < 4; ++k) {
        out.ground_state[static_cast<std::size_t>(k)] = sign * eig.vectors[0][static_cast<std::size_t>(k)];
    }
    return out;
}

/// Purity of rho_A for a two-qubit pure state (qubit 0 = subsystem A).
inline double state_purity_a(const std::array<cplx, 4> &psi) {
    cplx r00 = 0.0, r01 = 0.0, r11 = 0.0;
    for (int b = 0; b < 2; ++b) {
        r00 += psi[static_cast<std::size_t>(b)] * std::conj(psi[static_cast<std::size_t>(b)]);
        r11 += psi[static_cast<std::size_t>(2 + b)] * std::conj(psi[static_cast<std::size_t>(2 + b)]);
        r01 += psi[static_cast<std::size_t>(b)] * std::conj(psi[static_cast<std::size_t>(2 + b)]);
    }
    return std::real(r00 * r00 + r11 * r11 + 2.0 * r01 * std::conj(r01));
}

/// Exact R2 = Tr(rho_A^2) of the dimer ground state.
inline double exact_r2(const HubbardParams &params) {
    return state_purity_a(exact_ground_state(params).ground_state);
}

}  // namespace qdimer::hubbard
