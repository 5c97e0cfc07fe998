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
#include <stdexcept>
#include <string>

#include "qdimer/dense_matrix.hpp"

namespace qdimer {

/// Gate set. R/Rz/XX are the trapped-ion native gates; the rest are logical
/// gates the compiler lowers onto them.
///
/// Rotation conventions (fixed globally):
///   Rx(th) = exp(-i th X / 2), Ry and Rz analogous,
///   R(th, phi) rotates by th about cos(phi) X + sin(phi) Y,
///   XX(chi)  = exp(-i chi X (x) X).
enum class GateKind { R, Rz, XX, H, Cnot, Swap, CSwap, Rx, Ry, Rzz };

struct Gate {
    GateKind kind;
    std::array<int, 3> qubits{-1, -1, -1};  // only the first arity() entries used
    double theta = 0.0;
    double phi = 0.0;

    static Gate r(int q, double theta, double phi) { return {GateKind::R, {q, -1, -1}, theta, phi}; }
    static Gate rz(int q, double theta) { return {GateKind::Rz, {q, -1, -1}, theta, 0.0}; }
    static Gate xx(int i, int j, double chi) { return {GateKind::XX, {i, j, -1}, chi, 0.0}; }
    static Gate h(int q) { return {GateKind::H, {q, -1, -1}, 0.0, 0.0}; }
    static Gate cnot(int control, int target) { return {GateKind::Cnot, {control, target, -1}, 0.0, 0.0}; }
    static Gate swap(int i, int j) { return {GateKind::Swap, {i, j, -1}, 0.0, 0.0}; }
    static Gate cswap(int control, int i, int j) { return {GateKind::CSwap, {control, i, j}, 0.0, 0.0}; }
    static Gate rx(int q, double theta) { return {GateKind::Rx, {q, -1, -1}, theta, 0.0}; }
    static Gate ry(int q, double theta) { return {GateKind::Ry, {q, -1, -1}, theta, 0.0}; }
    static Gate rzz(int i, int j, double theta) { return {GateKind::Rzz, {i, j, -1}, theta, 0.0}; }
};

constexpr int gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::R:
        case GateKind::Rz:
        case GateKind::H:
        case GateKind::Rx:
        case GateKind::Ry:
            return 1;
        case GateKind::XX:
        case GateKind::Cnot:
        case GateKind::Swap:
        case GateKind::Rzz:
            return 2;
        case GateKind::CSwap:
            return 3;
    }
    return 0;
}

constexpr bool is_native(GateKind kind) {
    return kind == GateKind::R || kind == GateKind::Rz || kind == GateKind::XX;
}

constexpr bool is_entangling(GateKind kind) {
    switch (kind) {
        case GateKind::XX:
        case GateKind::Cnot:
        case GateKind::Swap:
        case GateKind::CSwap:
        case GateKind::Rzz:
            return true;
        default:
            return false;
    }
}

inline std::string gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::R: return "R";
        case GateKind::Rz: return "Rz";
        case GateKind::XX: return "XX";
        case GateKind::H: return "H";
        case GateKind::Cnot: return "CNOT";
        case GateKind::Swap: return "Swap";
        case GateKind::CSwap: return "CSwap";
        case GateKind::Rx: return "Rx";
        case GateKind::Ry: return "Ry";
        case GateKind::Rzz: return "Rzz";
    }
    return "?";
}

/// Validates qubit indices: in range for a register of `num_qubits`, distinct.
inline void validate_gate(const Gate &gate, int num_qubits) {
    const int arity = gate_arity(gate.kind);
    for (int i = 0; i < arity; ++i) {
        if (gate.qubits[i] < 0 || gate.qubits[i] >= num_qubits) {
            throw std::out_of_range(gate_name(gate.kind) + ": qubit index " +
                                    std::to_string(gate.qubits[i]) +
                                    " out of range for " + std::to_string(num_qubits) +
                                    " qubits");
        }
        for (int j = 0; j < i; ++j) {
            if (gate.qubits[i] == gate.qubits[j]) {
                throw std::invalid_argument(gate_name(gate.kind) +
                                            ": duplicate qubit index " +
                                            std::to_string(gate.qubits[i]));
            }
        }
    }
}

/// Exact unitary of a gate on its own qubits (dim 2^arity). Qubit order within
/// the matrix follows the gate's qubit list, first qubit most significant.
inline DenseMatrix gate_matrix(const Gate &gate) {
    const cplx im{0.0, 1.0};
    switch (gate.kind) {
        case GateKind::R: {
            const double c = std::cos(gate.theta / 2.0), s = std::sin(gate.theta / 2.0);
            return DenseMatrix(2, {c, -im * std::exp(-im * gate.phi) * s,
                                   -im * std::exp(im * gate.phi) * s, c});
        }
        case GateKind::Rx:
            return gate_matrix(Gate::r(gate.qubits[0], gate.theta, 0.0));
        case GateKind::Ry:
            return gate_matrix(Gate::r(gate.qubits[0], gate.theta, M_PI / 2.0));
        case GateKind::Rz: {
            const cplx e = std::exp(-im * gate.theta / 2.0);
            return DenseMatrix(2, {e, 0.0, 0.0, std::conj(e)});
        }
        case GateKind::H: {
            const double s = 1.0 / std::sqrt(2.0);
            return DenseMatrix(2, {s, s, s, -s});
        }
        case GateKind::XX: {
            const cplx c = std::cos(gate.theta), ms = -im * std::sin(gate.theta);
            DenseMatrix m(4);
            m(0, 0) = c; m(1, 1) = c; m(2, 2) = c; m(3, 3) = c;
            m(0, 3) = ms; m(1, 2) = ms; m(2, 1) = ms; m(3, 0) = ms;
            return m;
        }
        case GateKind::Rzz: {
            const cplx e = std::exp(-im * gate.theta / 2.0);
            DenseMatrix m(4);
            m(0, 0) = e; m(1, 1) = std::conj(e); m(2, 2) = std::conj(e); m(3, 3) = e;
            return m;
        }
        case GateKind::Cnot: {
            DenseMatrix m(4);
            m(0, 0) = 1; m(1, 1) = 1; m(2, 3) = 1; m(3, 2) = 1;
            return m;
        }
        case GateKind::Swap: {
            DenseMatrix m(4);
            m(0, 0) = 1; m(1, 2) = 1; m(2, 1) = 1; m(3, 3) = 1;
            return m;
        }
        case GateKind::CSwap: {
            DenseMatrix m = DenseMatrix::identity(8);
            m(5, 5) = 0; m(6, 6) = 0; m(5, 6) = 1; m(6, 5) = 1;
            return m;
        }
    }
    throw std::logic_error("gate_matrix: unknown gate kind");
}

}  // namespace qdimer
