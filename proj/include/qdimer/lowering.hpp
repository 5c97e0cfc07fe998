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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qdimer/circuit.hpp"
#include "qdimer/dense_matrix.hpp"
#include "qdimer/gates.hpp"
#include "qdimer/state_vector.hpp"

namespace qdimer {

/// Hardware XX-angle sign calibration. alpha/beta/gamma are the sgn(chi)
/// values of the control-target, target-target, and control-far XX pairs in
/// the C-Swap template; all default to +1 in simulation.
struct SignParams {
    int alpha = +1;
    int beta = +1;
    int gamma = +1;

    void validate() const {
        for (int s : {alpha, beta, gamma}) {
            if (s != 1 && s != -1) {
                throw std::invalid_argument("SignParams: signs must be +1 or -1");
            }
        }
    }
};

struct LoweringResult {
    Circuit native_circuit;
    int entangling_count = 0;    // XX gates
    int single_qubit_count = 0;  // R and Rz gates
    int depth = 0;               // parallel layers, Rz excluded
};

/// Greedy earliest-layer partition: each gate joins the first layer after
/// every layer that touches one of its qubits. Layer order concatenates back
/// to the original gate order on overlapping qubits.
inline std::vector<std::vector<Gate>> assign_layers(const Circuit &circuit,
                                                    bool include_rz = true) {
    std::vector<int> busy_until(static_cast<std::size_t>(circuit.num_qubits), 0);
    std::vector<std::vector<Gate>> layers;
    for (const Gate &g : circuit.gates) {
        if (!include_rz && g.kind == GateKind::Rz) {
            continue;
        }
        int layer = 0;
        const int arity = gate_arity(g.kind);
        for (int i = 0; i < arity; ++i) {
            layer = std::max(layer, busy_until[static_cast<std::size_t>(g.qubits[i])]);
        }
        for (int i = 0; i < arity; ++i) {
            busy_until[static_cast<std::size_t>(g.qubits[i])] = layer + 1;
        }
        if (static_cast<std::size_t>(layer) >= layers.size()) {
            layers.resize(static_cast<std::size_t>(layer) + 1);
        }
        layers[static_cast<std::size_t>(layer)].push_back(g);
    }
    return layers;
}

/// Parallel circuit depth. Rz gates are excluded (applied as classical phase
/// advances on hardware).
inline int parallel_depth(const Circuit &circuit) {
    return static_cast<int>(assign_layers(circuit, /*include_rz=*/false).size());
}

/// Dense unitary of a circuit, built column by column. Intended for
/// verification on small registers.
inline DenseMatrix circuit_unitary(const Circuit &circuit) {
    if (circuit.num_qubits > 10) {
        throw std::invalid_argument("circuit_unitary: register too large for dense build");
    }
    const std::size_t dim = std::size_t{1} << circuit.num_qubits;
    DenseMatrix u(dim);
    for (std::size_t col = 0; col < dim; ++col) {
        StateVector s = StateVector::basis(circuit.num_qubits, col);
        s.apply(circuit);
        for (std::size_t row = 0; row < dim; ++row) {
            u(row, col) = s.amplitude(row);
        }
    }
    return u;
}

/// 1 - |Tr(U^dag V)| / dim. Zero iff U = e^{i phi} V.
inline double unitary_distance(const DenseMatrix &u, const DenseMatrix &v) {
    if (u.dim() != v.dim()) {
        throw std::invalid_argument("unitary_distance: dimension mismatch");
    }
    if (!u.is_unitary() || !v.is_unitary()) {
        throw std::invalid_argument("unitary_distance: inputs must be unitary");
    }
    return 1.0 - std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.dim());
}

namespace detail {

inline void emit(std::vector<Gate> &out, const Gate &g) { out.push_back(g); }

// H = R(pi/2, pi/2) . Rz(pi) up to global phase.
inline void lower_h(std::vector<Gate> &out, int q) {
    emit(out, Gate::rz(q, M_PI));
    emit(out, Gate::r(q, M_PI / 2.0, M_PI / 2.0));
}

// Standard MS construction: one XX(pi/4) plus four rotations.
inline void lower_cnot(std::vector<Gate> &out, int control, int target) {
    emit(out, Gate::r(control, M_PI / 2.0, M_PI / 2.0));
    emit(out, Gate::xx(control, target, M_PI / 4.0));
    emit(out, Gate::r(control, -M_PI / 2.0, 0.0));
    emit(out, Gate::r(target, -M_PI / 2.0, 0.0));
    emit(out, Gate::r(control, -M_PI / 2.0, M_PI / 2.0));
}

inline void lower_rzz(std::vector<Gate> &out, int i, int j, double theta) {
    lower_cnot(out, i, j);
    emit(out, Gate::rz(j, theta));
    lower_cnot(out, i, j);
}

inline void lower_swap(std::vector<Gate> &out, int i, int j) {
    lower_cnot(out, i, j);
    lower_cnot(out, j, i);
    lower_cnot(out, i, j);
}

// C-Swap on (control, t1, t2): 7 XX gates and 14 single-qubit rotations.
// The middle-qubit X rotation after the first XX block is -beta*pi/4; the
// published figure's +pi/4 leaves a residual ZZ phase on the targets.
inline void lower_cswap(std::vector<Gate> &out, int c, int t1, int t2,
                        const SignParams &sp) {
    const double a = sp.alpha, b = sp.beta, g = sp.gamma;
    const double big_p = std::asin(std::sqrt(2.0 / 3.0));

    emit(out, Gate::r(t2, b * M_PI / 2.0, M_PI / 2.0));
    emit(out, Gate::xx(t1, t2, b * M_PI / 4.0));
    emit(out, Gate::r(c, g * M_PI / 2.0, 0.0));
    emit(out, Gate::rz(t1, -b * M_PI / 2.0));
    emit(out, Gate::rz(t2, -M_PI / 2.0));
    emit(out, Gate::rz(c, -M_PI / 2.0));
    emit(out, Gate::r(t1, -b * M_PI / 4.0, 0.0));
    emit(out, Gate::r(t2, -b * M_PI / 2.0 + M_PI / 4.0, 0.0));
    emit(out, Gate::xx(t1, t2, b * M_PI / 8.0));
    emit(out, Gate::xx(c, t2, g * M_PI / 8.0));
    emit(out, Gate::r(c, -2.0 * M_PI / 3.0, (g + 1.0) / 2.0 * M_PI - big_p));
    emit(out, Gate::xx(c, t1, a * M_PI / 4.0));
    emit(out, Gate::r(c, -a * b * g * 2.0 * M_PI / 3.0,
                      (a * b + 1.0) / 2.0 * M_PI - a * b * g * big_p));
    emit(out, Gate::xx(c, t2, g * M_PI / 8.0));
    emit(out, Gate::r(c, M_PI, -a * b * g * M_PI / 4.0));
    emit(out, Gate::xx(c, t1, a * M_PI / 4.0));
    emit(out, Gate::rz(t1, -b * M_PI / 2.0));
    emit(out, Gate::r(t2, b * M_PI / 2.0, M_PI / 2.0));
    emit(out, Gate::xx(t1, t2, b * M_PI / 4.0));
    emit(out, Gate::r(t2, -b * M_PI / 2.0, M_PI / 2.0));
    emit(out, Gate::rz(t2, -M_PI / 2.0));
}

inline void lower_one(std::vector<Gate> &out, const Gate &gate, const SignParams &sp) {
    switch (gate.kind) {
        case GateKind::R:
        case GateKind::Rz:
        case GateKind::XX:
            emit(out, gate);
            break;
        case GateKind::Rx:
            emit(out, Gate::r(gate.qubits[0], gate.theta, 0.0));
            break;
        case GateKind::Ry:
            emit(out, Gate::r(gate.qubits[0], gate.theta, M_PI / 2.0));
            break;
        case GateKind::H:
            lower_h(out, gate.qubits[0]);
            break;
        case GateKind::Cnot:
            lower_cnot(out, gate.qubits[0], gate.qubits[1]);
            break;
        case GateKind::Rzz:
            lower_rzz(out, gate.qubits[0], gate.qubits[1], gate.theta);
            break;
        case GateKind::Swap:
            lower_swap(out, gate.qubits[0], gate.qubits[1]);
            break;
        case GateKind::CSwap:
            lower_cswap(out, gate.qubits[0], gate.qubits[1], gate.qubits[2], sp);
            break;
    }
}

}  // namespace detail

inline LoweringResult lower_circuit(const Circuit &circuit, const SignParams &signs = {}) {
    signs.validate();
    LoweringResult result;
    result.native_circuit = Circuit(circuit.num_qubits);
    for (const Gate &g : circuit.gates) {
        validate_gate(g, circuit.num_qubits);
        std::vector<Gate> lowered;
        detail::lower_one(lowered, g, signs);
        for (const Gate &n : lowered) {
            result.native_circuit.append(n);
        }
    }
    for (const Gate &n : result.native_circuit.gates) {
        if (n.kind == GateKind::XX) {
            ++result.entangling_count;
        } else {
            ++result.single_qubit_count;
        }
    }
    result.depth = parallel_depth(result.native_circuit);
    return result;
}

/// Lowers a single gate on a minimal register holding its qubit indices.
inline LoweringResult lower_gate(const Gate &gate, const SignParams &signs = {}) {
    int max_q = 0;
    for (int i = 0; i < gate_arity(gate.kind); ++i) {
        max_q = std::max(max_q, gate.qubits[i]);
    }
    Circuit c(max_q + 1);
    c.append(gate);
    return lower_circuit(c, signs);
}

/// Max-entry deviation between the lowered circuit's unitary and the ideal
/// gate unitary after global-phase alignment.
inline double lowering_residual(const Gate &gate, const SignParams &signs = {}) {
    const LoweringResult lr = lower_gate(gate, signs);
    const DenseMatrix lowered = circuit_unitary(lr.native_circuit);

    Circuit ideal_circuit(lr.native_circuit.num_qubits);
    ideal_circuit.append(gate);
    const DenseMatrix ideal = circuit_unitary(ideal_circuit);

    // align global phase via the largest-magnitude entry of U^dag V
    const cplx tr = (lowered.adjoint() * ideal).trace();
    if (std::abs(tr) < 1e-12) {
        return 1.0;
    }
    const cplx phase = tr / std::abs(tr);
    DenseMatrix aligned = lowered;
    double dev = 0.0;
    for (std::size_t r = 0; r < aligned.dim(); ++r) {
        for (std::size_t c = 0; c < aligned.dim(); ++c) {
            dev = std::max(dev, std::abs(aligned(r, c) * phase - ideal(r, c)));
        }
    }
    return dev;
}

}  // namespace qdimer
