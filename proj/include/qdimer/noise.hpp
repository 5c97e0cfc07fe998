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
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "qdimer/circuit.hpp"
#include "qdimer/shot_record.hpp"
#include "qdimer/state_vector.hpp"

namespace qdimer {

/// Depolarizing-Pauli trajectory noise attached to native gates. Defaults are
/// calibrated to typical trapped-ion gate fidelities (99.1% single-qubit,
/// 98.5% two-qubit). Rz gates are exempt: they are classical phase advances
/// with no physical pulse.
struct NoiseModel {
    double p1 = 0.009;
    double p2 = 0.015;
    std::uint64_t seed = 0;

    void validate() const {
        if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0) {
            throw std::invalid_argument("NoiseModel: probabilities must be in [0,1]");
        }
    }
};

/// Deterministic per-shot sub-seed derivation (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace detail {

/// Circuit pre-compiled to dense matrices for the per-shot trajectory loop.
struct CompiledOp {
    DenseMatrix matrix;
    std::array<int, 3> qubits{};
    int arity = 1;
    double error_prob = 0.0;  // 0 for Rz (classical phase advance)
};

inline const std::array<DenseMatrix, 3> &pauli_matrices() {
    static const std::array<DenseMatrix, 3> paulis = {
        DenseMatrix(2, {0, 1, 1, 0}),
        DenseMatrix(2, {cplx{0, 0}, cplx{0, -1}, cplx{0, 1}, cplx{0, 0}}),
        DenseMatrix(2, {1, 0, 0, -1}),
    };
    return paulis;
}

inline void apply_random_pauli(StateVector &state, const std::array<int, 3> &qubits,
                               int arity, std::mt19937_64 &rng) {
    const auto &paulis = pauli_matrices();
    if (arity == 1) {
        state.apply_matrix(paulis[rng() % 3], qubits.data(), 1);
        return;
    }
    // uniform over the 15 non-identity two-qubit Paulis: index 1..15 in base 4
    const std::uint64_t k = 1 + rng() % 15;
    const int pa = static_cast<int>(k / 4), pb = static_cast<int>(k % 4);
    if (pa > 0) {
        state.apply_matrix(paulis[static_cast<std::size_t>(pa - 1)], &qubits[0], 1);
    }
    if (pb > 0) {
        state.apply_matrix(paulis[static_cast<std::size_t>(pb - 1)], &qubits[1], 1);
    }
}

}  // namespace detail

/// Shot-by-shot trajectory sampling of a lowered circuit under gate noise:
/// after each R or XX gate, with probability p1/p2 a uniformly random
/// non-identity Pauli hits the gate's qubits (Rz is a classical phase advance
/// and stays clean). Deterministic for a fixed noise.seed; each shot uses an
/// independently derived sub-seed.
inline ShotRecord run_noisy(const Circuit &circuit, const NoiseModel &noise,
                            std::uint64_t n_shots) {
    noise.validate();
    if (!circuit.all_native()) {
        throw std::invalid_argument("run_noisy: circuit must be lowered to native gates");
    }
    if (n_shots == 0) {
        throw std::invalid_argument("run_noisy: n_shots must be positive");
    }
    for (const Gate &g : circuit.gates) {
        validate_gate(g, circuit.num_qubits);
    }

    std::vector<detail::CompiledOp> ops;
    ops.reserve(circuit.gates.size());
    for (const Gate &g : circuit.gates) {
        detail::CompiledOp op;
        op.matrix = gate_matrix(g);
        op.qubits = g.qubits;
        op.arity = gate_arity(g.kind);
        if (g.kind == GateKind::XX) {
            op.error_prob = noise.p2;
        } else if (g.kind == GateKind::R) {
            op.error_prob = noise.p1;
        }
        ops.push_back(std::move(op));
    }

    ShotRecord rec(circuit.num_qubits);
    std::vector<double> probs;
    for (std::uint64_t shot = 0; shot < n_shots; ++shot) {
        std::mt19937_64 rng(derive_seed(noise.seed, shot));
        StateVector state(circuit.num_qubits);
        for (const detail::CompiledOp &op : ops) {
            state.apply_matrix(op.matrix, op.qubits.data(), op.arity);
            if (op.error_prob > 0.0 &&
                StateVector::uniform_draw(rng) < op.error_prob) {
                detail::apply_random_pauli(state, op.qubits, op.arity, rng);
            }
        }
        probs = state.probabilities();
        const double u = StateVector::uniform_draw(rng);
        double acc = 0.0;
        std::size_t idx = probs.size() - 1;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) {
                idx = i;
                break;
            }
        }
        rec.add(idx);
    }
    return rec;
}

/// Per-qubit readout confusion matrices C[measured][true], column-stochastic.
/// The full-register confusion matrix is their tensor product.
struct SpamModel {
    std::vector<std::array<std::array<double, 2>, 2>> confusion;

    static SpamModel uniform(int num_qubits, double fidelity = 0.994) {
        SpamModel m;
        m.confusion.assign(static_cast<std::size_t>(num_qubits),
                           {{{fidelity, 1.0 - fidelity}, {1.0 - fidelity, fidelity}}});
        return m;
    }

    static SpamModel identity(int num_qubits) { return uniform(num_qubits, 1.0); }

    int num_qubits() const { return static_cast<int>(confusion.size()); }

    void validate() const {
        for (const auto &c : confusion) {
            for (int s = 0; s < 2; ++s) {
                const double col = c[0][static_cast<std::size_t>(s)] + c[1][static_cast<std::size_t>(s)];
                if (std::abs(col - 1.0) > 1e-9) {
                    throw std::invalid_argument("SpamModel: columns must sum to 1");
                }
                for (int r = 0; r < 2; ++r) {
                    const double v = c[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
                    if (v < 0.0 || v > 1.0) {
                        throw std::invalid_argument("SpamModel: entries must be in [0,1]");
                    }
                }
            }
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::array();
        for (const auto &c : confusion) {
            j.push_back({{c[0][0], c[0][1]}, {c[1][0], c[1][1]}});
        }
        return j;
    }

    static SpamModel from_json(const nlohmann::json &j) {
        SpamModel m;
        for (const auto &cm : j) {
            m.confusion.push_back({{{cm[0][0].get<double>(), cm[0][1].get<double>()},
                                    {cm[1][0].get<double>(), cm[1][1].get<double>()}}});
        }
        m.validate();
        return m;
    }
};

namespace detail {

/// Applies a real 2x2 matrix per qubit along each bit axis of a length-2^n
/// vector (MSB-first bit order).
inline void apply_factorized(std::vector<double> &vec, int num_qubits,
                             const SpamModel &spam, bool inverse) {
    for (int q = 0; q < num_qubits; ++q) {
        const auto &c = spam.confusion[static_cast<std::size_t>(q)];
        double m00 = c[0][0], m01 = c[0][1], m10 = c[1][0], m11 = c[1][1];
        if (inverse) {
            const double det = m00 * m11 - m01 * m10;
            if (std::abs(det) < 1e-12) {
                throw std::runtime_error("SpamModel: confusion matrix is singular");
            }
            const double i00 = m11 / det, i01 = -m01 / det;
            const double i10 = -m10 / det, i11 = m00 / det;
            m00 = i00; m01 = i01; m10 = i10; m11 = i11;
        }
        const std::size_t stride = std::size_t{1} << (num_qubits - 1 - q);
        for (std::size_t base = 0; base < vec.size(); ++base) {
            if (base & stride) {
                continue;
            }
            const double v0 = vec[base], v1 = vec[base | stride];
            vec[base] = m00 * v0 + m01 * v1;
            vec[base | stride] = m10 * v0 + m11 * v1;
        }
    }
}

}  // namespace detail

/// Propagates a probability vector through the tensor-product confusion matrix.
inline std::vector<double> apply_spam(const std::vector<double> &probs,
                                      const SpamModel &spam) {
    spam.validate();
    if (probs.size() != (std::size_t{1} << spam.num_qubits())) {
        throw std::invalid_argument("apply_spam: dimension mismatch");
    }
    std::vector<double> out = probs;
    detail::apply_factorized(out, spam.num_qubits(), spam, /*inverse=*/false);
    return out;
}

/// Resamples a shot record with per-bit readout flips.
inline ShotRecord apply_spam(const ShotRecord &record, const SpamModel &spam,
                             std::uint64_t seed) {
    spam.validate();
    if (record.num_qubits != spam.num_qubits()) {
        throw std::invalid_argument("apply_spam: dimension mismatch");
    }
    ShotRecord out(record.num_qubits);
    std::uint64_t stream = 0;
    for (const auto &[outcome, count] : record.counts) {
        for (std::uint64_t k = 0; k < count; ++k) {
            std::mt19937_64 rng(derive_seed(seed, stream++));
            std::string flipped = outcome;
            for (int q = 0; q < record.num_qubits; ++q) {
                const int truth = outcome[static_cast<std::size_t>(q)] - '0';
                const auto &c = spam.confusion[static_cast<std::size_t>(q)];
                const double p_flip = c[static_cast<std::size_t>(1 - truth)][static_cast<std::size_t>(truth)];
                if (StateVector::uniform_draw(rng) < p_flip) {
                    flipped[static_cast<std::size_t>(q)] = static_cast<char>('0' + (1 - truth));
                }
            }
            out.counts[flipped] += 1;
        }
    }
    return out;
}

/// Inverse-confusion SPAM correction on an averaged probability vector:
/// multiply by the inverse tensor-product matrix, clip negatives, renormalize.
inline std::vector<double> correct_spam(const std::vector<double> &probs,
                                        const SpamModel &spam) {
    spam.validate();
    if (probs.size() != (std::size_t{1} << spam.num_qubits())) {
        throw std::invalid_argument("correct_spam: dimension mismatch");
    }
    double total = 0.0;
    for (double p : probs) {
        if (p < -1e-6) {
            throw std::invalid_argument("correct_spam: input is not a distribution");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) {
        throw std::invalid_argument("correct_spam: input does not sum to 1");
    }
    std::vector<double> out = probs;
    detail::apply_factorized(out, spam.num_qubits(), spam, /*inverse=*/true);
    double sum = 0.0;
    for (double &p : out) {
        if (p < 0.0) {
            p = 0.0;
        }
        sum += p;
    }
    if (sum <= 0.0) {
        throw std::runtime_error("correct_spam: correction annihilated the distribution");
    }
    for (double &p : out) {
        p /= sum;
    }
    return out;
}

}  // namespace qdimer
