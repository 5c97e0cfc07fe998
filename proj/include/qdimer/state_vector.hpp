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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdimer/circuit.hpp"
#include "qdimer/dense_matrix.hpp"
#include "qdimer/gates.hpp"
#include "qdimer/shot_record.hpp"

namespace qdimer {

/// Dense state vector over an n-qubit register.
///
/// Index convention: qubit 0 is the most significant bit of the basis index,
/// so |q0 q1 ... q_{n-1}> lives at index q0*2^{n-1} + ... + q_{n-1}.
class StateVector {
  public:
    explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits <= 0 || num_qubits > 24) {
            throw std::invalid_argument("StateVector: unsupported qubit count");
        }
        amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
        amps_[0] = 1.0;
    }

    static StateVector basis(int num_qubits, std::uint64_t index) {
        StateVector s(num_qubits);
        if (index >= s.dimension()) {
            throw std::out_of_range("StateVector::basis: index out of range");
        }
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    static StateVector from_amplitudes(int num_qubits, std::vector<cplx> amps) {
        StateVector s(num_qubits);
        if (amps.size() != s.dimension()) {
            throw std::invalid_argument("StateVector: amplitude count != 2^n");
        }
        s.amps_ = std::move(amps);
        if (std::abs(s.norm() - 1.0) > 1e-9) {
            throw std::invalid_argument("StateVector: amplitudes are not normalized");
        }
        return s;
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amps_.size(); }
    const std::vector<cplx> &amplitudes() const { return amps_; }
    cplx amplitude(std::size_t index) const { return amps_.at(index); }

    int bit(std::size_t index, int qubit) const {
        return static_cast<int>((index >> (num_qubits_ - 1 - qubit)) & 1u);
    }

    double norm() const {
        double s = 0.0;
        for (const cplx &a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

    cplx inner(const StateVector &other) const {
        if (other.num_qubits_ != num_qubits_) {
            throw std::invalid_argument("StateVector::inner: size mismatch");
        }
        cplx s = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            s += std::conj(amps_[i]) * other.amps_[i];
        }
        return s;
    }

    /// Applies a gate by its exact unitary (logical gates included, independent
    /// of any lowering). Throws on index errors and on norm drift > 1e-9.
    void apply(const Gate &gate) {
        validate_gate(gate, num_qubits_);
        apply_dense(gate_matrix(gate), gate.qubits.data(), gate_arity(gate.kind));
        check_norm();
    }

    /// Applies a pre-built unitary on k target qubits without the norm check.
    /// Hot path for trajectory sampling; the caller owns matrix validity.
    void apply_matrix(const DenseMatrix &u, const int *qubits, int k) {
        apply_dense(u, qubits, k);
    }

    void apply(const Circuit &circuit) {
        if (circuit.num_qubits != num_qubits_) {
            throw std::invalid_argument("StateVector: circuit register size mismatch");
        }
        for (const Gate &g : circuit.gates) {
            apply(g);
        }
    }

    /// |amplitude|^2 for every basis index.
    std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            p[i] = std::norm(amps_[i]);
        }
        return p;
    }

    /// <state|P|state> for a Pauli string like "XZIY" (one label per qubit).
    double expectation_pauli(const std::string &pauli_string) const {
        if (static_cast<int>(pauli_string.size()) != num_qubits_) {
            throw std::invalid_argument("expectation_pauli: label length != num_qubits");
        }
        std::uint64_t flip_mask = 0;  // bits flipped by X or Y
        std::uint64_t z_mask = 0;     // bits contributing a Z sign
        int y_count = 0;
        std::uint64_t y_mask = 0;
        for (int q = 0; q < num_qubits_; ++q) {
            const std::uint64_t b = std::uint64_t{1} << (num_qubits_ - 1 - q);
            switch (pauli_string[static_cast<std::size_t>(q)]) {
                case 'I': break;
                case 'X': flip_mask |= b; break;
                case 'Y': flip_mask |= b; y_mask |= b; ++y_count; break;
                case 'Z': z_mask |= b; break;
                default:
                    throw std::invalid_argument("expectation_pauli: bad label '" +
                                                std::string(1, pauli_string[q]) + "'");
            }
        }
        // P|i> = i^y_count * (-1)^{popcount(i & (y|z))} |i ^ flip_mask>,
        // since Y|0> = i|1> and Y|1> = -i|0>.
        static constexpr cplx kI_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const cplx y_phase = kI_pow[y_count % 4];
        cplx acc = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (amps_[i] == cplx{0.0, 0.0}) {
                continue;
            }
            const cplx phase =
                parity(i & (z_mask | y_mask)) ? -y_phase : y_phase;
            const std::size_t j = i ^ flip_mask;
            acc += std::conj(amps_[j]) * phase * amps_[i];
        }
        if (std::abs(acc.imag()) > 1e-10) {
            throw std::runtime_error("expectation_pauli: non-real expectation (" +
                                     std::to_string(acc.imag()) + ")");
        }
        return acc.real();
    }

    /// Purity Tr(rho_q^2) of the one-qubit reduced state of `qubit`.
    double reduced_purity(int qubit) const {
        if (qubit < 0 || qubit >= num_qubits_) {
            throw std::out_of_range("reduced_purity: qubit out of range");
        }
        const std::uint64_t b = std::uint64_t{1} << (num_qubits_ - 1 - qubit);
        cplx r00 = 0.0, r01 = 0.0, r11 = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & b) {
                r11 += std::conj(amps_[i]) * amps_[i];
            } else {
                r00 += std::conj(amps_[i]) * amps_[i];
                r01 += amps_[i] * std::conj(amps_[i | b]);
            }
        }
        return std::real(r00 * r00 + r11 * r11 + 2.0 * r01 * std::conj(r01));
    }

    /// Multinomial sampling via inverse CDF on a fixed mt19937_64 stream, so
    /// results are reproducible across platforms for a given seed.
    ShotRecord sample_shots(std::uint64_t n_shots, std::uint64_t seed) const {
        if (n_shots == 0) {
            throw std::invalid_argument("sample_shots: n_shots must be positive");
        }
        std::vector<double> cdf = probabilities();
        for (std::size_t i = 1; i < cdf.size(); ++i) {
            cdf[i] += cdf[i - 1];
        }
        std::mt19937_64 rng(seed);
        ShotRecord rec(num_qubits_);
        for (std::uint64_t s = 0; s < n_shots; ++s) {
            const double u = uniform_draw(rng);
            const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
            if (idx >= cdf.size()) {
                idx = cdf.size() - 1;
            }
            rec.add(idx);
        }
        return rec;
    }

    /// Uniform double in [0,1) from 53 random bits.
    static double uniform_draw(std::mt19937_64 &rng) {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }

  private:
    static bool parity(std::uint64_t v) {
        return std::popcount(v) & 1;
    }

    void check_norm() const {
        if (std::abs(norm() - 1.0) > 1e-9) {
            throw std::runtime_error("StateVector: norm drifted to " + std::to_string(norm()));
        }
    }

    /// Gather/scatter application of a 2^k x 2^k matrix on k target qubits
    /// (k <= 3 for the gate set here).
    void apply_dense(const DenseMatrix &u, const int *qubits, int k) {
        const std::size_t block = std::size_t{1} << k;
        std::array<std::uint64_t, 3> masks{};
        std::uint64_t targets_union = 0;
        for (int t = 0; t < k; ++t) {
            masks[static_cast<std::size_t>(t)] =
                std::uint64_t{1} << (num_qubits_ - 1 - qubits[t]);
            targets_union |= masks[static_cast<std::size_t>(t)];
        }

        std::array<std::size_t, 8> offsets{};
        for (std::size_t v = 0; v < block; ++v) {
            std::size_t off = 0;
            for (int t = 0; t < k; ++t) {
                if ((v >> (k - 1 - t)) & 1u) {
                    off |= masks[static_cast<std::size_t>(t)];
                }
            }
            offsets[v] = off;
        }

        std::array<cplx, 8> in{}, out{};
        const std::size_t dim = amps_.size();
        for (std::size_t base = 0; base < dim; ++base) {
            if (base & targets_union) {
                continue;  // enumerate only indices with all target bits clear
            }
            for (std::size_t v = 0; v < block; ++v) {
                in[v] = amps_[base | offsets[v]];
            }
            for (std::size_t r = 0; r < block; ++r) {
                cplx acc = 0.0;
                for (std::size_t c = 0; c < block; ++c) {
                    acc += u(r, c) * in[c];
                }
                out[r] = acc;
            }
            for (std::size_t v = 0; v < block; ++v) {
                amps_[base | offsets[v]] = out[v];
            }
        }
    }

    int num_qubits_;
    std::vector<cplx> amps_;
};

}  // namespace qdimer
