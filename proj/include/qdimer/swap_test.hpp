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
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qdimer/adiabatic.hpp"
#include "qdimer/circuit.hpp"
#include "qdimer/lowering.hpp"
#include "qdimer/noise.hpp"
#include "qdimer/shot_record.hpp"
#include "qdimer/state_vector.hpp"

namespace qdimer::renyi {

/// Wiring of the 5-qubit swap test: ancilla on top (most significant bit),
/// two two-qubit copies below it, C-Swap acting on the copies' A qubits.
struct SwapTestLayout {
    int ancilla = 0;
    int a1 = 1;
    int b1 = 2;
    int a2 = 3;
    int b2 = 4;

    void validate() const {
        std::array<int, 5> idx = {ancilla, a1, b1, a2, b2};
        std::array<int, 5> sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        for (int q = 0; q < 5; ++q) {
            if (sorted[static_cast<std::size_t>(q)] != q) {
                throw std::invalid_argument("SwapTestLayout: indices must be a permutation of 0..4");
            }
        }
    }
};

/// Full R2 measurement circuit: identical preparation blocks on both copies,
/// then the ancilla-controlled swap of the A qubits framed by ancilla
/// Hadamards. Fig-style final Hadamards on the data qubits are optional; the
/// post-selection rule is valid either way.
inline Circuit build_swap_test_circuit(const adiabatic::TrotterSchedule &schedule,
                                       bool final_hadamards = true,
                                       const SwapTestLayout &layout = {}) {
    layout.validate();
    Circuit circuit(5);
    adiabatic::append_prep_block(circuit, schedule, layout.a1, layout.b1);
    adiabatic::append_prep_block(circuit, schedule, layout.a2, layout.b2);
    circuit.append(Gate::h(layout.ancilla));
    circuit.append(Gate::cswap(layout.ancilla, layout.a1, layout.a2));
    circuit.append(Gate::h(layout.ancilla));
    if (final_hadamards) {
        for (int q : {layout.a1, layout.b1, layout.a2, layout.b2}) {
            circuit.append(Gate::h(q));
        }
    }
    return circuit;
}

/// Outcomes that carry zero weight for an ideal C-Swap: ancilla 1 with equal
/// A bits or equal B bits. Exactly 12 of the 32 outcomes.
inline std::vector<std::uint32_t> zero_weight_set(const SwapTestLayout &layout = {}) {
    layout.validate();
    std::vector<std::uint32_t> out;
    for (std::uint32_t outcome = 0; outcome < 32; ++outcome) {
        const auto bit = [&](int q) { return (outcome >> (4 - q)) & 1u; };
        if (bit(layout.ancilla) == 0) {
            continue;
        }
        if (bit(layout.a1) == bit(layout.a2) || bit(layout.b1) == bit(layout.b2)) {
            out.push_back(outcome);
        }
    }
    return out;
}

struct R2Estimate {
    double r2 = 0.0;
    double std_err = 0.0;
    double p0 = 0.0;
    double p1 = 0.0;
    double yield_fraction = 0.0;
    bool post_selected = false;
    bool r2_defined = false;
    std::uint64_t kept_shots = 0;
};

namespace detail {

inline bool discarded(std::uint64_t outcome, const std::vector<std::uint32_t> &zw) {
    return std::binary_search(zw.begin(), zw.end(), static_cast<std::uint32_t>(outcome));
}

}  // namespace detail

/// R2 = P(anc=0) - P(anc=1) over kept shots. With post-selection, every
/// outcome in the zero-weight set is discarded first.
inline R2Estimate estimate_r2(const ShotRecord &record, bool post_select,
                              const SwapTestLayout &layout = {}) {
    layout.validate();
    if (record.num_qubits != 5) {
        throw std::invalid_argument("estimate_r2: record must cover 5 qubits");
    }
    const std::uint64_t total = record.total_shots();
    if (total == 0) {
        throw std::invalid_argument("estimate_r2: empty record");
    }
    const std::vector<std::uint32_t> zw = zero_weight_set(layout);

    std::uint64_t kept = 0, anc1 = 0;
    for (const auto &[outcome, count] : record.counts) {
        const std::uint64_t idx = ShotRecord::index_of(outcome);
        if (post_select && detail::discarded(idx, zw)) {
            continue;
        }
        kept += count;
        if ((idx >> (4 - layout.ancilla)) & 1ULL) {
            anc1 += count;
        }
    }

    R2Estimate est;
    est.post_selected = post_select;
    est.kept_shots = kept;
    est.yield_fraction = static_cast<double>(kept) / static_cast<double>(total);
    if (kept == 0) {
        return est;  // yield 0, r2 undefined
    }
    est.p1 = static_cast<double>(anc1) / static_cast<double>(kept);
    est.p0 = 1.0 - est.p1;
    est.r2 = est.p0 - est.p1;
    est.std_err = std::sqrt(std::max(0.0, 1.0 - est.r2 * est.r2) /
                            static_cast<double>(kept));
    est.r2_defined = true;
    return est;
}

/// Exact-mode estimate from a probability vector (std_err = 0).
inline R2Estimate r2_from_probabilities(const std::vector<double> &probs,
                                        bool post_select,
                                        const SwapTestLayout &layout = {}) {
    layout.validate();
    if (probs.size() != 32) {
        throw std::invalid_argument("r2_from_probabilities: need 32 outcome probabilities");
    }
    const std::vector<std::uint32_t> zw = zero_weight_set(layout);
    double kept = 0.0, anc1 = 0.0;
    for (std::uint64_t idx = 0; idx < 32; ++idx) {
        if (post_select && detail::discarded(idx, zw)) {
            continue;
        }
        kept += probs[idx];
        if ((idx >> (4 - layout.ancilla)) & 1ULL) {
            anc1 += probs[idx];
        }
    }
    R2Estimate est;
    est.post_selected = post_select;
    est.yield_fraction = kept;
    if (kept <= 0.0) {
        return est;
    }
    est.p1 = anc1 / kept;
    est.p0 = 1.0 - est.p1;
    est.r2 = est.p0 - est.p1;
    est.r2_defined = true;
    return est;
}

/// 8x8 state-transfer probability matrix of the lowered C-Swap, p[out][in].
/// Noiseless it reproduces the ideal permutation; under gate noise each input
/// column is estimated from `shots` trajectory samples.
struct TruthTable {
    std::array<std::array<double, 8>, 8> p{};

    static constexpr std::array<int, 8> kIdealOutput = {0, 1, 2, 3, 4, 6, 5, 7};

    double average_success() const {
        double acc = 0.0;
        for (int in = 0; in < 8; ++in) {
            acc += p[static_cast<std::size_t>(kIdealOutput[static_cast<std::size_t>(in)])]
                    [static_cast<std::size_t>(in)];
        }
        return acc / 8.0;
    }

    /// Probability that the control (most significant) bit reads back correctly.
    double control_marginal() const {
        double acc = 0.0;
        for (int in = 0; in < 8; ++in) {
            const int control = in >> 2;
            for (int out = 0; out < 8; ++out) {
                if ((out >> 2) == control) {
                    acc += p[static_cast<std::size_t>(out)][static_cast<std::size_t>(in)];
                }
            }
        }
        return acc / 8.0;
    }
};

inline Circuit cswap_input_circuit(int input, const SignParams &signs = {}) {
    Circuit circuit(3);
    for (int q = 0; q < 3; ++q) {
        if ((input >> (2 - q)) & 1) {
            circuit.append(Gate::r(q, M_PI, 0.0));  // X up to phase
        }
    }
    const LoweringResult lowered = lower_gate(Gate::cswap(0, 1, 2), signs);
    circuit.extend(lowered.native_circuit);
    return circuit;
}

inline TruthTable cswap_truth_table(const SignParams &signs = {}) {
    TruthTable table;
    for (int in = 0; in < 8; ++in) {
        StateVector state(3);
        state.apply(cswap_input_circuit(in, signs));
        const std::vector<double> probs = state.probabilities();
        for (int out = 0; out < 8; ++out) {
            table.p[static_cast<std::size_t>(out)][static_cast<std::size_t>(in)] =
                probs[static_cast<std::size_t>(out)];
        }
    }
    return table;
}

inline TruthTable cswap_truth_table(const NoiseModel &noise, std::uint64_t shots,
                                    const SignParams &signs = {}) {
    TruthTable table;
    for (int in = 0; in < 8; ++in) {
        NoiseModel col_noise = noise;
        col_noise.seed = derive_seed(noise.seed, static_cast<std::uint64_t>(in));
        const ShotRecord rec = run_noisy(cswap_input_circuit(in, signs), col_noise, shots);
        const std::vector<double> freq = rec.frequencies();
        for (int out = 0; out < 8; ++out) {
            table.p[static_cast<std::size_t>(out)][static_cast<std::size_t>(in)] =
                freq[static_cast<std::size_t>(out)];
        }
    }
    return table;
}

}  // namespace qdimer::renyi
