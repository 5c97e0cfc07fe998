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

#include <stdexcept>
#include <vector>

#include "qdimer/gates.hpp"

namespace qdimer {

/// Ordered gate sequence on a fixed-size register. Gates are validated on
/// append; layering for depth accounting lives in lowering.hpp.
struct Circuit {
    int num_qubits = 0;
    std::vector<Gate> gates;

    Circuit() = default;
    explicit Circuit(int n) : num_qubits(n) {
        if (n <= 0) {
            throw std::invalid_argument("Circuit: num_qubits must be positive");
        }
    }

    Circuit &append(const Gate &gate) {
        validate_gate(gate, num_qubits);
        gates.push_back(gate);
        return *this;
    }

    Circuit &extend(const Circuit &other) {
        if (other.num_qubits > num_qubits) {
            throw std::invalid_argument("Circuit::extend: register too small");
        }
        for (const Gate &g : other.gates) {
            append(g);
        }
        return *this;
    }

    std::size_t size() const { return gates.size(); }

    int entangling_count() const {
        int n = 0;
        for (const Gate &g : gates) {
            n += is_entangling(g.kind) ? 1 : 0;
        }
        return n;
    }

    bool all_native() const {
        for (const Gate &g : gates) {
            if (!is_native(g.kind)) {
                return false;
            }
        }
        return true;
    }
};

}  // namespace qdimer
