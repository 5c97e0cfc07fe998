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

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qdimer {

/// Histogram of measurement outcomes. Keys are fixed-width bitstrings,
/// MSB first (qubit 0 is the leftmost character).
struct ShotRecord {
    int num_qubits = 0;
    std::map<std::string, std::uint64_t> counts;

    ShotRecord() = default;
    explicit ShotRecord(int n) : num_qubits(n) {}

    std::uint64_t total_shots() const {
        std::uint64_t total = 0;
        for (const auto &[outcome, count] : counts) {
            total += count;
        }
        return total;
    }

    void add(std::uint64_t basis_index, std::uint64_t n = 1) {
        counts[bitstring(basis_index)] += n;
    }

    std::string bitstring(std::uint64_t basis_index) const {
        std::string s(static_cast<std::size_t>(num_qubits), '0');
        for (int q = 0; q < num_qubits; ++q) {
            if ((basis_index >> (num_qubits - 1 - q)) & 1ULL) {
                s[static_cast<std::size_t>(q)] = '1';
            }
        }
        return s;
    }

    static std::uint64_t index_of(const std::string &outcome) {
        std::uint64_t idx = 0;
        for (char c : outcome) {
            if (c != '0' && c != '1') {
                throw std::invalid_argument("ShotRecord: malformed outcome '" + outcome + "'");
            }
            idx = (idx << 1) | static_cast<std::uint64_t>(c == '1');
        }
        return idx;
    }

    /// Normalized outcome frequencies over the full 2^n index space.
    std::vector<double> frequencies() const {
        std::vector<double> f(std::size_t{1} << num_qubits, 0.0);
        const double total = static_cast<double>(total_shots());
        if (total == 0) {
            return f;
        }
        for (const auto &[outcome, count] : counts) {
            f[index_of(outcome)] = static_cast<double>(count) / total;
        }
        return f;
    }

    void validate() const {
        for (const auto &[outcome, count] : counts) {
            (void)count;
            if (static_cast<int>(outcome.size()) != num_qubits) {
                throw std::invalid_argument("ShotRecord: outcome '" + outcome +
                                            "' does not have " + std::to_string(num_qubits) +
                                            " bits");
            }
            index_of(outcome);
        }
    }

    void write_csv(std::ostream &os) const {
        os << "outcome,count\n";
        for (const auto &[outcome, count] : counts) {
            os << outcome << "," << count << "\n";
        }
    }

    /// Parses `outcome,count` CSV. Lines starting with '#' are skipped so
    /// files carrying a config header comment stay readable.
    static ShotRecord read_csv(std::istream &is) {
        ShotRecord rec;
        std::string line;
        bool saw_header = false;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') {
                continue;
            }
            if (!saw_header) {
                if (line != "outcome,count") {
                    throw std::invalid_argument("ShotRecord CSV: expected header 'outcome,count'");
                }
                saw_header = true;
                continue;
            }
            const auto comma = line.find(',');
            if (comma == std::string::npos) {
                throw std::invalid_argument("ShotRecord CSV: malformed line '" + line + "'");
            }
            const std::string outcome = line.substr(0, comma);
            const std::uint64_t count = std::stoull(line.substr(comma + 1));
            if (rec.num_qubits == 0) {
                rec.num_qubits = static_cast<int>(outcome.size());
            }
            rec.counts[outcome] += count;
        }
        if (!saw_header) {
            throw std::invalid_argument("ShotRecord CSV: missing header");
        }
        rec.validate();
        return rec;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["num_qubits"] = num_qubits;
        j["counts"] = nlohmann::json::object();
        for (const auto &[outcome, count] : counts) {
            j["counts"][outcome] = count;
        }
        return j;
    }

    static ShotRecord from_json(const nlohmann::json &j) {
        ShotRecord rec(j.at("num_qubits").get<int>());
        for (const auto &[outcome, count] : j.at("counts").items()) {
            rec.counts[outcome] = count.get<std::uint64_t>();
        }
        rec.validate();
        return rec;
    }
};

}  // namespace qdimer
