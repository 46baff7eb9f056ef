// Copyright 2026 The cachesv Authors
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

// Reference implementations: a dense simulator built on gate_matrix, a
// reference bit permutation, and the circuit-order validator.

#pragma once

#include <algorithm>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cachesv/bits.hpp"
#include "cachesv/circuit.hpp"

namespace cachesv {

inline constexpr int kOracleMaxQubits = 26;

inline constexpr const char *kValidationSuccess = "Passed all circuit order validations";

/// Applies one gate's dense matrix to a full state vector.
inline void oracle_apply(std::vector<Amplitude> &state, int num_qubits, const Gate &g) {
    check_gate(g, num_qubits);
    GateMatrix m = gate_matrix(g);
    const int k = g.arity();
    QubitMask mask = g.mask();
    std::vector<Index> offsets(m.dim);
    for (int row = 0; row < m.dim; row++) {
        Index off = 0;
        for (int j = 0; j < k; j++) {
            if ((row >> (k - 1 - j)) & 1) off |= Index{1} << g.targets[j];
        }
        offsets[row] = off;
    }
    std::vector<Amplitude> in(m.dim), out(m.dim);
    for (Index i = 0; i < state.size(); i++) {
        if (i & mask) continue;
        for (int r = 0; r < m.dim; r++) in[r] = state[i | offsets[r]];
        for (int r = 0; r < m.dim; r++) {
            Amplitude acc = 0;
            for (int c = 0; c < m.dim; c++) acc += m(r, c) * in[c];
            out[r] = acc;
        }
        for (int r = 0; r < m.dim; r++) state[i | offsets[r]] = out[r];
    }
}

/// Dense simulation from |0...0>, one full matrix application per gate.
inline std::vector<Amplitude> oracle_simulate(const RawCircuit &raw) {
    if (raw.num_qubits < 1 || raw.num_qubits > kOracleMaxQubits) {
        throw std::invalid_argument("oracle supports 1 to 26 qubits");
    }
    std::vector<Amplitude> state(std::size_t{1} << raw.num_qubits, Amplitude{0, 0});
    state[0] = 1;
    for (const Gate &g : raw.gates) oracle_apply(state, raw.num_qubits, g);
    return state;
}

/// new[i] = old[bitswap(i, A, B)].
inline std::vector<Amplitude> bitswap_permute(const std::vector<Amplitude> &state, std::span<const int> a,
                                              std::span<const int> b) {
    std::vector<Amplitude> out(state.size());
    for (Index i = 0; i < state.size(); i++) out[i] = state[bitswap(i, a, b)];
    return out;
}

/// Flattens an optimized circuit back to logical targets, sorted by id.
inline RawCircuit restore_order(const OptimizedCircuit &opt) {
    RawCircuit out{opt.num_qubits, {}};
    QubitPermutation perm(opt.num_qubits);
    for (const Instruction &inst : opt.instructions) {
        if (const auto *blk = std::get_if<GateBlock>(&inst)) {
            for (const Gate &g : blk->gates) {
                if (g.kind == GateKind::D) throw std::invalid_argument("restore_order: circuit contains fused gates");
                Gate r = g;
                for (int &t : r.targets) t = perm.logical_at(t);
                out.gates.push_back(std::move(r));
            }
        } else if (const auto *ims = std::get_if<InMemSwap>(&inst)) {
            perm.swap_positions(ims->out_set, ims->in_set);
        } else {
            const auto &xrs = std::get<CrossRankSwap>(inst);
            perm.swap_positions(xrs.local_set, xrs.rank_set);
        }
    }
    std::stable_sort(out.gates.begin(), out.gates.end(), [](const Gate &a, const Gate &b) { return a.id < b.id; });
    return out;
}

struct ValidationReport {
    bool passed = true;
    std::vector<std::string> problems;

    std::string summary() const {
        if (passed) return kValidationSuccess;
        std::string s;
        for (const std::string &p : problems) s += p + "\n";
        return s;
    }
};

namespace detail {

inline bool same_gate_tokens(const Gate &a, const Gate &b) {
    if (a.kind != b.kind || a.id != b.id || a.targets.size() != b.targets.size()) return false;
    if (kind_is_symmetric(a.kind)) {
        std::vector<int> x = a.targets, y = b.targets;
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        return x == y;
    }
    return a.targets == b.targets;
}

inline std::string describe(const Gate &g) {
    std::ostringstream s;
    s << kind_symbol(g.kind);
    for (int t : g.targets) s << ' ' << t;
    s << ' ' << g.id;
    return s.str();
}

}  // namespace detail

/// Checks that an optimized circuit holds exactly the raw gates and keeps
/// every qubit's gates in their original relative order.
inline ValidationReport validate_order(const RawCircuit &raw, const OptimizedCircuit &opt) {
    ValidationReport rep;
    auto fail = [&](std::string msg) {
        rep.passed = false;
        if (rep.problems.size() < 20) rep.problems.push_back(std::move(msg));
    };
    if (raw.num_qubits != opt.num_qubits) {
        fail("qubit counts differ: raw " + std::to_string(raw.num_qubits) + ", optimized " +
             std::to_string(opt.num_qubits));
        return rep;
    }
    RawCircuit restored;
    try {
        restored = restore_order(opt);
    } catch (const std::exception &e) {
        fail(e.what());
        return rep;
    }
    if (restored.gates.size() != raw.gates.size()) {
        fail("gate counts differ: raw " + std::to_string(raw.gates.size()) + ", optimized " +
             std::to_string(restored.gates.size()));
    }
    std::size_t common = std::min(restored.gates.size(), raw.gates.size());
    for (std::size_t i = 0; i < common; i++) {
        if (!detail::same_gate_tokens(raw.gates[i], restored.gates[i])) {
            fail("gate mismatch at position " + std::to_string(i) + ": expected '" + detail::describe(raw.gates[i]) +
                 "', restored '" + detail::describe(restored.gates[i]) + "'");
        }
    }

    // Per-qubit order over the flattened stream, in logical qubits.
    std::vector<std::uint64_t> last(opt.num_qubits, 0);
    std::vector<bool> seen(opt.num_qubits, false);
    QubitPermutation perm(opt.num_qubits);
    for (const Instruction &inst : opt.instructions) {
        if (const auto *blk = std::get_if<GateBlock>(&inst)) {
            for (const Gate &g : blk->gates) {
                for (int t : g.targets) {
                    int q = perm.logical_at(t);
                    if (seen[q] && g.id <= last[q]) {
                        fail("qubit " + std::to_string(q) + ": gate id " + std::to_string(g.id) + " follows id " +
                             std::to_string(last[q]));
                    }
                    seen[q] = true;
                    last[q] = g.id;
                }
            }
        } else if (const auto *ims = std::get_if<InMemSwap>(&inst)) {
            perm.swap_positions(ims->out_set, ims->in_set);
        } else {
            const auto &xrs = std::get<CrossRankSwap>(inst);
            perm.swap_positions(xrs.local_set, xrs.rank_set);
        }
    }
    return rep;
}

}  // namespace cachesv
