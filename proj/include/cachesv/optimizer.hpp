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

// All-in-one circuit optimizer.
//
// Gates are grouped into blocks whose qubits fit a working set, at two
// levels: device blocks (working set = the N - R local qubits, separated by
// cross-rank swap sandwiches) and chunk blocks inside each device block
// (working set = the C chunk qubits, separated by in-memory swaps). An
// optional third pass fuses runs of diagonal gates into one Dk gate.

#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cachesv/circuit.hpp"

namespace cachesv {

struct OptimizeFlags {
    bool in_memory_swap = true;
    bool cross_rank_swap = true;
    bool fusion = false;
};

inline bool mask_subset(QubitMask a, QubitMask b) {
    return (a & ~b) == 0;
}

/// dep(g) for every gate in list order: the qubits that must be resident for
/// g to run now, i.e. its targets plus the deps of the earlier pending gates
/// it shares a qubit with.
inline std::vector<QubitMask> update_dependency(std::span<const Gate> gates) {
    QubitMask pending[kMaxQubits] = {};
    std::vector<QubitMask> deps;
    deps.reserve(gates.size());
    for (const Gate &g : gates) {
        QubitMask d = g.mask();
        for (int t : g.targets) d |= pending[t];
        for (int t : g.targets) pending[t] = d;
        deps.push_back(d);
    }
    return deps;
}

/// A working set and the order in which it was assembled.
struct ChunkSelection {
    QubitMask set = 0;
    /// set after each merge step; the last entry equals `set`.
    std::vector<QubitMask> stages;
};

/// Greedy working-set choice.
///
/// Starting from the empty set, repeatedly merges the dep set of a remaining
/// gate that keeps the set within `chunk` qubits and makes the most additional
/// gates schedulable. Ties go to the merge adding fewer qubits, then to the
/// earliest gate in the list.
inline ChunkSelection find_max_gate(std::span<const Gate> gates, std::span<const QubitMask> deps, int chunk) {
    if (gates.empty()) throw std::invalid_argument("find_max_gate: empty gate list");
    if (std::popcount(deps[0]) > chunk) throw std::invalid_argument("gate wider than chunk");

    // Distinct dep sets that can ever fit, in order of first appearance, with multiplicity.
    std::vector<QubitMask> masks;
    std::vector<std::size_t> counts;
    for (QubitMask d : deps) {
        if (std::popcount(d) > chunk) continue;
        auto it = std::find(masks.begin(), masks.end(), d);
        if (it == masks.end()) {
            masks.push_back(d);
            counts.push_back(1);
        } else {
            counts[it - masks.begin()]++;
        }
    }

    ChunkSelection sel;
    std::vector<bool> covered(masks.size(), false);
    while (true) {
        std::size_t best = masks.size();
        std::size_t best_gain = 0;
        int best_added = 0;
        for (std::size_t c = 0; c < masks.size(); c++) {
            if (covered[c]) continue;
            QubitMask merged = sel.set | masks[c];
            int added = std::popcount(merged) - std::popcount(sel.set);
            if (std::popcount(merged) > chunk) continue;
            std::size_t gain = 0;
            for (std::size_t u = 0; u < masks.size(); u++) {
                if (!covered[u] && mask_subset(masks[u], merged)) gain += counts[u];
            }
            if (best == masks.size() || gain > best_gain || (gain == best_gain && added < best_added)) {
                best = c;
                best_gain = gain;
                best_added = added;
            }
        }
        if (best == masks.size()) break;
        sel.set |= masks[best];
        sel.stages.push_back(sel.set);
        for (std::size_t u = 0; u < masks.size(); u++) {
            if (mask_subset(masks[u], sel.set)) covered[u] = true;
        }
    }
    return sel;
}

/// Removes every gate schedulable within the final stage and returns them,
/// stage by stage and in list order within a stage.
inline std::vector<Gate> setup_gb(std::vector<Gate> &gates, std::span<const QubitMask> deps,
                                  std::span<const QubitMask> stages) {
    std::vector<int> stage_of(gates.size(), -1);
    for (std::size_t i = 0; i < gates.size(); i++) {
        for (std::size_t s = 0; s < stages.size(); s++) {
            if (mask_subset(deps[i], stages[s])) {
                stage_of[i] = static_cast<int>(s);
                break;
            }
        }
    }
    std::vector<Gate> block;
    for (std::size_t s = 0; s < stages.size(); s++) {
        for (std::size_t i = 0; i < gates.size(); i++) {
            if (stage_of[i] == static_cast<int>(s)) block.push_back(gates[i]);
        }
    }
    std::vector<Gate> rest;
    rest.reserve(gates.size() - block.size());
    for (std::size_t i = 0; i < gates.size(); i++) {
        if (stage_of[i] < 0) rest.push_back(std::move(gates[i]));
    }
    gates = std::move(rest);
    return block;
}

namespace detail {

inline std::vector<int> mask_bits(QubitMask m) {
    std::vector<int> out;
    while (m) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

/// Physical positions of the set's qubits that are at or above `limit`, ascending.
inline std::vector<int> incoming_positions(QubitMask set, int limit, const QubitPermutation &perm) {
    std::vector<int> pos;
    for (int q : mask_bits(set)) {
        if (perm.physical_of(q) >= limit) pos.push_back(perm.physical_of(q));
    }
    std::sort(pos.begin(), pos.end());
    return pos;
}

/// Positions below `limit` whose residents are not in the set, lowest logical qubit first.
inline std::vector<int> eviction_positions(QubitMask set, int limit, std::size_t count, const QubitPermutation &perm) {
    std::vector<int> out;
    for (int q = 0; q < perm.size() && out.size() < count; q++) {
        if (perm.physical_of(q) < limit && !(set >> q & 1)) out.push_back(perm.physical_of(q));
    }
    if (out.size() < count) throw std::invalid_argument("working set larger than the target region");
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Swaps that make every qubit of `set` resident before the next block.
///
/// Level 2 brings set qubits below C with one in-memory swap. Level 1 brings
/// them below N - R: the evicted local qubits are first moved to the top local
/// slots, exchanged with the rank bits holding the incoming qubits, and the
/// first swap is repeated so the incoming qubits take the evicted slots.
/// The permutation is updated in place.
inline std::vector<Instruction> insert_qubit_swaps(QubitMask set, const LayoutParams &layout, int level,
                                                   QubitPermutation &perm) {
    std::vector<Instruction> out;
    if (level == 2) {
        if (std::popcount(set) > layout.chunk_qubits) throw std::invalid_argument("working set exceeds chunk");
        std::vector<int> in = detail::incoming_positions(set, layout.chunk_qubits, perm);
        if (in.empty()) return out;
        std::vector<int> evict = detail::eviction_positions(set, layout.chunk_qubits, in.size(), perm);
        perm.swap_positions(evict, in);
        out.push_back(InMemSwap{evict, in});
        return out;
    }
    if (level != 1) throw std::invalid_argument("swap level must be 1 or 2");
    const int local = layout.local_qubits();
    if (std::popcount(set) > local) throw std::invalid_argument("working set exceeds local qubits");
    std::vector<int> in = detail::incoming_positions(set, local, perm);
    if (in.empty()) return out;
    const int s = static_cast<int>(in.size());
    std::vector<int> evict = detail::eviction_positions(set, local, in.size(), perm);
    std::vector<int> top;
    for (int p = local - s; p < local; p++) top.push_back(p);
    std::vector<int> from, to;
    std::set_difference(evict.begin(), evict.end(), top.begin(), top.end(), std::back_inserter(from));
    std::set_difference(top.begin(), top.end(), evict.begin(), evict.end(), std::back_inserter(to));
    if (!from.empty()) {
        perm.swap_positions(from, to);
        out.push_back(InMemSwap{from, to});
    }
    perm.swap_positions(top, in);
    out.push_back(CrossRankSwap{top, in});
    if (!from.empty()) {
        perm.swap_positions(from, to);
        out.push_back(InMemSwap{from, to});
    }
    return out;
}

/// Rewrites logical gates to physical targets. Symmetric kinds list targets ascending.
inline GateBlock map_block(std::span<const Gate> gates, const QubitPermutation &perm) {
    GateBlock block;
    block.gates.reserve(gates.size());
    for (const Gate &g : gates) {
        Gate m = g;
        for (int &t : m.targets) t = perm.physical_of(t);
        if (kind_is_symmetric(m.kind) && m.kind != GateKind::D) std::sort(m.targets.begin(), m.targets.end());
        block.gates.push_back(std::move(m));
    }
    return block;
}

/// Block finding at one level.
///
/// `gates` hold logical targets. The first block is whatever fits in the
/// qubits already sitting at their own slot below `chunk`; after that each
/// block is chosen by find_max_gate, preceded by its swaps. `on_swaps`
/// receives swap instructions as they are planned and `on_block` the logical
/// gates of each block, after its swaps are applied to `perm`.
inline void find_gbs(std::vector<Gate> gates, int chunk, int level, const LayoutParams &layout,
                     QubitPermutation &perm, const std::function<void(std::vector<Instruction> &&)> &on_swaps,
                     const std::function<void(std::vector<Gate> &&)> &on_block) {
    if (gates.empty()) return;
    QubitMask initial = 0;
    for (int q = 0; q < chunk && q < perm.size(); q++) {
        if (perm.physical_of(q) == q) initial |= QubitMask{1} << q;
    }
    {
        std::vector<QubitMask> deps = update_dependency(gates);
        QubitMask stage[] = {initial};
        std::vector<Gate> block = setup_gb(gates, deps, stage);
        if (!block.empty()) on_block(std::move(block));
    }
    while (!gates.empty()) {
        std::vector<QubitMask> deps = update_dependency(gates);
        ChunkSelection sel = find_max_gate(gates, deps, chunk);
        std::vector<Instruction> swaps = insert_qubit_swaps(sel.set, layout, level, perm);
        if (!swaps.empty()) on_swaps(std::move(swaps));
        std::vector<Gate> block = setup_gb(gates, deps, sel.stages);
        if (block.empty()) throw std::logic_error("optimizer stalled: empty block");
        on_block(std::move(block));
    }
}

/// Replaces runs of diagonal gates whose combined support stays within `fusion_qubits`
/// by one Dk gate (k >= 2). A non-diagonal gate touching an open run closes it.
inline GateBlock do_fusion(const GateBlock &block, int fusion_qubits) {
    GateBlock out;
    std::vector<Gate> group;
    QubitMask group_mask = 0;
    auto flush = [&] {
        if (group.size() >= 2 && std::popcount(group_mask) >= 2) {
            std::vector<int> targets = detail::mask_bits(group_mask);
            const int k = static_cast<int>(targets.size());
            std::vector<Amplitude> diag(std::size_t{1} << k, Amplitude{1, 0});
            for (const Gate &g : group) {
                std::vector<Amplitude> gd = gate_diagonal(g);
                std::vector<int> slot;
                for (int t : g.targets) slot.push_back(k - 1 - static_cast<int>(std::find(targets.begin(), targets.end(), t) - targets.begin()));
                for (std::size_t idx = 0; idx < diag.size(); idx++) {
                    std::size_t sub = 0;
                    for (int s : slot) sub = (sub << 1) | ((idx >> s) & 1);
                    diag[idx] *= gd[sub];
                }
            }
            out.gates.push_back(make_diagonal(std::move(targets), std::move(diag)));
        } else {
            for (Gate &g : group) out.gates.push_back(std::move(g));
        }
        group.clear();
        group_mask = 0;
    };
    for (const Gate &g : block.gates) {
        QubitMask m = g.mask();
        if (g.is_diagonal() && std::popcount(m) <= fusion_qubits) {
            if (std::popcount(group_mask | m) > fusion_qubits) flush();
            group.push_back(g);
            group_mask |= m;
        } else {
            if (m & group_mask) flush();
            out.gates.push_back(g);
        }
    }
    flush();
    return out;
}

/// Rewrites a raw circuit into blocks and swaps for the given layout.
inline OptimizedCircuit optimize(const RawCircuit &raw, const LayoutParams &layout, const OptimizeFlags &flags) {
    layout.validate();
    if (raw.num_qubits != layout.num_qubits) throw std::invalid_argument("circuit and layout qubit counts differ");
    if (!flags.cross_rank_swap && layout.rank_qubits > 0) {
        throw std::invalid_argument("cross-rank swapping disabled but rank qubits > 0");
    }
    for (const Gate &g : raw.gates) {
        check_gate(g, raw.num_qubits);
        if (g.arity() > layout.chunk_qubits) throw std::invalid_argument("gate wider than chunk");
    }

    OptimizedCircuit opt;
    opt.num_qubits = layout.num_qubits;
    opt.layout = layout;
    QubitPermutation perm(layout.num_qubits);
    const int c = layout.chunk_qubits;

    auto emit_swaps = [&](std::vector<Instruction> &&swaps) {
        for (Instruction &inst : swaps) opt.instructions.push_back(std::move(inst));
    };
    auto emit_block = [&](GateBlock &&block) {
        if (flags.fusion) block = do_fusion(block, layout.fusion_qubits);
        opt.instructions.push_back(std::move(block));
    };
    auto chunk_level = [&](std::vector<Gate> &&device_block) {
        if (flags.in_memory_swap) {
            find_gbs(std::move(device_block), c, 2, layout, perm, emit_swaps,
                     [&](std::vector<Gate> &&gates) { emit_block(map_block(gates, perm)); });
            return;
        }
        // Without in-memory swaps, gates reaching above the chunk run alone.
        std::vector<Gate> run;
        for (Gate &g : device_block) {
            bool in_chunk = std::all_of(g.targets.begin(), g.targets.end(), [&](int t) { return perm.physical_of(t) < c; });
            if (in_chunk) {
                run.push_back(std::move(g));
                continue;
            }
            if (!run.empty()) emit_block(map_block(run, perm));
            run.clear();
            emit_block(map_block(std::span<const Gate>(&g, 1), perm));
        }
        if (!run.empty()) emit_block(map_block(run, perm));
    };
    find_gbs(raw.gates, layout.local_qubits(), 1, layout, perm, emit_swaps, chunk_level);
    opt.final_permutation = perm;
    return opt;
}

}  // namespace cachesv
