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

// Partitioned state-vector simulator.
//
// The state is split into 2^R rank partitions of 2^(N-R) amplitudes each.
// Every rank is served by a fixed set of worker threads that live for the
// whole run and meet at a barrier after each instruction. Gate blocks run
// chunk by chunk in a private scratch buffer; in-memory swaps permute index
// bits inside a partition; cross-rank swaps exchange data through per-rank
// receive buffers.

#pragma once

#include <barrier>
#include <chrono>
#include <cmath>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "cachesv/bits.hpp"
#include "cachesv/circuit.hpp"
#include "cachesv/kernels.hpp"

namespace cachesv {

using StatePartition = std::vector<Amplitude>;

struct SimConfig {
    LayoutParams layout;
    int workers_per_rank = 1;
};

/// Wall-clock seconds spent per instruction class.
struct SimTimings {
    double gate_seconds = 0;
    double ims_seconds = 0;
    double xrs_seconds = 0;
};

struct SimResult {
    std::vector<StatePartition> partitions;
    QubitPermutation permutation;
    SimTimings timings;
};

inline std::size_t state_bytes(int num_qubits) {
    return (std::size_t{1} << num_qubits) * sizeof(Amplitude);
}

/// |0...0> split over the rank partitions.
inline std::vector<StatePartition> init_state(const LayoutParams &layout) {
    layout.validate();
    std::vector<StatePartition> parts;
    try {
        parts.resize(layout.rank_count());
        for (StatePartition &p : parts) p.assign(layout.local_size(), Amplitude{0, 0});
    } catch (const std::bad_alloc &) {
        throw std::runtime_error("out of memory: state vector needs " + std::to_string(state_bytes(layout.num_qubits)) +
                                 " bytes");
    }
    parts[0][0] = 1;
    return parts;
}

inline double state_norm(const std::vector<StatePartition> &parts) {
    double s = 0;
    for (const StatePartition &p : parts) {
        for (const Amplitude &a : p) s += std::norm(a);
    }
    return std::sqrt(s);
}

namespace detail {

inline std::pair<Index, Index> split_range(Index total, int parts, int which) {
    Index base = total / parts, extra = total % parts;
    Index begin = which * base + std::min<Index>(which, extra);
    Index end = begin + base + (static_cast<Index>(which) < extra ? 1 : 0);
    return {begin, end};
}

}  // namespace detail

/// Runs a gate block on chunks [chunk_begin, chunk_end) of one partition.
///
/// Blocks whose targets all lie below C are copied chunk by chunk into
/// `scratch`; a block reaching above C (single-gate blocks when in-memory
/// swapping is off) is applied over the partition directly.
inline void apply_gate_block(StatePartition &part, const std::vector<GateKernel> &kernels, int chunk_qubits,
                             Index chunk_begin, Index chunk_end, std::vector<Amplitude> &scratch) {
    const Index chunk = Index{1} << chunk_qubits;
    for (Index c = chunk_begin; c < chunk_end; c++) {
        Amplitude *src = part.data() + c * chunk;
        std::copy(src, src + chunk, scratch.begin());
        for (const GateKernel &k : kernels) k.apply(scratch.data(), chunk_qubits);
        std::copy(scratch.begin(), scratch.end(), src);
    }
}

inline void apply_gate_block(StatePartition &part, const GateBlock &block, int chunk_qubits) {
    std::vector<GateKernel> kernels;
    for (const Gate &g : block.gates) {
        kernels.emplace_back(g);
        if (kernels.back().max_target() >= chunk_qubits) throw std::invalid_argument("block target outside chunk");
    }
    std::vector<Amplitude> scratch(std::size_t{1} << chunk_qubits);
    apply_gate_block(part, kernels, chunk_qubits, 0, part.size() >> chunk_qubits, scratch);
}

/// Exchanges local index bits A[k] <-> B[k] (sorted pairing) in one partition.
inline void in_memory_swap(StatePartition &part, int local_qubits, std::span<const int> a, std::span<const int> b,
                           int cache_line_qubits) {
    SwapPlan plan(local_qubits, a, b, cache_line_qubits);
    plan.for_each_pair(0, plan.size(), [&](Index m, Index n) { std::swap(part[m], part[n]); });
}

namespace detail {

/// Cross-rank swap geometry shared by all ranks.
struct ExchangePlan {
    int s = 0;
    Index segment = 0;  // 2^(N-R-S) amplitudes
    Index window = 0;   // 2^(B-S) amplitudes per peer and round
    std::vector<int> rank_bits;

    ExchangePlan(const LayoutParams &layout, const CrossRankSwap &xrs) {
        const int local = layout.local_qubits();
        s = static_cast<int>(xrs.local_set.size());
        if (xrs.rank_set.size() != xrs.local_set.size()) throw std::invalid_argument("cross-rank swap sets differ in size");
        for (int k = 0; k < s; k++) {
            if (xrs.local_set[k] != local - s + k) throw std::invalid_argument("cross-rank swap must use the top local bits");
            int r = xrs.rank_set[k] - local;
            if (r < 0 || r >= layout.rank_qubits) throw std::invalid_argument("cross-rank swap rank bit out of range");
            rank_bits.push_back(r);
        }
        if (layout.buffer_qubits < s) throw std::invalid_argument("exchange buffer smaller than the swapped segment count");
        segment = Index{1} << (local - s);
        window = Index{1} << (std::min(layout.buffer_qubits, local) - s);
    }

    /// The swapped rank bits of `rank`, compressed.
    Index slot_of(Index rank) const {
        Index p = 0;
        for (int k = 0; k < s; k++) p |= ((rank >> rank_bits[k]) & 1) << k;
        return p;
    }

    /// The group member whose swapped rank bits equal j.
    Index peer(Index rank, Index j) const {
        for (int k = 0; k < s; k++) {
            Index bit = Index{1} << rank_bits[k];
            rank = ((j >> k) & 1) ? (rank | bit) : (rank & ~bit);
        }
        return rank;
    }
};

}  // namespace detail

/// Cross-rank swap over all partitions, single-threaded.
inline void cross_rank_swap(std::vector<StatePartition> &parts, const CrossRankSwap &xrs, const LayoutParams &layout) {
    detail::ExchangePlan plan(layout, xrs);
    const Index slots = Index{1} << plan.s;
    std::vector<std::vector<Amplitude>> buffers(parts.size(), std::vector<Amplitude>(slots * plan.window));
    for (Index off = 0; off < plan.segment; off += plan.window) {
        for (Index r = 0; r < parts.size(); r++) {
            for (Index j = 0; j < slots; j++) {
                const Amplitude *src = parts[r].data() + j * plan.segment + off;
                std::copy(src, src + plan.window, buffers[plan.peer(r, j)].begin() + plan.slot_of(r) * plan.window);
            }
        }
        for (Index r = 0; r < parts.size(); r++) {
            for (Index j = 0; j < slots; j++) {
                auto src = buffers[r].begin() + j * plan.window;
                std::copy(src, src + plan.window, parts[r].begin() + j * plan.segment + off);
            }
        }
    }
}

/// Executes an optimized circuit from |0...0>.
inline SimResult simulate(const OptimizedCircuit &opt, const SimConfig &cfg) {
    const LayoutParams &layout = cfg.layout;
    layout.validate();
    if (opt.num_qubits != layout.num_qubits) throw std::invalid_argument("circuit and config qubit counts differ");
    if (cfg.workers_per_rank < 1) throw std::invalid_argument("worker count must be >= 1");
    const int local = layout.local_qubits();
    const int c = layout.chunk_qubits;

    // Prepare every instruction up front so worker threads never throw.
    struct Step {
        int kind = 0;  // 0 gate block, 1 in-memory swap, 2 cross-rank swap
        std::vector<GateKernel> kernels;
        bool in_chunk = true;
        std::optional<SwapPlan> swap;
        std::optional<detail::ExchangePlan> exchange;
    };
    std::vector<Step> steps;
    Index max_window = 0;
    int max_s = 0;
    for (const Instruction &inst : opt.instructions) {
        Step st;
        if (const auto *blk = std::get_if<GateBlock>(&inst)) {
            for (const Gate &g : blk->gates) {
                check_gate(g, layout.num_qubits);
                st.kernels.emplace_back(g);
                int top = st.kernels.back().max_target();
                if (top >= local) throw std::invalid_argument("gate block target on a rank qubit");
                if (top >= c) st.in_chunk = false;
            }
        } else if (const auto *ims = std::get_if<InMemSwap>(&inst)) {
            st.kind = 1;
            for (int p : ims->out_set) {
                if (p >= local) throw std::invalid_argument("in-memory swap position on a rank qubit");
            }
            for (int p : ims->in_set) {
                if (p >= local) throw std::invalid_argument("in-memory swap position on a rank qubit");
            }
            st.swap.emplace(local, ims->out_set, ims->in_set, layout.cache_line_qubits);
        } else {
            st.kind = 2;
            st.exchange.emplace(layout, std::get<CrossRankSwap>(inst));
            max_window = std::max(max_window, st.exchange->window);
            max_s = std::max(max_s, st.exchange->s);
        }
        steps.push_back(std::move(st));
    }

    SimResult result;
    result.partitions = init_state(layout);
    result.permutation = replay_permutation(layout.num_qubits, opt.instructions);
    std::vector<std::vector<Amplitude>> buffers;
    if (max_s > 0) {
        buffers.assign(result.partitions.size(), std::vector<Amplitude>((Index{1} << max_s) * max_window));
    }

    const int ranks = static_cast<int>(layout.rank_count());
    const int workers = cfg.workers_per_rank;
    const int total = ranks * workers;
    std::barrier sync(total);
    using clock = std::chrono::steady_clock;
    auto &parts = result.partitions;

    auto run = [&](int rank, int worker) {
        const bool timer = rank == 0 && worker == 0;
        std::vector<Amplitude> scratch(std::size_t{1} << c);
        StatePartition &part = parts[rank];
        for (const Step &st : steps) {
            auto t0 = clock::now();
            if (st.kind == 0) {
                if (st.in_chunk) {
                    auto [b, e] = detail::split_range(part.size() >> c, workers, worker);
                    apply_gate_block(part, st.kernels, c, b, e, scratch);
                } else {
                    for (const GateKernel &k : st.kernels) {
                        auto [b, e] = detail::split_range(k.item_count(local), workers, worker);
                        k.apply(part.data(), b, e);
                        sync.arrive_and_wait();
                    }
                }
            } else if (st.kind == 1) {
                Index groups = st.swap->size() / st.swap->group_size();
                auto [b, e] = detail::split_range(groups, workers, worker);
                Index g = st.swap->group_size();
                st.swap->for_each_pair(b * g, e * g, [&](Index m, Index n) { std::swap(part[m], part[n]); });
            } else {
                const detail::ExchangePlan &x = *st.exchange;
                const Index slots = Index{1} << x.s;
                const Index my_slot = x.slot_of(rank);
                auto [jb, je] = detail::split_range(slots, workers, worker);
                for (Index off = 0; off < x.segment; off += x.window) {
                    for (Index j = jb; j < je; j++) {
                        const Amplitude *src = part.data() + j * x.segment + off;
                        std::copy(src, src + x.window, buffers[x.peer(rank, j)].begin() + my_slot * x.window);
                    }
                    sync.arrive_and_wait();
                    for (Index j = jb; j < je; j++) {
                        auto src = buffers[rank].begin() + j * x.window;
                        std::copy(src, src + x.window, part.begin() + j * x.segment + off);
                    }
                    sync.arrive_and_wait();
                }
            }
            sync.arrive_and_wait();
            if (timer) {
                double dt = std::chrono::duration<double>(clock::now() - t0).count();
                (st.kind == 0 ? result.timings.gate_seconds
                              : st.kind == 1 ? result.timings.ims_seconds : result.timings.xrs_seconds) += dt;
            }
        }
    };

    if (total == 1) {
        run(0, 0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(total);
        for (int r = 0; r < ranks; r++) {
            for (int w = 0; w < workers; w++) pool.emplace_back(run, r, w);
        }
    }
    return result;
}

/// Amplitude of a logical basis state after a run.
inline Amplitude get_amplitude(const std::vector<StatePartition> &parts, const LayoutParams &layout, Index logical,
                               const QubitPermutation &perm) {
    if (layout.num_qubits < 64 && logical >> layout.num_qubits) throw std::out_of_range("basis index out of range");
    Index phys = perm.logical_to_physical_index(logical);
    return parts.at(phys >> layout.local_qubits())[phys & (layout.local_size() - 1)];
}

/// The full state in logical qubit order.
inline std::vector<Amplitude> gather_logical_state(const SimResult &r, const LayoutParams &layout) {
    std::vector<Amplitude> out(std::size_t{1} << layout.num_qubits);
    const Index local = layout.local_size();
    for (Index rank = 0; rank < r.partitions.size(); rank++) {
        for (Index off = 0; off < local; off++) {
            out[r.permutation.physical_to_logical_index(rank * local + off)] = r.partitions[rank][off];
        }
    }
    return out;
}

/// Gate-by-gate reference mode: every gate sweeps the whole state, no chunking.
struct BaselineResult {
    std::vector<Amplitude> state;
    double seconds = 0;
};

inline BaselineResult simulate_gate_by_gate(const RawCircuit &raw, int workers = 1) {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    const int n = raw.num_qubits;
    std::vector<GateKernel> kernels;
    for (const Gate &g : raw.gates) {
        check_gate(g, n);
        kernels.emplace_back(g);
    }
    LayoutParams flat{n, 0, n, 0, 0, 0};
    BaselineResult out;
    out.state = std::move(init_state(flat)[0]);
    auto t0 = std::chrono::steady_clock::now();
    if (workers == 1) {
        for (const GateKernel &k : kernels) k.apply(out.state.data(), n);
    } else {
        std::barrier sync(workers);
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; w++) {
            pool.emplace_back([&, w] {
                for (const GateKernel &k : kernels) {
                    auto [b, e] = detail::split_range(k.item_count(n), workers, w);
                    k.apply(out.state.data(), b, e);
                    sync.arrive_and_wait();
                }
            });
        }
        pool.clear();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace cachesv
