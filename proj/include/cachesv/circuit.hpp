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

#pragma once

#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cachesv/gate.hpp"

namespace cachesv {

/// Partitioning constants of a simulation.
///
/// Amplitude index bits, LSB first: the lowest `cache_line_qubits` bits are the
/// offset inside a cache line, the lowest `chunk_qubits` bits the offset inside
/// a chunk, and the top `rank_qubits` bits select the owning rank.
struct LayoutParams {
    int num_qubits = 0;
    int rank_qubits = 0;
    int chunk_qubits = 0;
    int cache_line_qubits = 2;
    int fusion_qubits = 0;
    int buffer_qubits = 0;

    int local_qubits() const {
        return num_qubits - rank_qubits;
    }
    std::size_t rank_count() const {
        return std::size_t{1} << rank_qubits;
    }
    std::size_t local_size() const {
        return std::size_t{1} << local_qubits();
    }

    void validate() const {
        auto fail = [](const std::string &what) {
            throw std::invalid_argument("invalid layout: " + what);
        };
        if (num_qubits < 1 || num_qubits > kMaxQubits - 1) fail("qubit count must be in [1, 63]");
        if (rank_qubits < 0 || rank_qubits > num_qubits) fail("rank qubits must be in [0, N]");
        if (chunk_qubits < 1 || chunk_qubits > local_qubits()) fail("chunk qubits must be in [1, N - R]");
        if (cache_line_qubits < 0 || cache_line_qubits > chunk_qubits) fail("cache-line qubits must be <= chunk qubits");
        if (fusion_qubits < 0 || fusion_qubits > chunk_qubits) fail("fusion qubits must be <= chunk qubits");
        if (buffer_qubits < 0 || buffer_qubits > local_qubits()) fail("buffer qubits must be <= N - R");
    }

    bool operator==(const LayoutParams &) const = default;
};

/// Physical bit position <-> logical qubit mapping.
class QubitPermutation {
   public:
    QubitPermutation() = default;
    explicit QubitPermutation(int num_qubits) : phys_to_log_(num_qubits), log_to_phys_(num_qubits) {
        std::iota(phys_to_log_.begin(), phys_to_log_.end(), 0);
        std::iota(log_to_phys_.begin(), log_to_phys_.end(), 0);
    }

    int size() const {
        return static_cast<int>(phys_to_log_.size());
    }
    int logical_at(int phys) const {
        return phys_to_log_.at(phys);
    }
    int physical_of(int logical) const {
        return log_to_phys_.at(logical);
    }
    const std::vector<int> &phys_to_log() const {
        return phys_to_log_;
    }

    /// Exchanges positions a[k] and b[k] for every k.
    void swap_positions(std::span<const int> a, std::span<const int> b) {
        if (a.size() != b.size()) {
            throw std::invalid_argument("swap sets differ in size");
        }
        for (std::size_t k = 0; k < a.size(); k++) {
            std::swap(phys_to_log_.at(a[k]), phys_to_log_.at(b[k]));
            log_to_phys_[phys_to_log_[a[k]]] = a[k];
            log_to_phys_[phys_to_log_[b[k]]] = b[k];
        }
    }

    bool is_identity() const {
        for (int p = 0; p < size(); p++) {
            if (phys_to_log_[p] != p) return false;
        }
        return true;
    }

    /// Maps a physical amplitude index to the logical basis index it stores.
    std::uint64_t physical_to_logical_index(std::uint64_t phys_index) const {
        std::uint64_t out = 0;
        for (int p = 0; p < size(); p++) {
            out |= ((phys_index >> p) & 1) << phys_to_log_[p];
        }
        return out;
    }

    std::uint64_t logical_to_physical_index(std::uint64_t log_index) const {
        std::uint64_t out = 0;
        for (int q = 0; q < size(); q++) {
            out |= ((log_index >> q) & 1) << log_to_phys_[q];
        }
        return out;
    }

    bool operator==(const QubitPermutation &) const = default;

   private:
    std::vector<int> phys_to_log_;
    std::vector<int> log_to_phys_;
};

struct RawCircuit {
    int num_qubits = 0;
    std::vector<Gate> gates;

    bool operator==(const RawCircuit &) const = default;
};

/// Gates executed together inside one chunk.
struct GateBlock {
    std::vector<Gate> gates;
    bool operator==(const GateBlock &) const = default;
};

/// Exchanges physical local bits out_set[k] <-> in_set[k] inside every rank.
struct InMemSwap {
    std::vector<int> out_set;
    std::vector<int> in_set;
    bool operator==(const InMemSwap &) const = default;
};

/// Exchanges the top local bits local_set[k] with rank bits rank_set[k].
struct CrossRankSwap {
    std::vector<int> local_set;
    std::vector<int> rank_set;
    bool operator==(const CrossRankSwap &) const = default;
};

using Instruction = std::variant<GateBlock, InMemSwap, CrossRankSwap>;

struct OptimizedCircuit {
    int num_qubits = 0;
    LayoutParams layout;
    std::vector<Instruction> instructions;
    QubitPermutation final_permutation;

    bool operator==(const OptimizedCircuit &) const = default;
};

/// Replays every swap instruction from the identity permutation.
inline QubitPermutation replay_permutation(int num_qubits, std::span<const Instruction> instructions) {
    QubitPermutation perm(num_qubits);
    for (const Instruction &inst : instructions) {
        if (const auto *ims = std::get_if<InMemSwap>(&inst)) {
            perm.swap_positions(ims->out_set, ims->in_set);
        } else if (const auto *xrs = std::get_if<CrossRankSwap>(&inst)) {
            perm.swap_positions(xrs->local_set, xrs->rank_set);
        }
    }
    return perm;
}

inline std::size_t count_gate_blocks(const OptimizedCircuit &c) {
    std::size_t n = 0;
    for (const Instruction &inst : c.instructions) {
        n += std::holds_alternative<GateBlock>(inst);
    }
    return n;
}

}  // namespace cachesv
