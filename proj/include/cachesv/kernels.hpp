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

// Strided per-kind gate kernels over a contiguous amplitude array.

#pragma once

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cachesv/bits.hpp"
#include "cachesv/gate.hpp"

namespace cachesv {

/// Complex product without the C99 infinity recovery of operator*.
inline Amplitude cmul(Amplitude x, Amplitude y) {
    return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

/// A gate with its constants precomputed for repeated application.
///
/// The work of one application is split into items: item k addresses the
/// 2^arity amplitudes whose indices agree with k outside the target bits.
class GateKernel {
   public:
    explicit GateKernel(const Gate &g) : kind_(g.kind), targets_(g.targets) {
        sorted_ = targets_;
        std::sort(sorted_.begin(), sorted_.end());
        for (int t : targets_) mask_ |= Index{1} << t;
        lo_ = sorted_.empty() ? 0 : sorted_.front();
        hi_ = sorted_.empty() ? 0 : sorted_.back();
        switch (kind_) {
            case GateKind::U:
            case GateKind::RX:
            case GateKind::RY: {
                GateMatrix m = gate_matrix(g);
                m_ = {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
                break;
            }
            case GateKind::RZ:
            case GateKind::RZZ:
            case GateKind::CP:
            case GateKind::D:
                diag_ = gate_diagonal(g);
                break;
            default:
                break;
        }
        if (kind_ == GateKind::D) {
            // Entry index of each combination of target bits, in ascending-index order.
            const int k = static_cast<int>(targets_.size());
            order_.resize(std::size_t{1} << k);
            for (std::size_t combo = 0; combo < order_.size(); combo++) {
                std::size_t entry = 0;
                for (int j = 0; j < k; j++) {
                    int bit = static_cast<int>(std::find(sorted_.begin(), sorted_.end(), targets_[j]) - sorted_.begin());
                    entry = (entry << 1) | ((combo >> bit) & 1);
                }
                order_[combo] = entry;
            }
        }
    }

    int max_target() const {
        return sorted_.empty() ? -1 : sorted_.back();
    }

    Index item_count(int num_bits) const {
        return Index{1} << (num_bits - static_cast<int>(sorted_.size()));
    }

    /// Applies the gate to items [begin, end) of a 2^num_bits array.
    void apply(Amplitude *a, Index begin, Index end) const {
        switch (kind_) {
            case GateKind::H: {
                constexpr double r = std::numbers::sqrt2 / 2;
                const Index s = stride(0);
                for_items(begin, end, [&](Index i) {
                    Amplitude x = a[i], y = a[i | s];
                    a[i] = (x + y) * r;
                    a[i | s] = (x - y) * r;
                });
                return;
            }
            case GateKind::X: {
                const Index s = stride(0);
                for_items(begin, end, [&](Index i) { std::swap(a[i], a[i | s]); });
                return;
            }
            case GateKind::U:
            case GateKind::RX:
            case GateKind::RY: {
                const Index s = stride(0);
                const auto m = m_;
                for_items(begin, end, [&](Index i) {
                    Amplitude x = a[i], y = a[i | s];
                    a[i] = cmul(m[0], x) + cmul(m[1], y);
                    a[i | s] = cmul(m[2], x) + cmul(m[3], y);
                });
                return;
            }
            case GateKind::RZ: {
                const Index s = stride(0);
                const Amplitude d0 = diag_[0], d1 = diag_[1];
                for_items(begin, end, [&](Index i) {
                    a[i] = cmul(a[i], d0);
                    a[i | s] = cmul(a[i | s], d1);
                });
                return;
            }
            case GateKind::CX: {
                const Index c = stride(0), t = stride(1);
                for_items(begin, end, [&](Index i) { std::swap(a[i | c], a[i | c | t]); });
                return;
            }
            case GateKind::SWAP: {
                const Index p = stride(0), q = stride(1);
                for_items(begin, end, [&](Index i) { std::swap(a[i | p], a[i | q]); });
                return;
            }
            case GateKind::CP: {
                const Amplitude d = diag_[3];
                const Index m = mask_;
                for_items(begin, end, [&](Index i) { a[i | m] = cmul(a[i | m], d); });
                return;
            }
            case GateKind::RZZ: {
                const Index p = stride(0), q = stride(1);
                const Index m = mask_;
                const Amplitude d0 = diag_[0], d1 = diag_[1];
                for_items(begin, end, [&](Index i) {
                    a[i] = cmul(a[i], d0);
                    a[i | p] = cmul(a[i | p], d1);
                    a[i | q] = cmul(a[i | q], d1);
                    a[i | m] = cmul(a[i | m], d0);
                });
                return;
            }
            case GateKind::D: {
                for_items(begin, end, [&](Index i) {
                    for (std::size_t combo = 0; combo < order_.size(); combo++) {
                        Index j = i | scatter(combo);
                        a[j] = cmul(a[j], diag_[order_[combo]]);
                    }
                });
                return;
            }
        }
    }

    void apply(Amplitude *a, int num_bits) const {
        apply(a, 0, item_count(num_bits));
    }

   private:
    Index stride(int j) const {
        return Index{1} << targets_[j];
    }

    /// Calls f with the base index of every item in [begin, end).
    template <typename F>
    void for_items(Index begin, Index end, F &&f) const {
        if (begin >= end) return;
        const Index m = mask_;
        Index i = base(begin);
        for (Index k = begin; k < end; k++) {
            f(i);
            i = ((i | m) + 1) & ~m;
        }
    }

    Index base(Index k) const {
        switch (sorted_.size()) {
            case 1:
                return insert_zero_bit(k, lo_);
            case 2:
                return insert_zero_bit(insert_zero_bit(k, lo_), hi_);
            default:
                for (int t : sorted_) k = insert_zero_bit(k, t);
                return k;
        }
    }

    Index scatter(std::size_t combo) const {
        Index out = 0;
        for (std::size_t j = 0; j < sorted_.size(); j++) out |= Index((combo >> j) & 1) << sorted_[j];
        return out;
    }

    GateKind kind_;
    std::vector<int> targets_;
    std::vector<int> sorted_;
    Index mask_ = 0;
    int lo_ = 0;
    int hi_ = 0;
    std::array<Amplitude, 4> m_{};
    std::vector<Amplitude> diag_;
    std::vector<std::size_t> order_;
};

}  // namespace cachesv
