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

// Index bit permutations used by the swap kernels.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cachesv {

using Index = std::uint64_t;

/// Inserts a zero bit at position `pos`, shifting the higher bits up.
constexpr Index insert_zero_bit(Index k, int pos) {
    Index low = k & ((Index{1} << pos) - 1);
    return ((k >> pos) << (pos + 1)) | low;
}

/// Sorted (A[k], B[k]) pairs after checking the sets are equal-sized and disjoint.
inline std::vector<std::pair<int, int>> swap_pairs(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw std::invalid_argument("bit swap sets differ in size");
    std::vector<int> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::vector<int> all(sa);
    all.insert(all.end(), sb.begin(), sb.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw std::invalid_argument("bit swap sets overlap");
    }
    for (int p : all) {
        if (p < 0 || p >= 64) throw std::invalid_argument("bit position out of range");
    }
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t k = 0; k < sa.size(); k++) pairs.emplace_back(sa[k], sb[k]);
    return pairs;
}

/// Exchanges bit sorted(A)[k] with bit sorted(B)[k] of i, for every k.
inline Index bitswap(Index i, std::span<const int> a, std::span<const int> b) {
    for (auto [x, y] : swap_pairs(a, b)) {
        Index d = ((i >> x) ^ (i >> y)) & 1;
        i ^= (d << x) | (d << y);
    }
    return i;
}

/// A permutation of index bit positions, applied with byte lookup tables.
class BitPermutation {
   public:
    BitPermutation() = default;

    /// dest[j] is the position that source bit j moves to.
    explicit BitPermutation(std::span<const int> dest) : width_(static_cast<int>(dest.size())) {
        for (int byte = 0; byte * 8 < width_; byte++) {
            std::array<Index, 256> &table = tables_.emplace_back();
            for (int v = 0; v < 256; v++) {
                Index out = 0;
                for (int bit = 0; bit < 8 && byte * 8 + bit < width_; bit++) {
                    if (v >> bit & 1) out |= Index{1} << dest[byte * 8 + bit];
                }
                table[v] = out;
            }
        }
    }

    Index operator()(Index x) const {
        Index out = 0;
        for (std::size_t byte = 0; byte < tables_.size(); byte++) {
            out |= tables_[byte][(x >> (8 * byte)) & 0xFF];
        }
        return out;
    }

    int width() const {
        return width_;
    }

   private:
    int width_ = 0;
    std::vector<std::array<Index, 256>> tables_;
};

/// bitswap over `width` bits as a table-driven permutation.
inline BitPermutation bitswap_permutation(int width, std::span<const int> a, std::span<const int> b) {
    std::vector<int> dest(width);
    for (int j = 0; j < width; j++) dest[j] = j;
    for (auto [x, y] : swap_pairs(a, b)) {
        if (x >= width || y >= width) throw std::invalid_argument("bit position out of range");
        std::swap(dest[x], dest[y]);
    }
    return BitPermutation(dest);
}

/// Destination of each thread-index bit under bitshift.
///
/// The low `cl` bits stay in place. The next k bits go to the upper members
/// of the k pairs that straddle the cache-line boundary, ascending. The
/// remaining bits fill every other position in ascending order.
inline std::vector<int> bitshift_positions(int width, std::span<const int> a, std::span<const int> b, int cl) {
    if (cl < 0 || cl > width) throw std::invalid_argument("cache-line bits out of range");
    std::vector<bool> used(width, false);
    std::vector<int> dest;
    for (int j = 0; j < cl; j++) {
        dest.push_back(j);
        used[j] = true;
    }
    std::vector<int> partners;
    for (auto [x, y] : swap_pairs(a, b)) {
        if (x >= width || y >= width) throw std::invalid_argument("bit position out of range");
        if ((x < cl) != (y < cl)) partners.push_back(std::max(x, y));
    }
    std::sort(partners.begin(), partners.end());
    for (int p : partners) {
        dest.push_back(p);
        used[p] = true;
    }
    for (int p = 0; p < width; p++) {
        if (!used[p]) dest.push_back(p);
    }
    return dest;
}

inline Index bitshift(Index t, int width, std::span<const int> a, std::span<const int> b, int cl) {
    std::vector<int> dest = bitshift_positions(width, a, b, cl);
    Index out = 0;
    for (int j = 0; j < width; j++) out |= ((t >> j) & 1) << dest[j];
    return out;
}

/// Prepared in-memory swap: thread index -> (m, n) pairs over a 2^width array.
class SwapPlan {
   public:
    SwapPlan(int width, std::span<const int> a, std::span<const int> b, int cl)
        : width_(width), swap_(bitswap_permutation(width, a, b)) {
        cl = std::min(cl, width);
        std::vector<int> dest = bitshift_positions(width, a, b, cl);
        shift_ = BitPermutation(dest);
        // The cache-line bits and the straddling partners form the window one
        // thread group covers; the remaining bits order pairs across groups.
        group_bits_ = cl;
        for (auto [x, y] : swap_pairs(a, b)) {
            if ((x < cl) != (y < cl)) group_bits_++;
        }
        Index window = 0;
        for (int j = 0; j < group_bits_; j++) window |= Index{1} << dest[j];
        Index all = width == 64 ? ~Index{0} : (Index{1} << width) - 1;
        high_mask_ = all & ~window;
    }

    Index size() const {
        return Index{1} << width_;
    }

    /// Number of consecutive thread indices that share all bits outside the window.
    Index group_size() const {
        return Index{1} << group_bits_;
    }

    Index shift(Index t) const {
        return shift_(t);
    }
    Index partner(Index m) const {
        return swap_(m);
    }

    /// Whether the thread producing m performs the exchange of m with n = partner(m).
    bool owns(Index m, Index n) const {
        Index hm = m & high_mask_, hn = n & high_mask_;
        return hm < hn || (hm == hn && m < n);
    }

    /// Calls visit(m, n) for every pair owned by thread indices in [begin, end).
    template <typename Visit>
    void for_each_pair(Index begin, Index end, Visit &&visit) const {
        for (Index t = begin; t < end; t++) {
            Index m = shift_(t);
            Index n = swap_(m);
            if (owns(m, n)) visit(m, n);
        }
    }

   private:
    int width_;
    BitPermutation swap_;
    BitPermutation shift_;
    Index high_mask_ = 0;
    int group_bits_ = 0;
};

}  // namespace cachesv
