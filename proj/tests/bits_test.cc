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

#include "cachesv/bits.hpp"

#include <random>
#include <set>

#include "gtest/gtest.h"

using namespace cachesv;

namespace {

struct SwapCase {
    int width;
    std::vector<int> a, b;
    int cl;
};

SwapCase random_case(std::mt19937_64 &rng, int width) {
    std::vector<int> pos(width);
    for (int i = 0; i < width; i++) pos[i] = i;
    std::shuffle(pos.begin(), pos.end(), rng);
    int m = std::uniform_int_distribution<int>(0, width / 2)(rng);
    SwapCase c{width, {}, {}, std::uniform_int_distribution<int>(0, std::min(width, 6))(rng)};
    c.a.assign(pos.begin(), pos.begin() + m);
    c.b.assign(pos.begin() + m, pos.begin() + 2 * m);
    return c;
}

}  // namespace

TEST(bitswap, examples) {
    std::vector<int> a{0}, b{4};
    ASSERT_EQ(bitswap(0b10000, a, b), 0b00001u);
    ASSERT_EQ(bitswap(0b10001, a, b), 0b10001u);
    ASSERT_EQ(bitswap(12345, {}, {}), 12345u);
    // Pairing is by sorted position.
    std::vector<int> x{3, 1}, y{6, 5};
    ASSERT_EQ(bitswap(0b0000010, x, y), 0b0100000u);
    ASSERT_THROW(bitswap(0, std::vector<int>{1, 2}, std::vector<int>{2, 3}), std::invalid_argument);
    ASSERT_THROW(bitswap(0, std::vector<int>{1}, std::vector<int>{2, 3}), std::invalid_argument);
}

TEST(bitswap, involution) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10000; trial++) {
        SwapCase c = random_case(rng, 20);
        Index i = rng() & ((Index{1} << 20) - 1);
        ASSERT_EQ(bitswap(bitswap(i, c.a, c.b), c.a, c.b), i);
        ASSERT_EQ(bitswap_permutation(20, c.a, c.b)(i), bitswap(i, c.a, c.b));
    }
}

TEST(bitshift, identity_when_swaps_avoid_the_cache_line) {
    std::vector<int> a{3, 5}, b{4, 7};
    for (Index t = 0; t < 256; t++) ASSERT_EQ(bitshift(t, 8, a, b, 2), t);
}

TEST(bitshift, straddling_partners_take_the_next_thread_bits) {
    // Every pair straddles a 6-bit line; their high members take thread bits 6..10.
    std::vector<int> out{0, 2, 3, 4, 5}, in{6, 7, 9, 10, 11};
    std::vector<int> dest = bitshift_positions(12, out, in, 6);
    ASSERT_EQ((std::vector<int>(dest.begin(), dest.begin() + 6)), (std::vector<int>{0, 1, 2, 3, 4, 5}));
    ASSERT_EQ((std::vector<int>(dest.begin() + 6, dest.begin() + 11)), (std::vector<int>{6, 7, 9, 10, 11}));
    ASSERT_EQ(dest[11], 8);

    // With a 4-bit line only (0,6), (2,7) and (3,9) straddle.
    dest = bitshift_positions(12, out, in, 4);
    ASSERT_EQ((std::vector<int>(dest.begin() + 4, dest.begin() + 7)), (std::vector<int>{6, 7, 9}));
    ASSERT_EQ((std::vector<int>(dest.begin() + 7, dest.end())), (std::vector<int>{4, 5, 8, 10, 11}));
}

TEST(bitshift, bijection_on_12_bits) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; trial++) {
        SwapCase c = random_case(rng, 12);
        std::vector<bool> hit(1 << 12, false);
        for (Index t = 0; t < (1u << 12); t++) {
            Index m = bitshift(t, 12, c.a, c.b, c.cl);
            ASSERT_LT(m, Index{1} << 12);
            ASSERT_FALSE(hit[m]);
            hit[m] = true;
        }
    }
}

TEST(swap_plan, each_pair_exactly_once) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; trial++) {
        SwapCase c = random_case(rng, 10);
        SwapPlan plan(10, c.a, c.b, c.cl);
        std::vector<int> touched(1 << 10, 0);
        plan.for_each_pair(0, plan.size(), [&](Index m, Index n) {
            ASSERT_NE(m, n);
            ASSERT_EQ(bitswap(m, c.a, c.b), n);
            touched[m]++;
            touched[n]++;
        });
        for (Index i = 0; i < plan.size(); i++) {
            ASSERT_EQ(touched[i], bitswap(i, c.a, c.b) == i ? 0 : 1) << i;
        }
    }
}

TEST(swap_plan, cache_line_runs) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; trial++) {
        SwapCase c = random_case(rng, 12);
        SwapPlan plan(12, c.a, c.b, c.cl);
        const Index line = Index{1} << c.cl;
        // 2^CL consecutive threads produce exactly one aligned cache line.
        for (Index t0 = 0; t0 < plan.size(); t0 += line) {
            std::set<Index> offsets;
            for (Index t = t0; t < t0 + line; t++) offsets.insert(plan.shift(t));
            ASSERT_EQ(offsets.size(), line);
            ASSERT_EQ(*offsets.begin() % line, 0u);
            ASSERT_EQ(*offsets.rbegin() - *offsets.begin(), line - 1);
        }
        // A thread group's partners also form whole aligned lines.
        for (Index g0 = 0; g0 < plan.size(); g0 += plan.group_size()) {
            std::set<Index> partners;
            for (Index t = g0; t < g0 + plan.group_size(); t++) partners.insert(plan.partner(plan.shift(t)));
            for (Index p : partners) {
                for (Index k = 0; k < line; k++) ASSERT_TRUE(partners.count(p - p % line + k));
            }
        }
    }
}
