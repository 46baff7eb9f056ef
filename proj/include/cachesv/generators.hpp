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

// Deterministic benchmark circuits: single-gate layers and the circuit
// families QFT, QAOA, BV plus seeded stand-ins for HS, QV, SC and VC.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cachesv/circuit.hpp"

namespace cachesv {

enum class Family { GateLayer, QFT, QAOA, BV, HS, QV, SC, VC };

struct BenchSpec {
    Family family = Family::QFT;
    int num_qubits = 0;
    std::uint64_t seed = 0;
    GateKind layer_kind = GateKind::H;  // GateLayer only
    int qaoa_levels = 5;                // QAOA only
    std::string secret;                 // BV only; empty means all ones
};

namespace detail {

/// Seeded source of angles in (0, 2*pi) and small integers, identical on every platform.
class SeededRandom {
   public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {
    }

    double angle() {
        double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
        return 2 * std::numbers::pi * u;
    }

    std::size_t below(std::size_t bound) {
        return static_cast<std::size_t>(engine_() % bound);
    }

    template <typename T>
    void shuffle(std::vector<T> &items) {
        for (std::size_t i = items.size(); i > 1; i--) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

   private:
    std::mt19937_64 engine_;
};

class CircuitBuilder {
   public:
    explicit CircuitBuilder(int n) {
        circuit_.num_qubits = n;
    }
    void add(GateKind kind, std::vector<int> targets, std::vector<double> angles = {}) {
        std::uint64_t id = circuit_.gates.size();
        circuit_.gates.push_back(make_gate(kind, std::move(targets), id, std::move(angles)));
    }
    RawCircuit finish() && {
        return std::move(circuit_);
    }

   private:
    RawCircuit circuit_;
};

inline void require_qubits(int n, int minimum, const char *what) {
    if (n < minimum || n > kMaxQubits - 1) {
        throw std::invalid_argument(std::string(what) + ": qubit count " + std::to_string(n) + " out of range");
    }
}

inline std::vector<double> random_angles(GateKind kind, SeededRandom &rng) {
    std::vector<double> a;
    for (int k = 0; k < kind_angle_count(kind); k++) a.push_back(rng.angle());
    return a;
}

}  // namespace detail

/// One gate of `kind` per qubit; two-qubit kinds pair q with (q + 1) mod n.
inline RawCircuit gen_gate_layer(GateKind kind, int n, std::uint64_t seed) {
    if (kind == GateKind::D) throw std::invalid_argument("gate layer: fused diagonals are not a benchmark kind");
    if (n < kind_arity(kind)) throw std::invalid_argument("gate layer: fewer qubits than the gate arity");
    detail::require_qubits(n, 1, "gate layer");
    detail::SeededRandom rng(seed);
    detail::CircuitBuilder b(n);
    for (int q = 0; q < n; q++) {
        std::vector<int> targets{q};
        if (kind_arity(kind) == 2) targets.push_back((q + 1) % n);
        b.add(kind, std::move(targets), detail::random_angles(kind, rng));
    }
    return std::move(b).finish();
}

/// Quantum Fourier transform without the final swap network: n(n+1)/2 gates.
inline RawCircuit gen_qft(int n) {
    detail::require_qubits(n, 1, "qft");
    detail::CircuitBuilder b(n);
    for (int q = n - 1; q >= 0; q--) {
        b.add(GateKind::H, {q});
        for (int j = q - 1; j >= 0; j--) {
            b.add(GateKind::CP, {j, q}, {std::numbers::pi / std::ldexp(1.0, q - j)});
        }
    }
    return std::move(b).finish();
}

/// MaxCut QAOA on the complete graph: n + p(n(n-1)/2 + n) gates.
inline RawCircuit gen_qaoa(int n, int p, std::uint64_t seed) {
    detail::require_qubits(n, 2, "qaoa");
    if (p < 0) throw std::invalid_argument("qaoa: negative level count");
    detail::SeededRandom rng(seed);
    detail::CircuitBuilder b(n);
    for (int q = 0; q < n; q++) b.add(GateKind::H, {q});
    for (int level = 0; level < p; level++) {
        double gamma = rng.angle();
        double beta = rng.angle();
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) b.add(GateKind::RZZ, {i, j}, {gamma});
        }
        for (int q = 0; q < n; q++) b.add(GateKind::RX, {q}, {beta});
    }
    return std::move(b).finish();
}

/// Bernstein-Vazirani with the ancilla on qubit n-1: 2n + popcount(secret) gates.
///
/// secret[j] is the hidden bit of qubit j. The ancilla is moved to |-> and
/// back with U gates so the output is exactly |secret, 0> up to global phase.
inline RawCircuit gen_bv(int n, std::string_view secret) {
    detail::require_qubits(n, 2, "bv");
    if (secret.size() != static_cast<std::size_t>(n - 1)) {
        throw std::invalid_argument("bv: secret must have n - 1 bits");
    }
    for (char c : secret) {
        if (c != '0' && c != '1') throw std::invalid_argument("bv: secret must be a bit string");
    }
    const int anc = n - 1;
    const double pi = std::numbers::pi;
    detail::CircuitBuilder b(n);
    for (int q = 0; q < anc; q++) b.add(GateKind::H, {q});
    b.add(GateKind::U, {anc}, {pi / 2, pi, 0.0});
    for (int j = 0; j < anc; j++) {
        if (secret[j] == '1') b.add(GateKind::CX, {j, anc});
    }
    for (int q = 0; q < anc; q++) b.add(GateKind::H, {q});
    b.add(GateKind::U, {anc}, {-pi / 2, 0.0, -pi});
    return std::move(b).finish();
}

/// Hidden-shift stand-in: 3n + 4 floor(n/2) gates (153 at n = 31).
inline RawCircuit gen_hidden_shift(int n, std::uint64_t seed) {
    detail::require_qubits(n, 2, "hs");
    detail::SeededRandom rng(seed);
    std::vector<int> order(n);
    for (int q = 0; q < n; q++) order[q] = q;
    rng.shuffle(order);
    std::vector<int> shift(order.begin(), order.begin() + n / 2);
    std::sort(shift.begin(), shift.end());

    detail::CircuitBuilder b(n);
    auto h_layer = [&] {
        for (int q = 0; q < n; q++) b.add(GateKind::H, {q});
    };
    auto bent_layer = [&] {
        for (int i = 0; 2 * i + 1 < n; i++) b.add(GateKind::CP, {2 * i, 2 * i + 1}, {std::numbers::pi});
    };
    h_layer();
    for (int q : shift) b.add(GateKind::X, {q});
    bent_layer();
    for (int q : shift) b.add(GateKind::X, {q});
    h_layer();
    bent_layer();
    h_layer();
    return std::move(b).finish();
}

/// Quantum-volume stand-in: ceil(n/3) layers of floor(n/2) random pairs,
/// each pair U, U, CX (495 gates at n = 31).
inline RawCircuit gen_quantum_volume(int n, std::uint64_t seed) {
    detail::require_qubits(n, 2, "qv");
    detail::SeededRandom rng(seed);
    detail::CircuitBuilder b(n);
    int layers = (n + 2) / 3;
    std::vector<int> order(n);
    for (int layer = 0; layer < layers; layer++) {
        for (int q = 0; q < n; q++) order[q] = q;
        rng.shuffle(order);
        for (int i = 0; 2 * i + 1 < n; i++) {
            int a = order[2 * i], c = order[2 * i + 1];
            b.add(GateKind::U, {a}, detail::random_angles(GateKind::U, rng));
            b.add(GateKind::U, {c}, detail::random_angles(GateKind::U, rng));
            b.add(GateKind::CX, {a, c});
        }
    }
    return std::move(b).finish();
}

/// Supremacy-style stand-in: H layer, 5 cycles of alternating nearest-neighbour
/// CP plus a random rotation on every qubit, H layer (292 gates at n = 31).
inline RawCircuit gen_supremacy(int n, std::uint64_t seed) {
    detail::require_qubits(n, 2, "sc");
    detail::SeededRandom rng(seed);
    detail::CircuitBuilder b(n);
    constexpr GateKind rotations[] = {GateKind::RX, GateKind::RY, GateKind::U};
    for (int q = 0; q < n; q++) b.add(GateKind::H, {q});
    for (int cycle = 0; cycle < 5; cycle++) {
        for (int i = cycle % 2; i + 1 < n; i += 2) b.add(GateKind::CP, {i, i + 1}, {rng.angle()});
        for (int q = 0; q < n; q++) {
            GateKind kind = rotations[rng.below(3)];
            b.add(kind, {q}, detail::random_angles(kind, rng));
        }
    }
    for (int q = 0; q < n; q++) b.add(GateKind::H, {q});
    return std::move(b).finish();
}

/// Variational stand-in: 3 layers of RY, RZ on every qubit and a CX ladder
/// (276 gates at n = 31).
inline RawCircuit gen_variational(int n, std::uint64_t seed) {
    detail::require_qubits(n, 2, "vc");
    detail::SeededRandom rng(seed);
    detail::CircuitBuilder b(n);
    for (int layer = 0; layer < 3; layer++) {
        for (int q = 0; q < n; q++) b.add(GateKind::RY, {q}, {rng.angle()});
        for (int q = 0; q < n; q++) b.add(GateKind::RZ, {q}, {rng.angle()});
        for (int q = 0; q + 1 < n; q++) b.add(GateKind::CX, {q, q + 1});
    }
    return std::move(b).finish();
}

inline RawCircuit gen_misc(Family family, int n, std::uint64_t seed) {
    switch (family) {
        case Family::HS: return gen_hidden_shift(n, seed);
        case Family::QV: return gen_quantum_volume(n, seed);
        case Family::SC: return gen_supremacy(n, seed);
        case Family::VC: return gen_variational(n, seed);
        default: throw std::invalid_argument("gen_misc: not a stand-in family");
    }
}

inline RawCircuit generate(const BenchSpec &spec) {
    switch (spec.family) {
        case Family::GateLayer:
            return gen_gate_layer(spec.layer_kind, spec.num_qubits, spec.seed);
        case Family::QFT:
            return gen_qft(spec.num_qubits);
        case Family::QAOA:
            return gen_qaoa(spec.num_qubits, spec.qaoa_levels, spec.seed);
        case Family::BV: {
            if (!spec.secret.empty()) return gen_bv(spec.num_qubits, spec.secret);
            return gen_bv(spec.num_qubits, std::string(std::max(spec.num_qubits - 1, 0), '1'));
        }
        default:
            return gen_misc(spec.family, spec.num_qubits, spec.seed);
    }
}

/// Parses a family name as used on the command line: qft, qaoa, bv, hs, qv,
/// sc, vc, or a lower-case gate symbol (h, u, cx, ...) for a gate layer.
inline BenchSpec parse_family(std::string_view name) {
    BenchSpec spec;
    if (name == "qft") spec.family = Family::QFT;
    else if (name == "qaoa") spec.family = Family::QAOA;
    else if (name == "bv") spec.family = Family::BV;
    else if (name == "hs") spec.family = Family::HS;
    else if (name == "qv") spec.family = Family::QV;
    else if (name == "sc") spec.family = Family::SC;
    else if (name == "vc") spec.family = Family::VC;
    else {
        std::string upper(name);
        for (char &c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        auto kind = kind_from_symbol(upper);
        if (!kind) throw std::invalid_argument("unknown benchmark family '" + std::string(name) + "'");
        spec.family = Family::GateLayer;
        spec.layer_kind = *kind;
    }
    return spec;
}

inline std::string family_name(const BenchSpec &spec) {
    switch (spec.family) {
        case Family::QFT: return "qft";
        case Family::QAOA: return "qaoa";
        case Family::BV: return "bv";
        case Family::HS: return "hs";
        case Family::QV: return "qv";
        case Family::SC: return "sc";
        case Family::VC: return "vc";
        case Family::GateLayer: {
            std::string s(kind_symbol(spec.layer_kind));
            for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            return s;
        }
    }
    return "?";
}

}  // namespace cachesv
