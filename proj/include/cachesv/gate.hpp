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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cachesv {

using Amplitude = std::complex<double>;

/// Bit set over qubit indices. Circuits are limited to 64 qubits.
using QubitMask = std::uint64_t;

inline constexpr int kMaxQubits = 64;

/// Id carried by fused diagonal gates, which do not correspond to one input gate.
inline constexpr std::uint64_t kFusedId = std::numeric_limits<std::uint64_t>::max();

/// Angle used for parametric gates whose parameters are omitted in a circuit file.
inline constexpr double kDefaultAngle = std::numbers::pi / 4;

enum class GateKind : std::uint8_t { H, X, U, CX, CP, SWAP, RX, RY, RZ, RZZ, D };

/// The fixed gate set of the toolkit, excluding fused diagonals.
inline constexpr GateKind kNativeKinds[] = {
    GateKind::H,  GateKind::X,  GateKind::U,  GateKind::CX, GateKind::CP,
    GateKind::SWAP, GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::RZZ,
};

/// Number of target qubits for a fixed-arity kind; 0 for D (variable).
constexpr int kind_arity(GateKind kind) {
    switch (kind) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::U:
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
            return 1;
        case GateKind::CX:
        case GateKind::CP:
        case GateKind::SWAP:
        case GateKind::RZZ:
            return 2;
        case GateKind::D:
            return 0;
    }
    return 0;
}

/// Number of real angles a kind carries (D carries a complex diagonal instead).
constexpr int kind_angle_count(GateKind kind) {
    switch (kind) {
        case GateKind::U:
            return 3;
        case GateKind::CP:
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::RZZ:
            return 1;
        default:
            return 0;
    }
}

constexpr bool kind_is_diagonal(GateKind kind) {
    return kind == GateKind::RZ || kind == GateKind::RZZ || kind == GateKind::CP || kind == GateKind::D;
}

/// Kinds whose action does not depend on the order of their targets.
constexpr bool kind_is_symmetric(GateKind kind) {
    return kind == GateKind::RZZ || kind == GateKind::CP || kind == GateKind::SWAP || kind == GateKind::D;
}

inline std::string_view kind_symbol(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::U: return "U";
        case GateKind::CX: return "CX";
        case GateKind::CP: return "CP";
        case GateKind::SWAP: return "SWAP";
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::RZZ: return "RZZ";
        case GateKind::D: return "D";
    }
    return "?";
}

/// Parses a native gate symbol. "D<k>" is handled by the circuit readers.
inline std::optional<GateKind> kind_from_symbol(std::string_view symbol) {
    for (GateKind kind : kNativeKinds) {
        if (kind_symbol(kind) == symbol) {
            return kind;
        }
    }
    return std::nullopt;
}

/// One quantum operation.
///
/// Targets are qubit indices (bit positions of the amplitude index). For CX and
/// CP the first target is the control. For a fused diagonal (kind D) the
/// targets are ascending and `diagonal` holds 2^k entries where targets[0]
/// selects the most significant bit of the entry index.
struct Gate {
    GateKind kind = GateKind::H;
    std::vector<int> targets;
    std::uint64_t id = 0;
    std::vector<double> angles;
    std::vector<Amplitude> diagonal;

    int arity() const {
        return static_cast<int>(targets.size());
    }

    QubitMask mask() const {
        QubitMask m = 0;
        for (int t : targets) {
            m |= QubitMask{1} << t;
        }
        return m;
    }

    bool is_diagonal() const {
        return kind_is_diagonal(kind);
    }

    bool operator==(const Gate &other) const = default;
};

inline Gate make_gate(GateKind kind, std::vector<int> targets, std::uint64_t id, std::vector<double> angles = {}) {
    if (angles.empty()) {
        angles.assign(kind_angle_count(kind), kDefaultAngle);
    }
    return Gate{kind, std::move(targets), id, std::move(angles), {}};
}

/// Builds a k-qubit diagonal gate. Targets must be ascending.
inline Gate make_diagonal(std::vector<int> targets, std::vector<Amplitude> entries) {
    return Gate{GateKind::D, std::move(targets), kFusedId, {}, std::move(entries)};
}

/// Row-major dense matrix of dimension 2^arity.
///
/// Basis convention: targets[0] is the most significant bit of the row/column
/// index, so CX(control, target) is the textbook CNOT matrix.
struct GateMatrix {
    int dim = 0;
    std::vector<Amplitude> entries;

    Amplitude operator()(int row, int col) const {
        return entries[static_cast<std::size_t>(row) * dim + col];
    }
    Amplitude &operator()(int row, int col) {
        return entries[static_cast<std::size_t>(row) * dim + col];
    }
};

namespace detail {

inline GateMatrix one_qubit(Amplitude a, Amplitude b, Amplitude c, Amplitude d) {
    return GateMatrix{2, {a, b, c, d}};
}

inline GateMatrix diagonal_matrix(const std::vector<Amplitude> &diag) {
    GateMatrix m{static_cast<int>(diag.size()), {}};
    m.entries.assign(diag.size() * diag.size(), Amplitude{0, 0});
    for (std::size_t k = 0; k < diag.size(); k++) {
        m(static_cast<int>(k), static_cast<int>(k)) = diag[k];
    }
    return m;
}

inline Amplitude expi(double phi) {
    return {std::cos(phi), std::sin(phi)};
}

}  // namespace detail

/// Diagonal entries of a diagonal gate, in the gate_matrix basis order.
inline std::vector<Amplitude> gate_diagonal(const Gate &g) {
    using detail::expi;
    switch (g.kind) {
        case GateKind::RZ: {
            double t = g.angles.at(0) / 2;
            return {expi(-t), expi(t)};
        }
        case GateKind::RZZ: {
            double t = g.angles.at(0) / 2;
            return {expi(-t), expi(t), expi(t), expi(-t)};
        }
        case GateKind::CP:
            return {1.0, 1.0, 1.0, expi(g.angles.at(0))};
        case GateKind::D:
            return g.diagonal;
        default:
            throw std::invalid_argument("gate_diagonal: " + std::string(kind_symbol(g.kind)) + " is not diagonal");
    }
}

/// Dense unitary of a gate (OpenQASM / Qiskit conventions).
inline GateMatrix gate_matrix(const Gate &g) {
    using detail::expi;
    using detail::one_qubit;
    constexpr double r = std::numbers::sqrt2 / 2;
    const Amplitude I{0, 1};
    switch (g.kind) {
        case GateKind::H:
            return one_qubit(r, r, r, -r);
        case GateKind::X:
            return one_qubit(0.0, 1.0, 1.0, 0.0);
        case GateKind::U: {
            double theta = g.angles.at(0), phi = g.angles.at(1), lambda = g.angles.at(2);
            double c = std::cos(theta / 2), s = std::sin(theta / 2);
            return one_qubit(c, -expi(lambda) * s, expi(phi) * s, expi(phi + lambda) * c);
        }
        case GateKind::RX: {
            double c = std::cos(g.angles.at(0) / 2), s = std::sin(g.angles.at(0) / 2);
            return one_qubit(c, -I * s, -I * s, c);
        }
        case GateKind::RY: {
            double c = std::cos(g.angles.at(0) / 2), s = std::sin(g.angles.at(0) / 2);
            return one_qubit(c, -s, s, c);
        }
        case GateKind::CX: {
            GateMatrix m{4, std::vector<Amplitude>(16, 0.0)};
            m(0, 0) = 1;
            m(1, 1) = 1;
            m(2, 3) = 1;
            m(3, 2) = 1;
            return m;
        }
        case GateKind::SWAP: {
            GateMatrix m{4, std::vector<Amplitude>(16, 0.0)};
            m(0, 0) = 1;
            m(1, 2) = 1;
            m(2, 1) = 1;
            m(3, 3) = 1;
            return m;
        }
        case GateKind::D:
            for (const Amplitude &a : g.diagonal) {
                if (std::abs(std::abs(a) - 1.0) > 1e-9) {
                    throw std::invalid_argument("non-unitary fused gate");
                }
            }
            if (g.diagonal.size() != (std::size_t{1} << g.targets.size())) {
                throw std::invalid_argument("fused gate diagonal size does not match its arity");
            }
            return detail::diagonal_matrix(g.diagonal);
        case GateKind::RZ:
        case GateKind::RZZ:
        case GateKind::CP:
            return detail::diagonal_matrix(gate_diagonal(g));
    }
    throw std::invalid_argument("gate_matrix: unknown kind");
}

/// Checks the structural invariants of a gate against a qubit count.
inline void check_gate(const Gate &g, int num_qubits) {
    int arity = kind_arity(g.kind);
    if (g.kind == GateKind::D) {
        if (g.targets.empty() || g.diagonal.size() != (std::size_t{1} << g.targets.size())) {
            throw std::invalid_argument("fused gate has inconsistent arity");
        }
    } else if (g.arity() != arity) {
        throw std::invalid_argument("wrong number of targets for " + std::string(kind_symbol(g.kind)));
    }
    if (static_cast<int>(g.angles.size()) != kind_angle_count(g.kind)) {
        throw std::invalid_argument("wrong number of parameters for " + std::string(kind_symbol(g.kind)));
    }
    QubitMask seen = 0;
    for (int t : g.targets) {
        if (t < 0 || t >= num_qubits) {
            throw std::invalid_argument("qubit index out of range");
        }
        if (seen & (QubitMask{1} << t)) {
            throw std::invalid_argument("repeated target qubit");
        }
        seen |= QubitMask{1} << t;
    }
}

}  // namespace cachesv
