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

// Text formats.
//
// Raw circuit, one gate per line:
//     <kind> <targets...> <id> [params...]
// Optimized circuit, a sequence of records. Each record is a count line k
// followed by k lines: either k gate lines forming one gate block, or a single
// "SQS m o1..om i1..im" / "CSQS m l1..lm r1..rm" swap line. "#" starts a
// comment in optimized files. Fused diagonals are written
//     D<k> <targets...> <re0> <im0> ... <re_{2^k-1}> <im_{2^k-1}>

#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cachesv/circuit.hpp"
#include "cachesv/gate.hpp"

namespace cachesv {

class ParseError : public std::runtime_error {
   public:
    ParseError(std::size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {
    }
    std::size_t line() const {
        return line_;
    }

   private:
    std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) i++;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') i++;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

template <typename Int>
Int parse_int(std::string_view tok, std::size_t line, const char *what) {
    Int v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
    }
    return v;
}

inline double parse_real(std::string_view tok, std::size_t line) {
    double v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError(line, "expected a real number, got '" + std::string(tok) + "'");
    }
    return v;
}

inline void append_real(std::string &out, double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

/// Parses "D<k>" and returns k, or 0 when the symbol is not a fused diagonal.
inline int fused_arity(std::string_view symbol) {
    if (symbol.size() < 2 || symbol[0] != 'D') return 0;
    int k = 0;
    auto [ptr, ec] = std::from_chars(symbol.data() + 1, symbol.data() + symbol.size(), k);
    if (ec != std::errc{} || ptr != symbol.data() + symbol.size() || k < 1 || k > 20) return 0;
    return k;
}

/// Parses one gate line. Fused diagonals are only accepted when allow_fused.
inline Gate parse_gate_tokens(const std::vector<std::string_view> &tok, std::size_t line, int num_qubits,
                              bool allow_fused) {
    Gate g;
    if (int k = fused_arity(tok[0]); k > 0) {
        if (!allow_fused) throw ParseError(line, "fused gate '" + std::string(tok[0]) + "' in a raw circuit");
        std::size_t entries = std::size_t{1} << k;
        if (tok.size() != 1 + static_cast<std::size_t>(k) + 2 * entries) {
            throw ParseError(line, "wrong token count for " + std::string(tok[0]));
        }
        g.kind = GateKind::D;
        g.id = kFusedId;
        for (int j = 0; j < k; j++) g.targets.push_back(parse_int<int>(tok[1 + j], line, "qubit index"));
        for (std::size_t e = 0; e < entries; e++) {
            double re = parse_real(tok[1 + k + 2 * e], line);
            double im = parse_real(tok[2 + k + 2 * e], line);
            g.diagonal.emplace_back(re, im);
        }
        if (!std::is_sorted(g.targets.begin(), g.targets.end())) {
            throw ParseError(line, "fused gate targets must be ascending");
        }
    } else {
        auto kind = kind_from_symbol(tok[0]);
        if (!kind) throw ParseError(line, "unknown gate symbol '" + std::string(tok[0]) + "'");
        g.kind = *kind;
        std::size_t arity = kind_arity(g.kind);
        std::size_t nparams = kind_angle_count(g.kind);
        std::size_t base = 1 + arity + 1;
        if (tok.size() != base && tok.size() != base + nparams) {
            throw ParseError(line, "wrong token count for " + std::string(tok[0]));
        }
        for (std::size_t j = 0; j < arity; j++) g.targets.push_back(parse_int<int>(tok[1 + j], line, "qubit index"));
        g.id = parse_int<std::uint64_t>(tok[1 + arity], line, "gate id");
        if (tok.size() == base) {
            g.angles.assign(nparams, kDefaultAngle);
        } else {
            for (std::size_t j = 0; j < nparams; j++) g.angles.push_back(parse_real(tok[base + j], line));
        }
    }
    for (int t : g.targets) {
        if (t < 0 || t >= num_qubits) throw ParseError(line, "qubit index out of range");
    }
    try {
        check_gate(g, num_qubits);
    } catch (const std::invalid_argument &e) {
        throw ParseError(line, e.what());
    }
    return g;
}

inline std::string strip_comment(std::string_view line) {
    auto hash = line.find('#');
    return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

}  // namespace detail

/// Writes one gate line (no trailing newline). Angles equal to the default are omitted.
inline std::string format_gate(const Gate &g) {
    std::string out;
    if (g.kind == GateKind::D) {
        out += "D" + std::to_string(g.targets.size());
    } else {
        out += kind_symbol(g.kind);
    }
    for (int t : g.targets) {
        out += ' ';
        out += std::to_string(t);
    }
    if (g.kind == GateKind::D) {
        for (const Amplitude &a : g.diagonal) {
            out += ' ';
            detail::append_real(out, a.real());
            out += ' ';
            detail::append_real(out, a.imag());
        }
        return out;
    }
    out += ' ';
    out += std::to_string(g.id);
    bool all_default = std::all_of(g.angles.begin(), g.angles.end(), [](double a) { return a == kDefaultAngle; });
    if (!all_default) {
        for (double a : g.angles) {
            out += ' ';
            detail::append_real(out, a);
        }
    }
    return out;
}

inline RawCircuit parse_raw(std::string_view text, int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits - 1) {
        throw std::invalid_argument("qubit count must be in [1, 63]");
    }
    RawCircuit c{num_qubits, {}};
    std::vector<bool> seen_ids;
    auto lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); i++) {
        auto tok = detail::split_tokens(lines[i]);
        if (tok.empty()) continue;
        Gate g = detail::parse_gate_tokens(tok, i + 1, num_qubits, false);
        if (g.id < (std::uint64_t{1} << 32)) {
            if (seen_ids.size() <= g.id) seen_ids.resize(g.id + 1, false);
            if (seen_ids[g.id]) throw ParseError(i + 1, "duplicate gate id " + std::to_string(g.id));
            seen_ids[g.id] = true;
        } else {
            throw ParseError(i + 1, "gate id too large");
        }
        c.gates.push_back(std::move(g));
    }
    return c;
}

inline std::string serialize_raw(const RawCircuit &c) {
    std::string out;
    for (const Gate &g : c.gates) {
        out += format_gate(g);
        out += '\n';
    }
    return out;
}

inline OptimizedCircuit parse_optimized(std::string_view text, const LayoutParams &layout) {
    layout.validate();
    const int n = layout.num_qubits;
    const int local = layout.local_qubits();
    OptimizedCircuit c;
    c.num_qubits = n;
    c.layout = layout;

    struct Line {
        std::size_t number;
        std::vector<std::string_view> tokens;
    };
    std::vector<std::string> stripped;
    auto raw_lines = detail::split_lines(text);
    stripped.reserve(raw_lines.size());
    std::vector<Line> lines;
    for (std::size_t i = 0; i < raw_lines.size(); i++) {
        stripped.push_back(detail::strip_comment(raw_lines[i]));
    }
    for (std::size_t i = 0; i < stripped.size(); i++) {
        auto tok = detail::split_tokens(stripped[i]);
        if (!tok.empty()) lines.push_back({i + 1, std::move(tok)});
    }

    auto parse_swap_sets = [&](const Line &ln, std::vector<int> &first, std::vector<int> &second) {
        const auto &tok = ln.tokens;
        if (tok.size() < 2) throw ParseError(ln.number, "swap record without a size");
        int m = detail::parse_int<int>(tok[1], ln.number, "swap size");
        if (m < 0 || tok.size() != 2 + 2 * static_cast<std::size_t>(m)) {
            throw ParseError(ln.number, "swap arity mismatch");
        }
        for (int k = 0; k < m; k++) first.push_back(detail::parse_int<int>(tok[2 + k], ln.number, "qubit index"));
        for (int k = 0; k < m; k++) second.push_back(detail::parse_int<int>(tok[2 + m + k], ln.number, "qubit index"));
        std::sort(first.begin(), first.end());
        std::sort(second.begin(), second.end());
        QubitMask a = 0, b = 0;
        for (int q : first) {
            if (q < 0 || q >= n || (a >> q & 1)) throw ParseError(ln.number, "invalid swap qubit");
            a |= QubitMask{1} << q;
        }
        for (int q : second) {
            if (q < 0 || q >= n || (b >> q & 1)) throw ParseError(ln.number, "invalid swap qubit");
            b |= QubitMask{1} << q;
        }
        if (a & b) throw ParseError(ln.number, "swap sets overlap");
    };

    std::size_t pos = 0;
    while (pos < lines.size()) {
        const Line &head = lines[pos];
        if (head.tokens.size() != 1) throw ParseError(head.number, "expected a record count");
        long long k = detail::parse_int<long long>(head.tokens[0], head.number, "record count");
        if (k < 1) throw ParseError(head.number, "record count must be positive");
        if (pos + 1 + static_cast<std::size_t>(k) > lines.size()) {
            throw ParseError(head.number, "count mismatch: record announces " + std::to_string(k) + " lines");
        }
        const Line &first = lines[pos + 1];
        std::string_view sym = first.tokens[0];
        if (sym == "SQS" || sym == "CSQS") {
            if (k != 1) throw ParseError(head.number, "count mismatch: swap records hold exactly one line");
            if (sym == "SQS") {
                InMemSwap s;
                parse_swap_sets(first, s.out_set, s.in_set);
                for (int q : s.out_set) {
                    if (q >= local) throw ParseError(first.number, "in-memory swap touches a rank qubit");
                }
                for (int q : s.in_set) {
                    if (q >= local) throw ParseError(first.number, "in-memory swap touches a rank qubit");
                }
                c.instructions.emplace_back(std::move(s));
            } else {
                CrossRankSwap s;
                parse_swap_sets(first, s.local_set, s.rank_set);
                int m = static_cast<int>(s.local_set.size());
                for (int q : s.local_set) {
                    if (q < local - m || q >= local) {
                        throw ParseError(first.number, "cross-rank swap local qubits must be the top local qubits");
                    }
                }
                for (int q : s.rank_set) {
                    if (q < local) throw ParseError(first.number, "cross-rank swap rank qubit below the rank bits");
                }
                c.instructions.emplace_back(std::move(s));
            }
        } else {
            GateBlock block;
            for (long long j = 0; j < k; j++) {
                const Line &ln = lines[pos + 1 + j];
                if (ln.tokens[0] == "SQS" || ln.tokens[0] == "CSQS") {
                    throw ParseError(ln.number, "count mismatch: swap line inside a gate block");
                }
                block.gates.push_back(detail::parse_gate_tokens(ln.tokens, ln.number, n, true));
            }
            int limit = block.gates.size() == 1 ? local : layout.chunk_qubits;
            for (long long j = 0; j < k; j++) {
                for (int t : block.gates[j].targets) {
                    if (t >= limit) {
                        throw ParseError(lines[pos + 1 + j].number,
                                         "gate target " + std::to_string(t) + " outside the chunk (C=" +
                                             std::to_string(layout.chunk_qubits) + ")");
                    }
                }
            }
            c.instructions.emplace_back(std::move(block));
        }
        pos += 1 + static_cast<std::size_t>(k);
    }
    c.final_permutation = replay_permutation(n, c.instructions);
    return c;
}

inline std::string serialize_optimized(const OptimizedCircuit &c) {
    std::string out;
    auto append_set = [&](const std::vector<int> &s) {
        for (int q : s) {
            out += ' ';
            out += std::to_string(q);
        }
    };
    for (const Instruction &inst : c.instructions) {
        if (const auto *block = std::get_if<GateBlock>(&inst)) {
            out += std::to_string(block->gates.size());
            out += '\n';
            for (const Gate &g : block->gates) {
                out += format_gate(g);
                out += '\n';
            }
        } else if (const auto *ims = std::get_if<InMemSwap>(&inst)) {
            out += "1\nSQS " + std::to_string(ims->out_set.size());
            append_set(ims->out_set);
            append_set(ims->in_set);
            out += '\n';
        } else if (const auto *xrs = std::get_if<CrossRankSwap>(&inst)) {
            out += "1\nCSQS " + std::to_string(xrs->local_set.size());
            append_set(xrs->local_set);
            append_set(xrs->rank_set);
            out += '\n';
        }
    }
    return out;
}

/// Layout facts recoverable from an optimized listing without knowing the layout.
struct OptimizedShape {
    int max_qubit = -1;         // largest qubit index mentioned anywhere
    int local_qubits = -1;      // N - R implied by the first CSQS record, -1 if none
    int max_block_target = -1;  // largest target inside blocks of two or more gates
};

/// Walks the record structure of an optimized listing. Malformed input is left
/// for parse_optimized to report.
inline OptimizedShape scan_optimized(std::string_view text) {
    OptimizedShape shape;
    std::vector<std::vector<std::string_view>> lines;
    std::vector<std::string> stripped;
    for (std::string_view raw : detail::split_lines(text)) stripped.push_back(detail::strip_comment(raw));
    for (const std::string &s : stripped) {
        auto tok = detail::split_tokens(s);
        if (!tok.empty()) lines.push_back(std::move(tok));
    }
    auto as_int = [](std::string_view t) {
        int v = -1;
        std::from_chars(t.data(), t.data() + t.size(), v);
        return v;
    };
    std::size_t pos = 0;
    while (pos < lines.size()) {
        long long k = as_int(lines[pos][0]);
        if (k < 1 || pos + 1 + k > lines.size()) break;
        for (long long j = 0; j < k; j++) {
            const auto &tok = lines[pos + 1 + j];
            if (tok[0] == "SQS" || tok[0] == "CSQS") {
                int m = tok.size() > 1 ? as_int(tok[1]) : 0;
                for (std::size_t i = 2; i < tok.size(); i++) shape.max_qubit = std::max(shape.max_qubit, as_int(tok[i]));
                if (tok[0] == "CSQS" && shape.local_qubits < 0 && m > 0 && tok.size() == 2 + 2 * std::size_t(m)) {
                    int top = -1;
                    for (int i = 0; i < m; i++) top = std::max(top, as_int(tok[2 + i]));
                    shape.local_qubits = top + 1;
                }
                continue;
            }
            int arity = detail::fused_arity(tok[0]);
            if (arity == 0) {
                auto kind = kind_from_symbol(tok[0]);
                arity = kind ? kind_arity(*kind) : 0;
            }
            for (int i = 1; i <= arity && i < static_cast<int>(tok.size()); i++) {
                int q = as_int(tok[i]);
                shape.max_qubit = std::max(shape.max_qubit, q);
                if (k > 1) shape.max_block_target = std::max(shape.max_block_target, q);
            }
        }
        pos += 1 + k;
    }
    return shape;
}

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cachesv
