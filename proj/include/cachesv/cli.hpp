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

// Command-line entry points. Each run_* takes the arguments after the
// program (or subcommand) name and returns the process exit code, so the
// binaries in tools/ are thin wrappers and tests can call these directly.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cachesv/bench.hpp"
#include "cachesv/circuit_io.hpp"
#include "cachesv/config.hpp"
#include "cachesv/generators.hpp"
#include "cachesv/optimizer.hpp"
#include "cachesv/oracle.hpp"
#include "cachesv/simulator.hpp"

namespace cachesv {

using Args = std::vector<std::string>;

/// Environment variable holding the number of worker threads per rank.
inline constexpr const char *kThreadsEnv = "CACHESV_THREADS";

inline int workers_from_env() {
    const char *v = std::getenv(kThreadsEnv);
    if (v == nullptr || *v == '\0') return 1;
    int n = std::atoi(v);
    if (n < 1) throw std::invalid_argument(std::string(kThreadsEnv) + " must be a positive integer");
    return n;
}

namespace detail {

/// Runs a CLI11 app over `args`; returns an exit code when parsing ended the run.
inline std::optional<int> cli_parse(CLI::App &app, Args args, std::ostream &out, std::ostream &err) {
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }
    return std::nullopt;
}

inline void write_output(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << text;
}

inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

/// Smallest qubit count that holds every target of a raw listing.
inline int raw_qubit_count(std::string_view text) {
    RawCircuit c = parse_raw(text, kMaxQubits - 1);
    int top = 0;
    for (const Gate &g : c.gates) {
        for (int t : g.targets) top = std::max(top, t + 1);
    }
    return top;
}

}  // namespace detail

/// gen --family F --qubits N [--seed S] [--levels P] [--secret BITS] [--out FILE]
inline int run_gen(const Args &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Generate a benchmark circuit in raw format", "gen"};
    std::string family, secret, path;
    int qubits = 0, levels = 5;
    std::uint64_t seed = 0;
    app.add_option("--family", family, "qft, qaoa, bv, hs, qv, sc, vc, or a gate symbol for a gate layer")->required();
    app.add_option("--qubits", qubits, "Number of qubits")->required();
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--levels", levels, "QAOA levels");
    app.add_option("--secret", secret, "BV secret bits (default all ones)");
    app.add_option("--out", path, "Output file (default stdout)");
    if (auto code = detail::cli_parse(app, args, out, err)) return *code;
    try {
        BenchSpec spec = parse_family(family);
        spec.num_qubits = qubits;
        spec.seed = seed;
        spec.qaoa_levels = levels;
        spec.secret = secret;
        detail::write_output(path, serialize_raw(generate(spec)), out);
    } catch (const std::exception &e) {
        err << "gen: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

inline constexpr const char *kFinderUsage =
    "usage: finder TARGET_FILE CACHE_QUBITS LOCAL_QUBITS TOTAL_QUBITS IMS_FLAG XRS_FLAG FUSION_QUBITS FUSION_FLAG\n";

/// finder FILE C N-R N IMS XRS F FUSION
inline int run_finder(const Args &args, std::ostream &out, std::ostream &err) {
    if (args.size() != 8) {
        err << kFinderUsage;
        return 2;
    }
    int v[7];
    for (int i = 0; i < 7; i++) {
        const std::string &s = args[i + 1];
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v[i]);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            err << "finder: expected an integer, got '" << s << "'\n" << kFinderUsage;
            return 2;
        }
    }
    const auto [c, local, n, ims, xrs, f, fusion] = std::tuple{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
    for (int flag : {ims, xrs, fusion}) {
        if (flag != 0 && flag != 1) {
            err << "finder: flags must be 0 or 1\n" << kFinderUsage;
            return 2;
        }
    }
    try {
        std::string text = read_text_file(args[0]);
        RawCircuit raw;
        try {
            raw = parse_raw(text, n);
        } catch (const ParseError &e) {
            err << args[0] << ":" << e.line() << ": " << e.what() << "\n";
            return 1;
        }
        LayoutParams layout{n, n - local, c, std::min(2, c), fusion ? f : 0, 0};
        OptimizedCircuit opt = optimize(raw, layout, OptimizeFlags{ims == 1, xrs == 1, fusion == 1});
        out << serialize_optimized(opt);
    } catch (const std::exception &e) {
        err << "finder: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

/// Quokka -i CONFIG.ini -c CIRCUIT.txt [--chunk C] [--amplitudes K] [--raw]
inline int run_simulator(const Args &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Simulate an optimized circuit", "Quokka"};
    std::string ini_path, circuit_path;
    int chunk = 0, amplitudes = 0;
    bool raw_input = false;
    app.add_option("-i,--ini", ini_path, "Configuration file")->required();
    app.add_option("-c,--circuit", circuit_path, "Circuit file (optimized format)")->required();
    app.add_option("--chunk", chunk, "Chunk qubits (default: inferred from the circuit)");
    app.add_option("--amplitudes", amplitudes, "Print the first K logical amplitudes");
    app.add_flag("--raw", raw_input, "Circuit is in raw format; optimize it first");
    if (auto code = detail::cli_parse(app, args, out, err)) return *code;
    try {
        SystemConfig sys = parse_ini(read_text_file(ini_path));
        std::string text = read_text_file(circuit_path);
        LayoutParams layout;
        layout.num_qubits = sys.total_qbit;
        layout.rank_qubits = sys.rank_qbit;
        layout.buffer_qubits = sys.buffer_qbit;
        const int local = layout.local_qubits();
        if (local < 1) throw std::invalid_argument("layout mismatch: no local qubits");

        OptimizedCircuit opt;
        double aio_seconds = 0;
        if (raw_input) {
            layout.chunk_qubits = chunk > 0 ? chunk : std::min(10, local);
            layout.cache_line_qubits = std::min(2, layout.chunk_qubits);
            RawCircuit raw = parse_raw(text, layout.num_qubits);
            auto t0 = std::chrono::steady_clock::now();
            opt = optimize(raw, layout, OptimizeFlags{true, true, false});
            aio_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        } else {
            OptimizedShape shape = scan_optimized(text);
            if (shape.max_qubit >= layout.num_qubits) {
                throw std::invalid_argument("layout mismatch: circuit uses qubit " + std::to_string(shape.max_qubit) +
                                            " but total_qbit=" + std::to_string(layout.num_qubits));
            }
            if (shape.local_qubits >= 0 && shape.local_qubits != local) {
                throw std::invalid_argument("layout mismatch: cross-rank swaps imply " +
                                            std::to_string(layout.num_qubits - shape.local_qubits) +
                                            " rank qubits, config has " + std::to_string(layout.rank_qubits));
            }
            int c = chunk > 0 ? chunk : (shape.max_block_target >= 0 ? shape.max_block_target + 1 : std::min(10, local));
            if (c > local) {
                throw std::invalid_argument("layout mismatch: gate blocks need " + std::to_string(c) +
                                            " chunk qubits but only " + std::to_string(local) + " are local");
            }
            layout.chunk_qubits = std::max(c, std::min(2, local));
            layout.cache_line_qubits = std::min(2, layout.chunk_qubits);
            opt = parse_optimized(text, layout);
        }
        SimResult res = simulate(opt, SimConfig{layout, workers_from_env()});
        out << "qubits: " << layout.num_qubits << "\n";
        out << "ranks: " << layout.rank_count() << "\n";
        out << "chunk_qubits: " << layout.chunk_qubits << "\n";
        out << "instructions: " << opt.instructions.size() << " (" << count_gate_blocks(opt) << " gate blocks)\n";
        out << "norm: " << detail::fixed(state_norm(res.partitions), 12) << "\n";
        out << "time_gate: " << detail::fixed(res.timings.gate_seconds, 6) << "\n";
        out << "time_ims: " << detail::fixed(res.timings.ims_seconds, 6) << "\n";
        out << "time_xrs: " << detail::fixed(res.timings.xrs_seconds, 6) << "\n";
        out << "time_aio: " << detail::fixed(aio_seconds, 6) << "\n";
        Index shown = std::min<Index>(std::max(amplitudes, 0), Index{1} << layout.num_qubits);
        for (Index i = 0; i < shown; i++) {
            Amplitude a = get_amplitude(res.partitions, layout, i, res.permutation);
            out << "amplitude " << i << ": " << detail::fixed(a.real(), 12) << " " << detail::fixed(a.imag(), 12) << "\n";
        }
    } catch (const std::exception &e) {
        err << "Quokka: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

/// validate --raw FILE --opt FILE [--qubits N]
inline int run_validate(const Args &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Check that an optimized circuit preserves the raw gate order", "validate"};
    std::string raw_path, opt_path;
    int qubits = 0;
    app.add_option("--raw", raw_path, "Raw circuit file")->required();
    app.add_option("--opt", opt_path, "Optimized circuit file")->required();
    app.add_option("--qubits", qubits, "Total qubits (default: inferred)");
    if (auto code = detail::cli_parse(app, args, out, err)) return *code;
    try {
        std::string raw_text = read_text_file(raw_path);
        std::string opt_text = read_text_file(opt_path);
        OptimizedShape shape = scan_optimized(opt_text);
        int n = qubits > 0 ? qubits : std::max({detail::raw_qubit_count(raw_text), shape.max_qubit + 1, 1});
        LayoutParams layout;
        layout.num_qubits = n;
        layout.rank_qubits = shape.local_qubits > 0 ? n - shape.local_qubits : 0;
        layout.chunk_qubits = layout.local_qubits();
        layout.cache_line_qubits = std::min(2, layout.chunk_qubits);
        RawCircuit raw = parse_raw(raw_text, n);
        OptimizedCircuit opt = parse_optimized(opt_text, layout);
        ValidationReport rep = validate_order(raw, opt);
        if (rep.passed) {
            out << kValidationSuccess << "\n";
            return 0;
        }
        out << "Circuit order validation failed\n" << rep.summary();
        return 1;
    } catch (const std::exception &e) {
        err << "validate: " << e.what() << "\n";
        return 1;
    }
}

/// bench --suite S [--min-qubits A --max-qubits B | --qubits N] [--reps K] [--chunk C] [--out FILE]
inline int run_bench(const Args &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Run a benchmark suite and print CSV", "bench"};
    BenchOptions o;
    std::string path;
    app.add_option("--suite", o.suite, "qubit, scaling, gate, circuit or breakdown");
    app.add_option("--min-qubits", o.min_qubits, "Smallest size of the qubit suite");
    app.add_option("--max-qubits", o.max_qubits, "Largest size of the qubit suite");
    app.add_option("--qubits", o.qubits, "Size for the other suites");
    app.add_option("--reps", o.reps, "Runs averaged per row");
    app.add_option("--chunk", o.chunk_qubits, "Chunk qubits");
    app.add_option("--fusion", o.fusion_qubits, "Fusion qubits (0 disables fusion)");
    app.add_option("--rank-qubits", o.rank_qubits, "Rank qubits for the breakdown suite");
    app.add_option("--seed", o.seed, "Seed for the random circuit families");
    app.add_option("--out", path, "CSV file (default stdout)");
    if (auto code = detail::cli_parse(app, args, out, err)) return *code;
    try {
        o.workers_per_rank = workers_from_env();
        std::string csv = bench_csv_header() + "\n";
        for (const BenchRow &row : run_bench_suite(o)) csv += bench_csv_row(row) + "\n";
        detail::write_output(path, csv, out);
    } catch (const std::exception &e) {
        err << "bench: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

inline constexpr const char *kMainUsage =
    "usage: cachesv <command> [args]\n"
    "commands:\n"
    "  gen       generate a benchmark circuit\n"
    "  finder    optimize a raw circuit (8 positional arguments)\n"
    "  sim       simulate an optimized circuit (-i CONFIG -c CIRCUIT)\n"
    "  validate  check gate order of an optimized circuit\n"
    "  bench     run a benchmark suite\n";

inline int run_main(const Args &args, std::ostream &out, std::ostream &err) {
    if (args.empty() || args[0] == "-h" || args[0] == "--help") {
        (args.empty() ? err : out) << kMainUsage;
        return args.empty() ? 2 : 0;
    }
    Args rest(args.begin() + 1, args.end());
    const std::string &cmd = args[0];
    if (cmd == "gen") return run_gen(rest, out, err);
    if (cmd == "finder") return run_finder(rest, out, err);
    if (cmd == "sim") return run_simulator(rest, out, err);
    if (cmd == "validate") return run_validate(rest, out, err);
    if (cmd == "bench") return run_bench(rest, out, err);
    err << "unknown command '" << cmd << "'\n" << kMainUsage;
    return 2;
}

}  // namespace cachesv
