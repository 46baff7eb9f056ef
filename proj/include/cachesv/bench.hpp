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

// Benchmark harness. Each suite produces CSV rows with a fixed column order;
// every row records the layout it ran with.

#pragma once

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "cachesv/generators.hpp"
#include "cachesv/optimizer.hpp"
#include "cachesv/simulator.hpp"

namespace cachesv {

inline constexpr const char *kBlockMode = "block-by-block";
inline constexpr const char *kBaselineMode = "gate-by-gate-baseline";
inline constexpr const char *kSkippedMode = "skipped-oom";

struct BenchRow {
    std::string suite;
    std::string workload;
    LayoutParams layout;
    std::string mode;
    int reps = 0;
    double mean_seconds = 0;
    SimTimings breakdown;
    double aio_seconds = 0;
};

struct BenchOptions {
    std::string suite = "qubit";
    int min_qubits = 20;     // qubit suite
    int max_qubits = 26;     // qubit suite
    int qubits = 22;         // every other suite
    int reps = 10;
    int chunk_qubits = 12;
    int fusion_qubits = 0;   // 0 disables fusion
    int rank_qubits = 2;     // breakdown suite
    int workers_per_rank = 1;
    std::uint64_t seed = 0;
    std::size_t memory_limit = 0;  // bytes; 0 = available physical memory
};

inline std::string bench_csv_header() {
    return "suite,workload,qubits,ranks,N,R,C,CL,F,B,mode,reps,mean_seconds,gate_seconds,ims_seconds,xrs_seconds,"
           "aio_seconds";
}

inline std::string bench_csv_row(const BenchRow &r) {
    const LayoutParams &l = r.layout;
    char buf[512];
    if (r.mode == kSkippedMode) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%d,%zu,%d,%d,%d,%d,%d,%d,%s,0,,,,,", r.suite.c_str(), r.workload.c_str(),
                      l.num_qubits, l.rank_count(), l.num_qubits, l.rank_qubits, l.chunk_qubits, l.cache_line_qubits,
                      l.fusion_qubits, l.buffer_qubits, r.mode.c_str());
    } else {
        std::snprintf(buf, sizeof(buf), "%s,%s,%d,%zu,%d,%d,%d,%d,%d,%d,%s,%d,%.9f,%.9f,%.9f,%.9f,%.9f", r.suite.c_str(),
                      r.workload.c_str(), l.num_qubits, l.rank_count(), l.num_qubits, l.rank_qubits, l.chunk_qubits,
                      l.cache_line_qubits, l.fusion_qubits, l.buffer_qubits, r.mode.c_str(), r.reps, r.mean_seconds,
                      r.breakdown.gate_seconds, r.breakdown.ims_seconds, r.breakdown.xrs_seconds, r.aio_seconds);
    }
    return buf;
}

inline std::size_t available_memory() {
    long pages = sysconf(_SC_AVPHYS_PAGES);
    long page = sysconf(_SC_PAGESIZE);
    if (pages <= 0 || page <= 0) return static_cast<std::size_t>(-1);
    return static_cast<std::size_t>(pages) * static_cast<std::size_t>(page);
}

/// Layout used by the harness for n qubits over 2^r ranks.
inline LayoutParams bench_layout(const BenchOptions &o, int n, int r) {
    LayoutParams l;
    l.num_qubits = n;
    l.rank_qubits = r;
    l.chunk_qubits = std::min(o.chunk_qubits, n - r);
    l.cache_line_qubits = std::min(2, l.chunk_qubits);
    l.fusion_qubits = std::min(o.fusion_qubits, l.chunk_qubits);
    l.buffer_qubits = n - r;
    l.validate();
    return l;
}

/// Mean timings of the optimized block-by-block path over `reps` runs.
inline BenchRow bench_block_mode(const std::string &suite, const std::string &workload, const RawCircuit &raw,
                                 const LayoutParams &layout, const BenchOptions &o) {
    BenchRow row{suite, workload, layout, kBlockMode, o.reps, 0, {}, 0};
    OptimizeFlags flags;
    flags.fusion = layout.fusion_qubits >= 2;
    for (int rep = 0; rep < o.reps; rep++) {
        auto t0 = std::chrono::steady_clock::now();
        OptimizedCircuit opt = optimize(raw, layout, flags);
        auto t1 = std::chrono::steady_clock::now();
        SimResult res = simulate(opt, SimConfig{layout, o.workers_per_rank});
        auto t2 = std::chrono::steady_clock::now();
        row.aio_seconds += std::chrono::duration<double>(t1 - t0).count();
        row.mean_seconds += std::chrono::duration<double>(t2 - t1).count();
        row.breakdown.gate_seconds += res.timings.gate_seconds;
        row.breakdown.ims_seconds += res.timings.ims_seconds;
        row.breakdown.xrs_seconds += res.timings.xrs_seconds;
    }
    double k = o.reps > 0 ? 1.0 / o.reps : 0.0;
    row.mean_seconds *= k;
    row.aio_seconds *= k;
    row.breakdown.gate_seconds *= k;
    row.breakdown.ims_seconds *= k;
    row.breakdown.xrs_seconds *= k;
    return row;
}

inline BenchRow bench_baseline_mode(const std::string &suite, const std::string &workload, const RawCircuit &raw,
                                    const BenchOptions &o) {
    LayoutParams flat{raw.num_qubits, 0, raw.num_qubits, std::min(2, raw.num_qubits), 0, 0};
    BenchRow row{suite, workload, flat, kBaselineMode, o.reps, 0, {}, 0};
    for (int rep = 0; rep < o.reps; rep++) {
        auto t0 = std::chrono::steady_clock::now();
        BaselineResult res = simulate_gate_by_gate(raw, o.workers_per_rank);
        row.mean_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.breakdown.gate_seconds += res.seconds;
    }
    if (o.reps > 0) {
        row.mean_seconds /= o.reps;
        row.breakdown.gate_seconds /= o.reps;
    }
    return row;
}

/// Runs one benchmark suite: qubit, scaling, gate, circuit or breakdown.
inline std::vector<BenchRow> run_bench_suite(const BenchOptions &o) {
    if (o.reps < 1) throw std::invalid_argument("reps must be >= 1");
    const std::size_t limit = o.memory_limit ? o.memory_limit : available_memory();
    std::vector<BenchRow> rows;
    // Block mode holds the state plus receive buffers; the baseline holds one state.
    auto fits = [&](int n) { return 2 * state_bytes(n) + (std::size_t{64} << 20) <= limit; };
    auto add = [&](const std::string &workload, const RawCircuit &raw, const LayoutParams &layout, bool baseline) {
        if (!fits(layout.num_qubits)) {
            rows.push_back(BenchRow{o.suite, workload, layout, kSkippedMode, 0, 0, {}, 0});
            return;
        }
        rows.push_back(bench_block_mode(o.suite, workload, raw, layout, o));
        if (baseline) rows.push_back(bench_baseline_mode(o.suite, workload, raw, o));
    };

    if (o.suite == "qubit") {
        if (o.min_qubits < 2 || o.max_qubits < o.min_qubits) throw std::invalid_argument("bad qubit range");
        for (int n = o.min_qubits; n <= o.max_qubits; n++) {
            add("h", gen_gate_layer(GateKind::H, n, o.seed), bench_layout(o, n, 0), true);
        }
    } else if (o.suite == "scaling") {
        for (int r = 0; r <= 3; r++) {
            if (o.qubits - r < 2) throw std::invalid_argument("too few qubits for 8 ranks");
            add("qft", gen_qft(o.qubits), bench_layout(o, o.qubits, r), false);
        }
    } else if (o.suite == "gate") {
        for (GateKind kind : kNativeKinds) {
            BenchSpec spec;
            spec.family = Family::GateLayer;
            spec.layer_kind = kind;
            add(family_name(spec), gen_gate_layer(kind, o.qubits, o.seed), bench_layout(o, o.qubits, 0), true);
        }
    } else if (o.suite == "circuit" || o.suite == "breakdown") {
        const bool breakdown = o.suite == "breakdown";
        for (const char *name : {"qft", "qaoa", "bv", "hs", "qv", "sc", "vc"}) {
            BenchSpec spec = parse_family(name);
            spec.num_qubits = o.qubits;
            spec.seed = o.seed;
            int r = breakdown ? std::min(o.rank_qubits, o.qubits - 2) : 0;
            add(name, generate(spec), bench_layout(o, o.qubits, r), !breakdown);
        }
    } else {
        throw std::invalid_argument("unknown suite '" + o.suite + "' (qubit, scaling, gate, circuit, breakdown)");
    }
    return rows;
}

}  // namespace cachesv
