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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// when any gated criterion fails. The performance line is informational.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "cachesv/cli.hpp"
#include "test_util.hpp"

using namespace cachesv;
using namespace cachesv::testing;

namespace {

constexpr double kAmplitudeTolerance = 1e-12;
constexpr double kOptimizerSeconds = 1.0;
constexpr std::size_t kQftBlockLimit = 24;
constexpr int kSweepCircuits = 200;
constexpr int kSwapCases = 10000;
constexpr double kSpeedupThreshold = 2.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool passed = true;
    std::string detail;

    void check(bool ok, const std::string &what) {
        if (!ok && passed) {
            passed = false;
            detail = what;
        }
    }
};

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(int (*f)(const Args &, std::ostream &, std::ostream &), Args args) {
    std::ostringstream out, err;
    int code = f(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
    auto p = std::filesystem::temp_directory_path() / ("cachesv_accept_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p;
}

std::string write_file(const std::filesystem::path &dir, const std::string &name, const std::string &text) {
    std::string p = (dir / name).string();
    std::ofstream(p) << text;
    return p;
}

const Args kGoldenArgs{"4", "8", "10", "1", "1", "0", "0"};
const Args kFusionArgs{"4", "8", "10", "1", "1", "4", "1"};
const LayoutParams kGoldenLayout{10, 2, 4, 2, 0, 2};

Args finder_args(const Args &tail) {
    Args a{data_path("worked_example_raw.txt")};
    a.insert(a.end(), tail.begin(), tail.end());
    return a;
}

std::vector<std::string> swap_lines(const OptimizedCircuit &c) {
    std::vector<std::string> out;
    std::string text = serialize_optimized(c);
    for (std::string_view line : detail::split_lines(text)) {
        if (line.rfind("SQS", 0) == 0 || line.rfind("CSQS", 0) == 0) out.emplace_back(line);
    }
    return out;
}

Outcome golden_listing() {
    Outcome o;
    auto t0 = Clock::now();
    CliRun r = cli(run_finder, finder_args(kGoldenArgs));
    double t = seconds_since(t0);
    o.check(r.code == 0, "finder exited " + std::to_string(r.code) + ": " + r.err);
    o.check(tokens_of(r.out) == tokens_of(read_text_file(data_path("worked_example_opt.txt"))), "listing differs from golden");
    o.check(r.out.find("SQS 3 0 1 3 4 5 7") != std::string::npos, "missing SQS 3 0 1 3 4 5 7");
    o.check(r.out.find("CSQS 2 6 7 8 9") != std::string::npos, "missing CSQS 2 6 7 8 9");
    o.check(t < kOptimizerSeconds, "runtime " + detail::fixed(t, 3) + " s");
    if (o.passed) o.detail = "token-identical, " + detail::fixed(t * 1e3, 2) + " ms";
    return o;
}

Outcome fusion_skeleton() {
    Outcome o;
    CliRun plain_run = cli(run_finder, finder_args(kGoldenArgs));
    CliRun fused_run = cli(run_finder, finder_args(kFusionArgs));
    o.check(fused_run.code == 0, "finder exited " + std::to_string(fused_run.code) + ": " + fused_run.err);
    if (!o.passed) return o;
    LayoutParams layout = kGoldenLayout;
    layout.fusion_qubits = 4;
    OptimizedCircuit plain = parse_optimized(plain_run.out, layout);
    OptimizedCircuit fused = parse_optimized(fused_run.out, layout);
    o.check(swap_lines(fused) == swap_lines(plain), "swap sequence changed");

    std::vector<const GateBlock *> blocks;
    for (const Instruction &inst : fused.instructions) {
        if (const auto *b = std::get_if<GateBlock>(&inst)) blocks.push_back(b);
    }
    o.check(blocks.size() == 4, "expected 4 gate blocks, got " + std::to_string(blocks.size()));
    if (!o.passed) return o;
    auto is_native = [](const Gate &g) { return g.kind != GateKind::D; };
    o.check(blocks[0]->gates.size() == 3 && std::all_of(blocks[0]->gates.begin(), blocks[0]->gates.end(), is_native),
            "first block is not 3 native gates");

    // The raw RZZ ids fused into each D4, found by which ids vanish per block.
    std::map<std::uint64_t, std::size_t> block_of_plain;
    std::size_t k = 0;
    for (const Instruction &inst : plain.instructions) {
        if (const auto *b = std::get_if<GateBlock>(&inst)) {
            for (const Gate &g : b->gates) block_of_plain[g.id] = k;
            k++;
        }
    }
    std::set<std::uint64_t> native;
    std::vector<std::set<std::uint64_t>> fused_sets;
    for (std::size_t i = 0; i < blocks.size(); i++) {
        std::set<std::uint64_t> present;
        int d4 = 0;
        for (const Gate &g : blocks[i]->gates) {
            if (g.kind == GateKind::D) {
                d4 += g.arity() == 4;
            } else {
                present.insert(g.id);
                native.insert(g.id);
            }
        }
        if (d4 == 0) continue;
        std::set<std::uint64_t> gone;
        for (auto [id, b] : block_of_plain) {
            if (b == i && !present.count(id)) gone.insert(id);
        }
        fused_sets.push_back(gone);
    }
    std::vector<std::set<std::uint64_t>> want{{2, 3, 9}, {8, 12}};
    o.check(fused_sets == want, "D4 gates do not replace {2,3,9} and {8,12}");
    o.check(native == std::set<std::uint64_t>{0, 1, 4, 5, 6, 7, 10, 11, 13}, "native gate set changed");

    std::vector<Amplitude> expected = oracle_simulate(parse_raw(read_text_file(data_path("worked_example_raw.txt")), 10));
    double err = max_abs_diff(gather_logical_state(simulate(fused, SimConfig{layout, 1}), layout), expected);
    o.check(err <= kAmplitudeTolerance, "state differs from oracle by " + std::to_string(err));
    if (o.passed) o.detail = "skeleton matches, fused state error " + std::to_string(err);
    return o;
}

Outcome oracle_sweep() {
    Outcome o;
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<int> qubits(4, 12), gates(20, 200);
    double worst = 0;
    std::size_t runs = 0;
    auto t0 = Clock::now();
    for (int circuit = 0; circuit < kSweepCircuits && o.passed; circuit++) {
        int n = qubits(rng);
        RawCircuit raw = random_circuit(n, gates(rng), rng);
        std::vector<Amplitude> expected = oracle_simulate(raw);
        for (int bits = 0; bits < 8; bits++) {
            OptimizeFlags flags{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0};
            for (int r = 0; r <= 2; r++) {
                if (r > 0 && !flags.cross_rank_swap) continue;
                for (int c = 3; c <= 4; c++) {
                    if (r > n - c) continue;
                    LayoutParams layout{n, r, c, 2, flags.fusion ? c : 0, n - r};
                    OptimizedCircuit opt = optimize(raw, layout, flags);
                    for (int b = r == 0 ? n : r; b <= n - r; b++) {
                        layout.buffer_qubits = b;
                        opt.layout = layout;
                        SimResult res = simulate(opt, SimConfig{layout, 1});
                        double err = max_abs_diff(gather_logical_state(res, layout), expected);
                        worst = std::max(worst, err);
                        runs++;
                        o.check(err <= kAmplitudeTolerance,
                                "circuit " + std::to_string(circuit) + " n=" + std::to_string(n) + " R=" +
                                    std::to_string(r) + " C=" + std::to_string(c) + " B=" + std::to_string(b) +
                                    " flags=" + std::to_string(bits) + " error " + std::to_string(err));
                    }
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu runs, max error %.3e, %.1f s", runs, worst, seconds_since(t0));
    if (o.passed) o.detail = buf;
    return o;
}

Outcome order_validation() {
    Outcome o;
    auto dir = scratch_dir();
    int checked = 0;
    auto validate_files = [&](const std::string &raw_text, const std::string &opt_text, const std::string &tag) {
        std::string rp = write_file(dir, tag + "_raw.txt", raw_text);
        std::string op = write_file(dir, tag + "_opt.txt", opt_text);
        return cli(run_validate, {"--raw", rp, "--opt", op});
    };

    for (const char *name : {"qft", "qaoa", "bv", "hs", "qv", "sc", "vc"}) {
        BenchSpec spec = parse_family(name);
        spec.num_qubits = 20;
        RawCircuit raw = generate(spec);
        for (int r : {0, 2}) {
            LayoutParams layout{20, r, 10, 2, 0, 20 - r};
            OptimizedCircuit opt = optimize(raw, layout, {});
            CliRun v = validate_files(serialize_raw(raw), serialize_optimized(opt), name);
            o.check(v.code == 0 && v.out == std::string(kValidationSuccess) + "\n",
                    std::string(name) + " R=" + std::to_string(r) + ": " + v.out + v.err);
            checked++;
        }
    }
    CliRun pair = cli(run_validate, {"--raw", data_path("worked_example_raw.txt"), "--opt", data_path("worked_example_opt.txt")});
    o.check(pair.code == 0 && pair.out == std::string(kValidationSuccess) + "\n", "worked-example pair: " + pair.out);

    // Injected faults on the worked example.
    RawCircuit raw = parse_raw(read_text_file(data_path("worked_example_raw.txt")), 10);
    OptimizedCircuit good = parse_optimized(read_text_file(data_path("worked_example_opt.txt")), kGoldenLayout);
    std::vector<std::pair<std::string, OptimizedCircuit>> faults;
    {
        OptimizedCircuit f = good;
        auto &g = std::get<GateBlock>(f.instructions[0]).gates;
        std::swap(g[0], g[1]);
        std::swap(g[0].id, g[1].id);
        faults.emplace_back("relabelled ids", f);
    }
    {
        OptimizedCircuit f = good;
        std::get<GateBlock>(f.instructions[2]).gates.pop_back();
        faults.emplace_back("dropped gate", f);
    }
    {
        OptimizedCircuit f = good;
        f.instructions.erase(f.instructions.begin() + 1);
        faults.emplace_back("missing swap", f);
    }
    {
        OptimizedCircuit f = good;
        std::swap(f.instructions[2], f.instructions[4]);
        faults.emplace_back("reordered blocks", f);
    }
    for (auto &[what, f] : faults) {
        CliRun v = validate_files(serialize_raw(raw), serialize_optimized(f), "fault");
        o.check(v.code == 1, "fault not detected: " + what);
    }
    std::filesystem::remove_all(dir);
    if (o.passed) {
        o.detail = std::to_string(checked) + " family circuits and the worked example pass, " +
                   std::to_string(faults.size()) + " faults rejected";
    }
    return o;
}

Outcome gate_counts() {
    Outcome o;
    std::size_t qft = gen_qft(31).gates.size();
    std::size_t qaoa = gen_qaoa(31, 5, 0).gates.size();
    BenchSpec bv_spec = parse_family("bv");
    bv_spec.num_qubits = 31;
    std::size_t bv = generate(bv_spec).gates.size();
    o.check(qft == 496, "QFT(31) has " + std::to_string(qft));
    o.check(qaoa == 2511, "QAOA(31) has " + std::to_string(qaoa));
    o.check(bv == 92, "BV(31) has " + std::to_string(bv));
    o.detail = "QFT " + std::to_string(qft) + ", QAOA " + std::to_string(qaoa) + ", BV " + std::to_string(bv);
    return o;
}

Outcome block_quality() {
    Outcome o;
    LayoutParams layout{31, 0, 10, 2, 0, 31};
    std::size_t qft_blocks = 0;
    double slowest = 0;
    std::string slowest_name;
    for (const char *name : {"qft", "qaoa", "bv", "hs", "qv", "sc", "vc"}) {
        BenchSpec spec = parse_family(name);
        spec.num_qubits = 31;
        RawCircuit raw = generate(spec);
        auto t0 = Clock::now();
        OptimizedCircuit opt = optimize(raw, layout, {});
        double t = seconds_since(t0);
        if (t > slowest) {
            slowest = t;
            slowest_name = name;
        }
        o.check(t < kOptimizerSeconds, std::string(name) + " optimized in " + detail::fixed(t, 3) + " s");
        if (std::string(name) == "qft") qft_blocks = count_gate_blocks(opt);
    }
    o.check(qft_blocks <= kQftBlockLimit, "QFT(31) needs " + std::to_string(qft_blocks) + " blocks");
    std::string d = "QFT(31) blocks " + std::to_string(qft_blocks) + " (limit " + std::to_string(kQftBlockLimit) +
                    "), slowest optimize " + slowest_name + " " + detail::fixed(slowest * 1e3, 2) + " ms";
    if (o.passed) o.detail = d;
    else o.detail += "; " + d;
    return o;
}

Outcome swap_properties() {
    Outcome o;
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < kSwapCases && o.passed; trial++) {
        int n = 4 + static_cast<int>(rng() % 9);
        std::vector<Amplitude> s = random_state(n, rng);
        if (trial % 2 == 0) {
            std::vector<int> pos(n);
            std::iota(pos.begin(), pos.end(), 0);
            std::shuffle(pos.begin(), pos.end(), rng);
            int k = 1 + static_cast<int>(rng() % (n / 2));
            std::vector<int> a(pos.begin(), pos.begin() + k), b(pos.begin() + k, pos.begin() + 2 * k);
            int cl = static_cast<int>(rng() % 4);
            StatePartition p = s;
            in_memory_swap(p, n, a, b, cl);
            o.check(p == bitswap_permute(s, a, b), "IMS mismatch on case " + std::to_string(trial));
            in_memory_swap(p, n, a, b, cl);
            o.check(p == s, "IMS not an involution on case " + std::to_string(trial));
        } else {
            int r = 1 + static_cast<int>(rng() % std::min(3, n - 1));
            int local = n - r;
            int k = 1 + static_cast<int>(rng() % std::min(r, local));
            std::vector<int> rank_bits(r);
            std::iota(rank_bits.begin(), rank_bits.end(), local);
            std::shuffle(rank_bits.begin(), rank_bits.end(), rng);
            rank_bits.resize(k);
            std::sort(rank_bits.begin(), rank_bits.end());
            std::vector<int> top(k);
            std::iota(top.begin(), top.end(), local - k);
            int b = k + static_cast<int>(rng() % (local - k + 1));
            LayoutParams layout{n, r, 1, 0, 0, b};
            auto parts = partition_state(s, layout);
            cross_rank_swap(parts, CrossRankSwap{top, rank_bits}, layout);
            o.check(join_partitions(parts) == bitswap_permute(s, top, rank_bits),
                    "XRS mismatch on case " + std::to_string(trial));
            cross_rank_swap(parts, CrossRankSwap{top, rank_bits}, layout);
            o.check(join_partitions(parts) == s, "XRS not an involution on case " + std::to_string(trial));
        }
    }

    // bitshift over every 12-bit index for every destination set of one shape per size.
    for (int trial = 0; trial < 64 && o.passed; trial++) {
        std::vector<int> pos(12);
        std::iota(pos.begin(), pos.end(), 0);
        std::shuffle(pos.begin(), pos.end(), rng);
        int k = 1 + trial % 6;
        std::vector<int> a(pos.begin(), pos.begin() + k), b(pos.begin() + k, pos.begin() + 2 * k);
        int cl = trial % 5;
        SwapPlan plan(12, a, b, cl);
        std::vector<bool> hit(1 << 12, false);
        for (Index i = 0; i < hit.size(); i++) {
            Index j = plan.shift(i);
            o.check(j < hit.size() && !hit[j], "bitshift not a bijection (trial " + std::to_string(trial) + ")");
            if (j < hit.size()) hit[j] = true;
        }
    }

    // XRS results do not depend on the buffer size.
    for (int trial = 0; trial < 50 && o.passed; trial++) {
        int n = 10, r = 1 + trial % 3, local = n - r;
        int k = 1 + trial % r;
        std::vector<int> rank_bits(r);
        std::iota(rank_bits.begin(), rank_bits.end(), local);
        std::shuffle(rank_bits.begin(), rank_bits.end(), rng);
        rank_bits.resize(k);
        std::sort(rank_bits.begin(), rank_bits.end());
        std::vector<int> top(k);
        std::iota(top.begin(), top.end(), local - k);
        std::vector<Amplitude> s = random_state(n, rng);
        std::vector<Amplitude> first;
        for (int b = k; b <= local; b++) {
            LayoutParams layout{n, r, 1, 0, 0, b};
            auto parts = partition_state(s, layout);
            cross_rank_swap(parts, CrossRankSwap{top, rank_bits}, layout);
            std::vector<Amplitude> got = join_partitions(parts);
            if (first.empty()) first = got;
            o.check(got == first, "XRS output changes with B=" + std::to_string(b));
        }
    }

    // Whole-simulator determinism across worker counts.
    for (int trial = 0; trial < 6 && o.passed; trial++) {
        RawCircuit raw = random_circuit(12, 200, rng);
        LayoutParams layout{12, trial % 3, 5, 2, 0, 4};
        OptimizedCircuit opt = optimize(raw, layout, {});
        SimResult one = simulate(opt, SimConfig{layout, 1});
        for (int w : {2, 8}) {
            o.check(simulate(opt, SimConfig{layout, w}).partitions == one.partitions,
                    std::to_string(w) + " workers differ from 1");
        }
    }
    if (o.passed) o.detail = std::to_string(kSwapCases) + " IMS/XRS cases, 12-bit bitshift, B sweep, workers {1,2,8}";
    return o;
}

int env_int(const char *name, int fallback) {
    const char *v = std::getenv(name);
    return v && *v ? std::atoi(v) : fallback;
}

Outcome performance() {
    Outcome o;
    BenchOptions opts;
    opts.qubits = env_int("ACCEPT_PERF_QUBITS", 22);
    opts.reps = env_int("ACCEPT_PERF_REPS", 3);
    opts.workers_per_rank = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    RawCircuit raw = gen_qft(opts.qubits);
    LayoutParams layout = bench_layout(opts, opts.qubits, 0);
    if (2 * state_bytes(opts.qubits) > available_memory()) {
        o.check(false, "not enough memory for " + std::to_string(opts.qubits) + " qubits");
        return o;
    }
    BenchRow block = bench_block_mode("accept", "qft", raw, layout, opts);
    BenchRow base = bench_baseline_mode("accept", "qft", raw, opts);
    double speedup = base.mean_seconds / block.mean_seconds;
    char buf[200];
    std::snprintf(buf, sizeof(buf), "QFT(%d) x%d, %d threads: block %.3f s, gate-by-gate %.3f s, speedup %.2fx (want >= %.1fx)",
                  opts.qubits, opts.reps, opts.workers_per_rank, block.mean_seconds, base.mean_seconds, speedup,
                  kSpeedupThreshold);
    o.check(speedup >= kSpeedupThreshold, buf);
    o.detail = buf;
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<Outcome()> run;
        bool gated;
    };
    const Criterion criteria[] = {
        {"golden-reordering", golden_listing, true},
        {"golden-fusion-structure", fusion_skeleton, true},
        {"oracle-equivalence-sweep", oracle_sweep, true},
        {"order-validation", order_validation, true},
        {"gate-count-invariants", gate_counts, true},
        {"block-count-quality", block_quality, true},
        {"swap-kernel-properties", swap_properties, true},
        {"desk-scale-performance", performance, false},
    };
    int failures = 0;
    for (const Criterion &c : criteria) {
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception &e) {
            out.passed = false;
            out.detail = std::string("exception: ") + e.what();
        }
        if (!out.passed && c.gated) failures++;
        std::printf("%s %s%s: %s\n", out.passed ? "PASS" : "FAIL", c.name, c.gated ? "" : " [informational]",
                    out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d gated criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
