#pragma once

#include "ppsim/graph.hpp"
#include "ppsim/hawkes.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ppsim {

/// Theoretical per-run cost of the full-scan algorithm,
/// T * |m|_1 * (M + |Rm|_1) * log(M + |Rm|_1), natural log with the argument
/// clamped to >= 2.
double predict_fullscan(const HawkesNetwork& net, const DependenceGraph& graph, double horizon);

/// Theoretical per-run cost of the local-graph algorithm,
/// T * (m'Rm + log(M) |m|_1 + m'R'Rm + log(M) |Rm|_1), same log convention.
double predict_localgraph(const HawkesNetwork& net, const DependenceGraph& graph, double horizon);

struct SlopeFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    std::size_t n = 0;
};

/// Least-squares slope of log(y) against log(x). Requires >= 5 distinct x.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& xy);

struct BenchConfig {
    std::vector<std::string> topologies{"er"}; // er | cascade | sbm1 | sbm2 | sbm3
    std::vector<int> m_grid{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    int fullscan_max_m = 400;
    std::string er_p = "degree:4"; // degree:<d> => p = d/M, or "paper-grid"
    double horizon = 10.0;
    double target_m = 10.0;
    double kernel_level = 5.0;
    double kernel_support = 0.02;
    int graph_seeds = 1;
    int reps = 10;  // timed repetitions; the median goes into the row
    int warmup = 1; // discarded leading repetitions
    std::vector<std::string> algos{"fullscan", "localgraph"};
    std::uint64_t master_seed = 1;
    int workers = 0; // 0 = hardware concurrency
};

/// Key = value lines, '#' comments, comma-separated lists.
BenchConfig parse_bench_config(std::istream& in);

struct BenchRow {
    std::string topology;
    int m = 0;
    std::string p_or_preset;
    std::uint64_t seed = 0;
    std::string algo;
    std::int64_t points = 0;     // median over repetitions
    double wall_seconds = 0.0;   // median over repetitions
    double predicted = 0.0;
    double wall_seconds_mean = 0.0;
};

struct BenchOutcome {
    std::vector<BenchRow> rows;
    int configurations = 0;
    int discarded = 0; // spectral radius >= 1 or negative balanced rate
};

/// One benchmark instance: topology graph, constant kernels on every edge,
/// rates balanced to the target mean intensity. `net` is empty when the
/// graph must be discarded.
struct BenchInstance {
    EdgeList edges;
    std::optional<HawkesNetwork> net;
    std::string discard_reason;
};

BenchInstance make_bench_instance(const std::string& topology,
                                  int node_count,
                                  double er_p,
                                  const BenchConfig& config,
                                  RngStream& graph_rng);

/// Generates every configured (topology, M, p, seed) instance, times both
/// simulators on it (full scan only up to fullscan_max_m) and collects one
/// row per (instance, algorithm). Wall time covers the simulation call only.
/// Rows come back in deterministic configuration order regardless of the
/// worker count.
BenchOutcome run_scaling_suite(const BenchConfig& config);

/// Header `topology,M,p_or_preset,seed,algo,points,wall_seconds,predicted`
/// plus a trailing `wall_seconds_mean` column.
void write_results_csv(std::ostream& out, const std::vector<BenchRow>& rows);

} // namespace ppsim
