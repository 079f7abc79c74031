#pragma once

#include "ppsim/graph.hpp"
#include "ppsim/hawkes.hpp"
#include "ppsim/rng.hpp"

#include <cstdint>
#include <vector>

namespace ppsim {

struct SimulationMeta {
    std::uint64_t seed = 0; // label only; the stream is passed in by the caller
    double horizon = 0.0;
    std::uint64_t iterations = 0;
    double wall_seconds = 0.0;
    bool ended_early = false; // total intensity died out before the horizon

    // local-graph counters
    std::uint64_t touched_nodes_total = 0;
    std::uint64_t tie_warnings = 0;

    // debug-mode findings (zero when the corresponding flag is off)
    std::uint64_t debug_checks = 0;
    double debug_max_intensity_error = 0.0;
    std::uint64_t debug_touched_mismatches = 0;
    double debug_max_union_error = 0.0;
};

/// Strictly increasing point times with their node marks (0-indexed).
struct SimulationResult {
    std::vector<double> times;
    std::vector<int> marks;
    SimulationMeta meta;

    /// Point times split per node, each sorted ascending.
    std::vector<std::vector<double>> points_by_node(int node_count) const;
};

struct SimOptions {
    std::uint64_t seed_label = 0;
    /// Full scan: spot-check that the merged scheduler evaluates to the sum
    /// of the per-node intensities at every iteration.
    bool check_unions = false;
    /// Local graph: after every event, rebuild every intensity from scratch
    /// from the point history and verify the schedulers match it, and that
    /// exactly ch(j) u {j} was touched.
    bool debug_locality = false;
};

/// Full-scan discrete-event simulation: every iteration rebuilds the merged
/// intensity scheduler of all M nodes, samples the next point from it,
/// selects the node by cumulative intensity ratios and piecewise-prunes all
/// per-node schedulers. The merge is deliberately rebuilt from scratch each
/// iteration; this algorithm is the complexity baseline.
SimulationResult simulate_fullscan(const HawkesNetwork& net,
                                   double horizon,
                                   RngStream& rng,
                                   const SimOptions& options = {});

/// Activity-tracking simulation over the local independence graph: after a
/// point on node j only ch(j) u {j} get new intensity schedulers and fresh
/// next-point draws; every other node keeps its pending draw.
SimulationResult simulate_localgraph(const HawkesNetwork& net,
                                     const DependenceGraph& graph,
                                     double horizon,
                                     RngStream& rng,
                                     const SimOptions& options = {});

} // namespace ppsim
