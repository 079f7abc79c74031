#include "ppsim/naive.hpp"

#include "ppsim/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ppsim {

namespace {

// Kernels flattened into plain breakpoint arrays; evaluation is reimplemented
// here so the oracle does not depend on the scheduler path it cross-checks.
struct FlatKernel {
    int source = 0;
    int target = 0;
    std::vector<double> times;  // ascending, starting at the first break
    std::vector<double> levels; // level on [times[k], times[k+1]), 0 after the last
};

double flat_kernel_value(const FlatKernel& k, double delay) {
    if (delay < k.times.front() || delay >= k.times.back()) {
        return 0.0;
    }
    const auto it = std::upper_bound(k.times.begin(), k.times.end(), delay);
    return k.levels[static_cast<std::size_t>(it - k.times.begin()) - 1];
}

} // namespace

SimulationResult simulate_naive(const HawkesNetwork& net,
                                double horizon,
                                RngStream& rng,
                                const SimOptions& options) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("horizon must be positive");
    }
    const auto start = std::chrono::steady_clock::now();
    const int m = net.node_count();
    const double support = net.max_support();
    const double max_level = net.max_kernel_level();

    // per-target incoming kernel lists, flattened once
    std::vector<std::vector<FlatKernel>> incoming(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        for (const auto& [target, kernel] : net.outgoing(j)) {
            FlatKernel flat;
            flat.source = j;
            flat.target = target;
            double level = 0.0;
            for (const auto& [t, jump] : kernel->steps()) {
                level += jump;
                flat.times.push_back(t);
                flat.levels.push_back(level);
            }
            incoming[static_cast<std::size_t>(target)].push_back(std::move(flat));
        }
    }

    double sum_nu = 0.0;
    for (double v : net.nu()) {
        sum_nu += v;
    }

    SimulationResult result;
    result.meta.seed = options.seed_label;
    result.meta.horizon = horizon;

    std::vector<double> joint_times; // all accepted points, ascending
    std::vector<std::vector<double>> per_node(static_cast<std::size_t>(m));
    std::vector<double> lambda(static_cast<std::size_t>(m), 0.0);

    double t = 0.0;
    while (true) {
        ++result.meta.iterations;

        // bound valid on (t, +inf) while no new point is accepted: the
        // active window can only lose points as time advances
        const auto window_begin =
            std::lower_bound(joint_times.begin(), joint_times.end(), t - support);
        const double window_count = static_cast<double>(joint_times.end() - window_begin);
        const double bound = sum_nu + max_level * window_count * static_cast<double>(m);
        if (!(bound > 0.0)) {
            result.meta.ended_early = true;
            break;
        }

        t += -std::log(rng.uniform()) / bound;
        if (t > horizon) {
            break;
        }

        // intensities at the candidate, from scratch
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            double acc = net.nu()[static_cast<std::size_t>(i)];
            for (const FlatKernel& k : incoming[static_cast<std::size_t>(i)]) {
                const auto& pts = per_node[static_cast<std::size_t>(k.source)];
                for (auto it = std::lower_bound(pts.begin(), pts.end(), t - support);
                     it != pts.end(); ++it) {
                    acc += flat_kernel_value(k, t - *it);
                }
            }
            lambda[static_cast<std::size_t>(i)] = acc;
            total += acc;
        }
        if (total > bound * (1.0 + 1e-9)) {
            throw OracleInconsistencyError("intensity above the thinning bound");
        }

        if (rng.uniform() <= total / bound) {
            // accepted: mark by exact intensity ratios
            const double threshold = rng.uniform() * total;
            int fired = m - 1;
            double cumulative = 0.0;
            for (int i = 0; i < m; ++i) {
                cumulative += lambda[static_cast<std::size_t>(i)];
                if (threshold <= cumulative) {
                    fired = i;
                    break;
                }
            }
            result.times.push_back(t);
            result.marks.push_back(fired);
            joint_times.push_back(t);
            per_node[static_cast<std::size_t>(fired)].push_back(t);
        }
    }

    result.meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace ppsim
