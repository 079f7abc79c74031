#include "ppsim/simulate.hpp"

#include "ppsim/errors.hpp"
#include "ppsim/sampling.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace ppsim {

std::vector<std::vector<double>> SimulationResult::points_by_node(int node_count) const {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(node_count));
    for (std::size_t k = 0; k < times.size(); ++k) {
        out.at(static_cast<std::size_t>(marks[k])).push_back(times[k]);
    }
    return out;
}

SimulationResult simulate_fullscan(const HawkesNetwork& net,
                                   double horizon,
                                   RngStream& rng,
                                   const SimOptions& options) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("horizon must be positive");
    }
    const auto start = std::chrono::steady_clock::now();
    const int m = net.node_count();

    SimulationResult result;
    result.meta.seed = options.seed_label;
    result.meta.horizon = horizon;

    IntensityState state = make_intensity_state(net, 0.0);

    while (true) {
        ++result.meta.iterations;

        // a/ merged intensity, rebuilt from scratch
        Scheduler total;
        for (const Scheduler& l : state.lambda) {
            total.merge_from(l);
        }
        if (options.check_unions) {
            const double s = result.times.empty() ? 0.0 : result.times.back();
            double sum = 0.0;
            for (const Scheduler& l : state.lambda) {
                sum += l.evaluate(s);
            }
            const double err = std::abs(total.evaluate(s) - sum);
            ++result.meta.debug_checks;
            result.meta.debug_max_union_error = std::max(result.meta.debug_max_union_error, err);
        }

        // b/ next point of the merged process
        const NextPoint next = get_t_next(total, rng);
        if (!next) {
            result.meta.ended_early = true;
            break;
        }
        const double t = *next;
        if (t > horizon) {
            break;
        }

        // d1/ re-anchor every node at t so front values are the intensities
        for (Scheduler& l : state.lambda) {
            l.prune_piecewise(t);
        }

        // c/ node selection by cumulative intensity ratio
        double sum = 0.0;
        for (const Scheduler& l : state.lambda) {
            sum += l.front().value;
        }
        if (!(sum > 0.0)) {
            throw NumericError("nonpositive intensity sum at a sampled point");
        }
        const double threshold = rng.uniform() * sum;
        int fired = m - 1;
        double cumulative = 0.0;
        for (int j = 0; j < m; ++j) {
            cumulative += state.lambda[static_cast<std::size_t>(j)].front().value;
            if (threshold <= cumulative) {
                fired = j;
                break;
            }
        }

        // d2/ apply the fired node's kernels (schedulers are already pruned)
        for (const auto& [target, kernel] : net.outgoing(fired)) {
            Scheduler& l = state.lambda[static_cast<std::size_t>(target)];
            for (const auto& [delay, jump] : kernel->steps()) {
                l.insert(Event{t + delay, jump});
            }
        }

        result.times.push_back(t);
        result.marks.push_back(fired);
    }

    result.meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace ppsim
