#include "ppsim/simulate.hpp"

#include "ppsim/errors.hpp"
#include "ppsim/history.hpp"
#include "ppsim/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>

namespace ppsim {

namespace {

/// Pending next-point draws: a position-indexed binary min-heap over
/// (time, node), at most one entry per node; nodes whose next point is
/// "never" are absent. Replacing a node's draw updates its entry in place,
/// so no stale entries accumulate. Ordering by (time, node) makes exact-time
/// ties pop lowest-node-first; a surviving tie is counted when the popped
/// time equals the new top's time.
class NextPointQueue {
public:
    explicit NextPointQueue(int node_count)
        : position_(static_cast<std::size_t>(node_count), -1) {}

    void set_next(int node, const std::optional<double>& t) {
        const int at = position_[static_cast<std::size_t>(node)];
        if (!t) {
            if (at >= 0) {
                remove_at(static_cast<std::size_t>(at));
            }
            return;
        }
        if (at >= 0) {
            heap_[static_cast<std::size_t>(at)].time = *t;
            sift(static_cast<std::size_t>(at));
        } else {
            heap_.push_back({*t, node});
            position_[static_cast<std::size_t>(node)] = static_cast<int>(heap_.size() - 1);
            sift_up(heap_.size() - 1);
        }
    }

    std::optional<std::pair<double, int>> pop() {
        if (heap_.empty()) {
            return std::nullopt;
        }
        const Entry top = heap_.front();
        remove_at(0);
        if (!heap_.empty() && heap_.front().time == top.time) {
            ++tie_warnings_;
        }
        return std::make_pair(top.time, top.node);
    }

    std::uint64_t tie_warnings() const noexcept { return tie_warnings_; }

private:
    struct Entry {
        double time;
        int node;
    };

    static bool precedes(const Entry& a, const Entry& b) {
        return a.time < b.time || (a.time == b.time && a.node < b.node);
    }

    void place(std::size_t slot, const Entry& e) {
        heap_[slot] = e;
        position_[static_cast<std::size_t>(e.node)] = static_cast<int>(slot);
    }

    void sift_up(std::size_t slot) {
        Entry moving = heap_[slot];
        while (slot > 0) {
            const std::size_t parent = (slot - 1) / 2;
            if (!precedes(moving, heap_[parent])) {
                break;
            }
            place(slot, heap_[parent]);
            slot = parent;
        }
        place(slot, moving);
    }

    void sift_down(std::size_t slot) {
        Entry moving = heap_[slot];
        while (true) {
            std::size_t child = 2 * slot + 1;
            if (child >= heap_.size()) {
                break;
            }
            if (child + 1 < heap_.size() && precedes(heap_[child + 1], heap_[child])) {
                ++child;
            }
            if (!precedes(heap_[child], moving)) {
                break;
            }
            place(slot, heap_[child]);
            slot = child;
        }
        place(slot, moving);
    }

    void sift(std::size_t slot) {
        if (slot > 0 && precedes(heap_[slot], heap_[(slot - 1) / 2])) {
            sift_up(slot);
        } else {
            sift_down(slot);
        }
    }

    void remove_at(std::size_t slot) {
        position_[static_cast<std::size_t>(heap_[slot].node)] = -1;
        const Entry last = heap_.back();
        heap_.pop_back();
        if (slot < heap_.size()) {
            place(slot, last);
            sift(slot);
        }
    }

    std::vector<Entry> heap_;
    std::vector<int> position_;
    std::uint64_t tie_warnings_ = 0;
};

void check_graph_matches_kernels(const HawkesNetwork& net, const DependenceGraph& graph) {
    if (graph.node_count() != net.node_count()) {
        throw std::invalid_argument("graph/network node count mismatch");
    }
    for (int j = 0; j < net.node_count(); ++j) {
        std::size_t kernel_edges = 0;
        for (const auto& [target, kernel] : net.outgoing(j)) {
            if (kernel->integral() != 0.0) {
                if (!graph.has_edge(j, target)) {
                    throw std::invalid_argument("graph is missing a kernel edge");
                }
                ++kernel_edges;
            }
        }
        if (kernel_edges != graph.children(j).size()) {
            throw std::invalid_argument("graph has edges without kernels");
        }
    }
}

/// From-scratch revalidation of the whole intensity state against the point
/// history (debug mode). Sampling points: the scheduler anchor, every
/// breakpoint, and one point past the last breakpoint.
double max_state_error(const IntensityState& state,
                       const HawkesNetwork& net,
                       const std::vector<std::vector<double>>& points_by_node) {
    double worst = 0.0;
    for (int i = 0; i < net.node_count(); ++i) {
        const Scheduler& l = state.lambda[static_cast<std::size_t>(i)];
        const StepFunction reference = reconstruct_intensity(points_by_node, net, i);
        double last = l.front().time;
        for (const auto& [t, jump] : l) {
            worst = std::max(worst, std::abs(l.evaluate(t) - reference.value(t)));
            last = t;
        }
        const double beyond = last + 1.0;
        worst = std::max(worst, std::abs(l.evaluate(beyond) - reference.value(beyond)));
    }
    return worst;
}

} // namespace

SimulationResult simulate_localgraph(const HawkesNetwork& net,
                                     const DependenceGraph& graph,
                                     double horizon,
                                     RngStream& rng,
                                     const SimOptions& options) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("horizon must be positive");
    }
    check_graph_matches_kernels(net, graph);
    const auto start = std::chrono::steady_clock::now();
    const int m = net.node_count();

    SimulationResult result;
    result.meta.seed = options.seed_label;
    result.meta.horizon = horizon;

    IntensityState state = make_intensity_state(net, 0.0);
    NextPointQueue queue(m);

    std::vector<int> active(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        active[static_cast<std::size_t>(i)] = i;
    }

    std::vector<std::vector<double>> points_by_node;
    std::vector<Scheduler> snapshot;
    if (options.debug_locality) {
        points_by_node.resize(static_cast<std::size_t>(m));
    }

    while (true) {
        ++result.meta.iterations;

        // a/, b/ fresh draws for the active set, in ascending node order
        for (int i : active) {
            queue.set_next(i, get_t_next(state.lambda[static_cast<std::size_t>(i)], rng));
        }

        // c/ earliest pending point
        const auto popped = queue.pop();
        if (!popped) {
            result.meta.ended_early = true;
            break;
        }
        const auto [t, fired] = *popped;
        if (t > horizon) {
            break;
        }
        result.times.push_back(t);
        result.marks.push_back(fired);

        // d/ the fired node and its children are the next active set
        const std::vector<int>& children = graph.children(fired);
        active.assign(children.begin(), children.end());
        const auto pos = std::lower_bound(active.begin(), active.end(), fired);
        if (pos == active.end() || *pos != fired) {
            active.insert(pos, fired);
        }
        result.meta.touched_nodes_total += active.size();

        if (options.debug_locality) {
            snapshot = state.lambda;
            points_by_node[static_cast<std::size_t>(fired)].push_back(t);
        }

        // e/ prune + kernel merge for the active set only
        apply_point(state, net, fired, t, active);

        if (options.debug_locality) {
            ++result.meta.debug_checks;
            result.meta.debug_max_intensity_error = std::max(
                result.meta.debug_max_intensity_error, max_state_error(state, net, points_by_node));
            for (int i = 0; i < m; ++i) {
                const bool touched =
                    std::binary_search(active.begin(), active.end(), i);
                const bool changed =
                    !(snapshot[static_cast<std::size_t>(i)] == state.lambda[static_cast<std::size_t>(i)]);
                if (changed && !touched) {
                    ++result.meta.debug_touched_mismatches;
                }
            }
        }
    }

    result.meta.tie_warnings = queue.tie_warnings();
    result.meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace ppsim
