#include "ppsim/hawkes.hpp"

#include "ppsim/errors.hpp"
#include "ppsim/sampling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ppsim {

namespace {

constexpr int kPowerIterationCap = 100000;
constexpr double kPowerIterationTol = 1e-10;

Eigen::MatrixXd to_eigen(const Matrix& h) {
    const auto n = static_cast<Eigen::Index>(h.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(h[i].size()) != n) {
            throw std::invalid_argument("interaction matrix is not square");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = h[i][j];
        }
    }
    return m;
}

} // namespace

InteractionKernel::InteractionKernel(Scheduler steps) : steps_(std::move(steps)) {
    if (steps_.empty()) {
        throw std::invalid_argument("interaction kernel has no breakpoints");
    }
    if (steps_.front().time < 0.0) {
        throw std::invalid_argument("interaction kernel starts before delay 0");
    }
    double level = 0.0;
    double prev_time = 0.0;
    bool first = true;
    for (const auto& [t, jump] : steps_) {
        if (!first) {
            integral_ += level * (t - prev_time);
        }
        level += jump;
        if (level < -kIntensityTolerance) {
            throw std::invalid_argument("interaction kernel dips below zero");
        }
        prev_time = t;
        first = false;
    }
    if (std::abs(level) > 1e-9) {
        throw std::invalid_argument("interaction kernel does not close back to level 0");
    }
    support_end_ = prev_time;
}

InteractionKernel InteractionKernel::constant(double level, double support) {
    if (!(support > 0.0)) {
        throw std::invalid_argument("kernel support must be positive");
    }
    return InteractionKernel(Scheduler{{0.0, level}, {support, -level}});
}

namespace {

// Iterative Tarjan over the support graph (edge j -> i iff h[i][j] != 0).
std::vector<std::vector<int>> strongly_connected_components(const Matrix& h) {
    const int n = static_cast<int>(h.size());
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0.0) {
                succ[static_cast<std::size_t>(j)].push_back(i);
            }
        }
    }
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    std::vector<std::vector<int>> components;
    int next_index = 0;

    struct Frame {
        int node;
        std::size_t child;
    };
    std::vector<Frame> frames;
    for (int start = 0; start < n; ++start) {
        if (index[static_cast<std::size_t>(start)] != -1) {
            continue;
        }
        frames.push_back({start, 0});
        while (!frames.empty()) {
            auto& [node, child] = frames.back();
            const auto u = static_cast<std::size_t>(node);
            if (child == 0) {
                index[u] = low[u] = next_index++;
                stack.push_back(node);
                on_stack[u] = true;
            }
            if (child < succ[u].size()) {
                const int v = succ[u][child++];
                const auto vu = static_cast<std::size_t>(v);
                if (index[vu] == -1) {
                    frames.push_back({v, 0});
                } else if (on_stack[vu]) {
                    low[u] = std::min(low[u], index[vu]);
                }
            } else {
                if (low[u] == index[u]) {
                    std::vector<int> component;
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = false;
                        component.push_back(w);
                        if (w == node) {
                            break;
                        }
                    }
                    components.push_back(std::move(component));
                }
                frames.pop_back();
                if (!frames.empty()) {
                    const auto parent = static_cast<std::size_t>(frames.back().node);
                    low[parent] = std::min(low[parent], low[u]);
                }
            }
        }
    }
    return components;
}

// Period of an irreducible block: gcd of (depth(u) + 1 - depth(v)) over its
// edges, from a BFS rooted anywhere in the block.
int block_period(const Matrix& sub) {
    const int n = static_cast<int>(sub.size());
    std::vector<int> depth(static_cast<std::size_t>(n), -1);
    std::vector<int> queue{0};
    depth[0] = 0;
    std::size_t head = 0;
    int gcd = 0;
    while (head < queue.size()) {
        const int u = queue[head++];
        for (int v = 0; v < n; ++v) {
            if (sub[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] == 0.0) {
                continue;
            }
            if (depth[static_cast<std::size_t>(v)] == -1) {
                depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
            const int slack =
                depth[static_cast<std::size_t>(u)] + 1 - depth[static_cast<std::size_t>(v)];
            gcd = std::gcd(gcd, std::abs(slack));
        }
    }
    return std::max(1, gcd);
}

// Power iteration on one irreducible block. The Perron root of an
// irreducible nonnegative matrix is simple, so the period-length geometric
// mean of the l1 norm ratios converges geometrically.
double block_radius(const Matrix& sub) {
    const std::size_t n = sub.size();
    if (n == 1) {
        return sub[0][0];
    }
    const int period = block_period(sub);
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n, 0.0);
    std::vector<double> ratios(static_cast<std::size_t>(period), 0.0);
    double prev_estimate = -1.0;
    for (int iter = 0; iter < kPowerIterationCap; ++iter) {
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            const auto& row = sub[i];
            for (std::size_t j = 0; j < n; ++j) {
                acc += row[j] * x[j];
            }
            y[i] = acc;
            norm += acc;
        }
        if (norm == 0.0) {
            return 0.0;
        }
        ratios[static_cast<std::size_t>(iter % period)] = norm; // x has |x|_1 = 1
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = y[i] / norm;
        }
        if (iter + 1 >= period) {
            double log_sum = 0.0;
            for (double r : ratios) {
                log_sum += std::log(r);
            }
            const double estimate = std::exp(log_sum / static_cast<double>(period));
            if (prev_estimate >= 0.0 &&
                std::abs(estimate - prev_estimate) <=
                    kPowerIterationTol * std::max(estimate, 1e-300)) {
                return estimate;
            }
            prev_estimate = estimate;
        }
    }
    throw NumericError("power iteration did not converge");
}

} // namespace

double spectral_radius(const Matrix& h) {
    const std::size_t n = h.size();
    if (n == 0) {
        return 0.0;
    }
    for (const auto& row : h) {
        if (row.size() != n) {
            throw std::invalid_argument("spectral_radius needs a square matrix");
        }
        for (double x : row) {
            if (x < 0.0 || !std::isfinite(x)) {
                throw std::invalid_argument("spectral_radius needs a nonnegative matrix");
            }
        }
    }
    // The spectrum of a nonnegative matrix is the union over the strongly
    // connected components, and within an irreducible component the Perron
    // root is simple; iterating per component keeps the convergence
    // geometric where whole-matrix norm ratios can decay only harmonically.
    double radius = 0.0;
    for (const auto& component : strongly_connected_components(h)) {
        if (component.size() == 1) {
            const auto u = static_cast<std::size_t>(component.front());
            radius = std::max(radius, h[u][u]);
            continue;
        }
        Matrix sub(component.size(), std::vector<double>(component.size(), 0.0));
        for (std::size_t a = 0; a < component.size(); ++a) {
            for (std::size_t b = 0; b < component.size(); ++b) {
                sub[a][b] = h[static_cast<std::size_t>(component[a])]
                             [static_cast<std::size_t>(component[b])];
            }
        }
        radius = std::max(radius, block_radius(sub));
    }
    return radius;
}

std::vector<double> mean_intensity(const Matrix& h, const std::vector<double>& nu) {
    const auto n = static_cast<Eigen::Index>(nu.size());
    if (static_cast<Eigen::Index>(h.size()) != n) {
        throw std::invalid_argument("mean_intensity: dimension mismatch");
    }
    if (spectral_radius(h) >= 1.0) {
        throw StationarityError("spectral radius of H is >= 1");
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - to_eigen(h);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        b(i) = nu[i];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::VectorXd m = lu.solve(b);
    if (!m.allFinite()) {
        throw StationarityError("singular stationarity system");
    }
    return std::vector<double>(m.data(), m.data() + n);
}

BalanceResult balance_rates(const Matrix& h, const std::vector<double>& target_m) {
    const std::size_t n = target_m.size();
    if (h.size() != n) {
        throw std::invalid_argument("balance_rates: dimension mismatch");
    }
    BalanceResult out;
    out.nu.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = target_m[i];
        for (std::size_t j = 0; j < n; ++j) {
            acc -= h[i][j] * target_m[j];
        }
        out.nu[i] = acc;
        if (acc < 0.0 && out.feasible) {
            out.feasible = false;
            out.first_negative = static_cast<int>(i);
        }
    }
    return out;
}

HawkesNetwork::HawkesNetwork(std::vector<double> nu, KernelMap kernels)
    : nu_(std::move(nu)), kernels_(std::move(kernels)) {
    const int m = node_count();
    if (m == 0) {
        throw std::invalid_argument("network needs at least one node");
    }
    for (double v : nu_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("spontaneous rates must be finite and >= 0");
        }
    }
    h_.assign(m, std::vector<double>(m, 0.0));
    r_.assign(m, std::vector<double>(m, 0.0));
    outgoing_.assign(m, {});
    for (const auto& [edge, kernel] : kernels_) {
        const auto [source, target] = edge;
        if (source < 0 || source >= m || target < 0 || target >= m) {
            throw std::invalid_argument("kernel edge out of range");
        }
        h_[target][source] = kernel.integral();
        r_[target][source] = kernel.integral() != 0.0 ? 1.0 : 0.0;
        outgoing_[source].emplace_back(target, &kernel);
        double level = 0.0;
        for (const auto& [t, jump] : kernel.steps()) {
            level += jump;
            max_level_ = std::max(max_level_, level);
        }
        max_support_ = std::max(max_support_, kernel.support_end());
    }
    for (auto& edges : outgoing_) {
        std::sort(edges.begin(), edges.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    radius_ = spectral_radius(h_);
    if (radius_ >= 1.0) {
        throw StationarityError("spectral radius of H is " + std::to_string(radius_));
    }
}

const InteractionKernel* HawkesNetwork::kernel(int source, int target) const {
    auto it = kernels_.find({source, target});
    return it == kernels_.end() ? nullptr : &it->second;
}

std::span<const std::pair<int, const InteractionKernel*>> HawkesNetwork::outgoing(int source) const {
    return outgoing_.at(static_cast<std::size_t>(source));
}

IntensityState make_intensity_state(const HawkesNetwork& net, double t0) {
    IntensityState state;
    state.lambda.reserve(static_cast<std::size_t>(net.node_count()));
    for (int i = 0; i < net.node_count(); ++i) {
        state.lambda.push_back(Scheduler{{t0, net.nu()[static_cast<std::size_t>(i)]}});
    }
    return state;
}

void apply_point(IntensityState& state,
                 const HawkesNetwork& net,
                 int source,
                 double t,
                 std::span<const int> targets) {
    for (int target : targets) {
        Scheduler& l = state.lambda.at(static_cast<std::size_t>(target));
        if (l.empty() || t < l.front().time) {
            throw CausalityError("point at t=" + std::to_string(t) +
                                 " precedes the scheduler anchor of node " + std::to_string(target));
        }
        l.prune_piecewise(t);
        if (const InteractionKernel* k = net.kernel(source, target)) {
            for (const auto& [delay, jump] : k->steps()) {
                l.insert(Event{t + delay, jump});
            }
        }
    }
}

} // namespace ppsim
