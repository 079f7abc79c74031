#include "ppsim/gof.hpp"

#include "ppsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ppsim {

namespace {

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

/// One-sample KS statistic for an already sorted sample against cdf values.
double ks_statistic_sorted(const std::vector<double>& cdf_at_sample) {
    const double n = static_cast<double>(cdf_at_sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < cdf_at_sample.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / n - cdf_at_sample[i];
        const double lo = cdf_at_sample[i] - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    return d;
}

} // namespace

const TestReport::Entry* TestReport::find(const std::string& name) const {
    for (const Entry& e : tests) {
        if (e.name == name) {
            return &e;
        }
    }
    return nullptr;
}

std::vector<double> time_rescale(const std::vector<double>& points,
                                 const std::function<double(double)>& cumulative_intensity) {
    std::vector<double> out;
    out.reserve(points.size());
    double prev_point = -std::numeric_limits<double>::infinity();
    double prev_value = -std::numeric_limits<double>::infinity();
    for (double t : points) {
        if (t <= prev_point) {
            throw std::invalid_argument("points are not strictly increasing");
        }
        const double v = cumulative_intensity(t);
        if (v < prev_value) {
            throw std::invalid_argument("cumulative intensity is not nondecreasing");
        }
        out.push_back(v);
        prev_point = t;
        prev_value = v;
    }
    return out;
}

std::vector<double> delays_of(const std::vector<double>& points) {
    std::vector<double> out;
    out.reserve(points.size());
    double prev = 0.0;
    for (double t : points) {
        out.push_back(t - prev);
        prev = t;
    }
    return out;
}

double kolmogorov_p(double x) {
    if (!(x >= 0.0)) {
        throw std::invalid_argument("Kolmogorov statistic must be >= 0");
    }
    if (x < 0.05) {
        return 1.0; // series terms decay too slowly; true value is 1 - O(1e-8)
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1;; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += sign * term;
        if (term < 1e-12) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_test_exp1(const std::vector<double>& delays, double* statistic) {
    if (delays.size() < 5) {
        throw InsufficientSampleError("KS test needs at least 5 observations");
    }
    std::vector<double> sorted = delays;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cdf(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cdf[i] = 1.0 - std::exp(-sorted[i]);
    }
    const double d = ks_statistic_sorted(cdf);
    if (statistic != nullptr) {
        *statistic = d;
    }
    return kolmogorov_p(std::sqrt(static_cast<double>(sorted.size())) * d);
}

double ks_test_uniform(const std::vector<double>& points, double horizon, double* statistic) {
    if (points.size() < 5) {
        throw InsufficientSampleError("KS test needs at least 5 observations");
    }
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("horizon must be positive");
    }
    std::vector<double> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cdf(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cdf[i] = std::clamp(sorted[i] / horizon, 0.0, 1.0);
    }
    const double d = ks_statistic_sorted(cdf);
    if (statistic != nullptr) {
        *statistic = d;
    }
    return kolmogorov_p(std::sqrt(static_cast<double>(sorted.size())) * d);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b, double* statistic) {
    if (a.size() < 5 || b.size() < 5) {
        throw InsufficientSampleError("two-sample KS needs at least 5 observations per sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] <= b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    if (statistic != nullptr) {
        *statistic = d;
    }
    const double n_eff = na * nb / (na + nb);
    return kolmogorov_p(std::sqrt(n_eff) * d);
}

double autocorr_test(const std::vector<double>& delays, int lag, double* statistic) {
    if (lag < 1) {
        throw std::invalid_argument("lag must be >= 1");
    }
    const std::size_t n = delays.size();
    if (n <= static_cast<std::size_t>(lag) + 5) {
        throw InsufficientSampleError("autocorrelation test needs n > lag + 5");
    }
    double mean = 0.0;
    for (double d : delays) {
        mean += d;
    }
    mean /= static_cast<double>(n);
    double denom = 0.0;
    for (double d : delays) {
        denom += (d - mean) * (d - mean);
    }
    if (denom == 0.0) {
        throw DegenerateSampleError("autocorrelation of a constant sample is undefined");
    }
    double num = 0.0;
    for (std::size_t k = 0; k + static_cast<std::size_t>(lag) < n; ++k) {
        num += (delays[k] - mean) * (delays[k + static_cast<std::size_t>(lag)] - mean);
    }
    const double r = num / denom;
    const double z = r * std::sqrt(static_cast<double>(n));
    if (statistic != nullptr) {
        *statistic = z;
    }
    return normal_two_sided_p(z);
}

double ks_of_ks(const std::vector<double>& p_values, double* statistic) {
    if (p_values.size() < 50) {
        throw InsufficientSampleError("uniformity check needs at least 50 p-values");
    }
    return ks_test_uniform(p_values, 1.0, statistic);
}

TestReport node_gof(const SimulationResult& result,
                    const HawkesNetwork& net,
                    int node,
                    int max_lag) {
    const auto per_node = result.points_by_node(net.node_count());
    const StepFunction intensity = reconstruct_intensity(per_node, net, node);
    const auto rescaled = time_rescale(
        per_node.at(static_cast<std::size_t>(node)),
        [&intensity](double t) { return intensity.integral_to(t); });
    const auto d = delays_of(rescaled);

    TestReport report;
    TestReport::Entry entry;

    entry.name = "ks_exp1";
    entry.n = d.size();
    entry.p_value = ks_test_exp1(d, &entry.statistic);
    report.tests.push_back(entry);

    entry.name = "ks_uniform";
    entry.n = rescaled.size();
    entry.p_value = ks_test_uniform(rescaled, intensity.integral_to(result.meta.horizon),
                                    &entry.statistic);
    report.tests.push_back(entry);

    for (int lag = 1; lag <= max_lag; ++lag) {
        entry.name = "autocorr_lag" + std::to_string(lag);
        entry.n = d.size();
        entry.p_value = autocorr_test(d, lag, &entry.statistic);
        report.tests.push_back(entry);
    }
    return report;
}

namespace {

/// Exact integral over [0, horizon] of psi * lambda where psi is the window
/// count with the given jump list (sorted, +1/-1) and lambda is a step
/// function; both stay constant between merged breakpoints.
double integrate_window_against(const StepFunction& lambda,
                                const std::vector<std::pair<double, double>>& psi_jumps,
                                double horizon) {
    double integral = 0.0;
    double cursor = 0.0;
    double psi = 0.0;
    std::size_t j = 0;
    std::size_t li = 0; // lambda.times()[li] <= cursor < times()[li+1]
    const auto& lt = lambda.times();
    while (cursor < horizon) {
        double next = horizon;
        if (li + 1 < lt.size() && lt[li + 1] < next) {
            next = lt[li + 1];
        }
        if (j < psi_jumps.size() && psi_jumps[j].first < next) {
            next = psi_jumps[j].first;
        }
        if (next > cursor) {
            integral += psi * lambda.levels()[li] * (next - cursor);
            cursor = next;
        }
        while (li + 1 < lt.size() && lt[li + 1] <= cursor) {
            ++li;
        }
        while (j < psi_jumps.size() && psi_jumps[j].first <= cursor) {
            psi += psi_jumps[j].second;
            ++j;
        }
    }
    return integral;
}

/// Count of points in the half-open window [lo, hi).
double window_count(const std::vector<double>& points, double lo, double hi) {
    const auto b = std::lower_bound(points.begin(), points.end(), lo);
    const auto e = std::lower_bound(points.begin(), points.end(), hi);
    return static_cast<double>(e - b);
}

} // namespace

MartingaleStats martingale_residuals(const SimulationResult& result,
                                     const HawkesNetwork& net,
                                     int node,
                                     double w1,
                                     double w2) {
    if (node < 0 || node >= net.node_count()) {
        throw std::invalid_argument("node index out of range");
    }
    if (!(w2 > w1) || !(w1 > 0.0)) {
        throw std::invalid_argument("windows must satisfy 0 < w1 < w2");
    }
    const double horizon = result.meta.horizon;
    const int m = net.node_count();
    const auto per_node = result.points_by_node(m);
    const auto& own = per_node.at(static_cast<std::size_t>(node));
    const StepFunction intensity = reconstruct_intensity(per_node, net, node);

    MartingaleStats stats;
    stats.x_spontaneous = static_cast<double>(own.size()) - intensity.integral_to(horizon);
    stats.x_recent.resize(static_cast<std::size_t>(m), 0.0);
    stats.x_older.resize(static_cast<std::size_t>(m), 0.0);

    std::vector<std::pair<double, double>> jumps;
    for (int j = 0; j < m; ++j) {
        const auto& pts = per_node[static_cast<std::size_t>(j)];

        // psi(t) = N_j([t-w1, t)) jumps +1 at each point, -1 a window later
        jumps.clear();
        for (double p : pts) {
            jumps.emplace_back(p, 1.0);
            jumps.emplace_back(p + w1, -1.0);
        }
        std::sort(jumps.begin(), jumps.end());
        double dn = 0.0;
        for (double p : own) {
            dn += window_count(pts, p - w1, p);
        }
        stats.x_recent[static_cast<std::size_t>(j)] =
            dn - integrate_window_against(intensity, jumps, horizon);

        // psi(t) = N_j([t-w2, t-w1))
        jumps.clear();
        for (double p : pts) {
            jumps.emplace_back(p + w1, 1.0);
            jumps.emplace_back(p + w2, -1.0);
        }
        std::sort(jumps.begin(), jumps.end());
        dn = 0.0;
        for (double p : own) {
            dn += window_count(pts, p - w2, p - w1);
        }
        stats.x_older[static_cast<std::size_t>(j)] =
            dn - integrate_window_against(intensity, jumps, horizon);
    }
    return stats;
}

} // namespace ppsim
