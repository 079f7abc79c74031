#pragma once

#include "ppsim/hawkes.hpp"
#include "ppsim/history.hpp"
#include "ppsim/simulate.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ppsim {

/// Outcome of one validation battery: p-values with their underlying
/// statistics and sample sizes, keyed by test name.
struct TestReport {
    struct Entry {
        std::string name;
        double p_value = 0.0;
        double statistic = 0.0;
        std::size_t n = 0;
    };
    std::vector<Entry> tests;

    const Entry* find(const std::string& name) const;
};

/// {Lambda(T_i)}: for a correctly specified model the rescaled points form a
/// rate-1 Poisson process. Throws std::invalid_argument when the input is
/// not increasing or the rescaled output fails to be nondecreasing.
std::vector<double> time_rescale(const std::vector<double>& points,
                                 const std::function<double(double)>& cumulative_intensity);

/// Consecutive delays of a point sequence, including the first point as a
/// delay from time zero.
std::vector<double> delays_of(const std::vector<double>& points);

/// Survival function of the Kolmogorov distribution evaluated at
/// x = sqrt(n) * D, by the alternating series truncated below 1e-12.
double kolmogorov_p(double x);

/// One-sample KS p-value of `delays` against Exp(1). Needs n >= 5.
double ks_test_exp1(const std::vector<double>& delays, double* statistic = nullptr);

/// One-sample KS p-value of `points` against U[0, horizon]. Needs n >= 5.
double ks_test_uniform(const std::vector<double>& points, double horizon,
                       double* statistic = nullptr);

/// Two-sample KS p-value (asymptotic, effective size nm/(n+m)).
double ks_two_sample(std::vector<double> a, std::vector<double> b,
                     double* statistic = nullptr);

/// Tests the lag-`lag` sample autocorrelation of `delays` against 0 via the
/// normal approximation z = r*sqrt(n). Needs n > lag + 5 and a sample with
/// variation (DegenerateSampleError otherwise).
double autocorr_test(const std::vector<double>& delays, int lag, double* statistic = nullptr);

/// KS uniformity test applied to a sample of p-values. Needs >= 50 of them.
double ks_of_ks(const std::vector<double>& p_values, double* statistic = nullptr);

/// Full battery for one node of a simulated network: time-rescaling through
/// an intensity rebuilt from the point history, then the delay-exponentiality
/// test, the uniformity test and the delay autocorrelation tests for lags
/// 1..max_lag.
TestReport node_gof(const SimulationResult& result,
                    const HawkesNetwork& net,
                    int node,
                    int max_lag = 9);

/// Martingale residuals X = integral of psi d(N - Lambda) for one node:
/// x_spontaneous uses psi = 1; x_recent[j] uses the count of node j's points
/// in [t - w1, t); x_older[j] uses the count in [t - w2, t - w1).
/// Both integrals are computed exactly (everything is piecewise constant).
struct MartingaleStats {
    double x_spontaneous = 0.0;
    std::vector<double> x_recent;
    std::vector<double> x_older;
};

MartingaleStats martingale_residuals(const SimulationResult& result,
                                     const HawkesNetwork& net,
                                     int node,
                                     double w1 = 0.02,
                                     double w2 = 0.04);

} // namespace ppsim
