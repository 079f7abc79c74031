#include "doctest.h"

#include "ppsim/errors.hpp"
#include "ppsim/gof.hpp"
#include "ppsim/simulate.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <numeric>

using namespace ppsim;
using testing::make_constant_net;

TEST_SUITE_BEGIN("gof");

TEST_CASE("time rescaling basics") {
    const std::vector<double> points{0.5, 1.0, 2.5};
    const auto linear = time_rescale(points, [](double t) { return 4.0 * t; });
    CHECK(linear == std::vector<double>{2.0, 4.0, 10.0});

    CHECK(time_rescale({}, [](double t) { return t; }).empty());

    // lambda = 1 on [0,2), 3 afterwards: Lambda(1)=1, Lambda(2)=2, Lambda(4)=8
    const StepFunction lam(0.0, 1.0, {{2.0, 2.0}});
    const auto rescaled =
        time_rescale({1.0, 2.0, 4.0}, [&](double t) { return lam.integral_to(t); });
    CHECK(rescaled[0] == doctest::Approx(1.0));
    CHECK(rescaled[1] == doctest::Approx(2.0));
    CHECK(rescaled[2] == doctest::Approx(8.0));

    CHECK_THROWS_AS(time_rescale({2.0, 1.0}, [](double t) { return t; }),
                    std::invalid_argument);
    CHECK_THROWS_AS(time_rescale({1.0, 2.0}, [](double t) { return -t; }),
                    std::invalid_argument);

    CHECK(delays_of({1.0, 3.0, 6.0}) == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("Kolmogorov p-values") {
    CHECK(kolmogorov_p(0.0) == 1.0);
    CHECK(kolmogorov_p(1.36) == doctest::Approx(0.0494).epsilon(0.01));
    CHECK(kolmogorov_p(10.0) < 1e-80);
    CHECK_THROWS_AS(kolmogorov_p(-1.0), std::invalid_argument);

    // exact uniform grid i/(n+1): D = 1/(n+1), p near 1
    std::vector<double> grid;
    for (int i = 1; i <= 100; ++i) {
        grid.push_back(static_cast<double>(i) / 101.0);
    }
    double d = 0.0;
    const double p = ks_test_uniform(grid, 1.0, &d);
    CHECK(d == doctest::Approx(1.0 / 101.0).epsilon(1e-12));
    CHECK(p > 0.99);

    CHECK_THROWS_AS(ks_test_uniform({0.1, 0.2}, 1.0), InsufficientSampleError);
    CHECK_THROWS_AS(ks_test_exp1({0.1, 0.2}), InsufficientSampleError);
}

TEST_CASE("two-sample KS separates unlike samples and accepts like ones") {
    RngStream rng(31);
    std::vector<double> a, b, c;
    for (int k = 0; k < 4000; ++k) {
        a.push_back(-std::log(rng.uniform()));
        b.push_back(-std::log(rng.uniform()));
        c.push_back(2.0 * -std::log(rng.uniform()));
    }
    CHECK(ks_two_sample(a, b) > 0.01);
    CHECK(ks_two_sample(a, c) < 1e-6);
}

TEST_CASE("autocorrelation test") {
    RngStream rng(33);
    std::vector<double> iid;
    for (int k = 0; k < 10000; ++k) {
        iid.push_back(-std::log(rng.uniform()));
    }
    for (int lag = 1; lag <= 9; ++lag) {
        CHECK(autocorr_test(iid, lag) > 0.003);
    }

    std::vector<double> alternating;
    for (int k = 0; k < 100; ++k) {
        alternating.push_back(k % 2 == 0 ? 1.0 : 3.0);
    }
    CHECK(autocorr_test(alternating, 1) < 1e-10);

    CHECK_THROWS_AS(autocorr_test(std::vector<double>(50, 2.0), 1), DegenerateSampleError);
    CHECK_THROWS_AS(autocorr_test({1.0, 2.0, 1.5}, 1), InsufficientSampleError);
    CHECK_THROWS_AS(autocorr_test(iid, 0), std::invalid_argument);
}

TEST_CASE("p-value uniformity aggregation") {
    std::vector<double> grid;
    for (int i = 1; i <= 200; ++i) {
        grid.push_back(static_cast<double>(i) / 201.0);
    }
    CHECK(ks_of_ks(grid) > 0.99);

    CHECK(ks_of_ks(std::vector<double>(200, 0.5)) < 1e-6);
    CHECK_THROWS_AS(ks_of_ks(std::vector<double>(49, 0.5)), InsufficientSampleError);
}

TEST_CASE("pipeline p-values are uniform on homogeneous Poisson input") {
    const HawkesNetwork net = make_constant_net(1, {5.0}, {});
    std::vector<double> p_exp, p_uni, p_lag1, p_lag5;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RngStream rng = RngStream::derive(555, seed);
        const SimulationResult run = simulate_fullscan(net, 60.0, rng);
        const TestReport report = node_gof(run, net, 0);
        p_exp.push_back(report.find("ks_exp1")->p_value);
        p_uni.push_back(report.find("ks_uniform")->p_value);
        p_lag1.push_back(report.find("autocorr_lag1")->p_value);
        p_lag5.push_back(report.find("autocorr_lag5")->p_value);
    }
    CHECK(ks_of_ks(p_exp) > 0.01);
    CHECK(ks_of_ks(p_uni) > 0.01);
    CHECK(ks_of_ks(p_lag1) > 0.01);
    CHECK(ks_of_ks(p_lag5) > 0.01);
}

TEST_CASE("martingale residuals on hand-checkable cases") {
    // one point at t=1 for Poisson(1) on [0,2]: X1 = 1 - 2 = -1
    const HawkesNetwork unit = make_constant_net(1, {1.0}, {});
    SimulationResult single;
    single.times = {1.0};
    single.marks = {0};
    single.meta.horizon = 2.0;
    const MartingaleStats stats = martingale_residuals(single, unit, 0);
    CHECK(stats.x_spontaneous == -1.0);
    // the only window statistic uses the node's own single point:
    // dN side excludes the point itself, dLambda side integrates 1*0.02
    CHECK(stats.x_recent[0] == doctest::Approx(-0.02).epsilon(1e-12));
    CHECK(stats.x_older[0] == doctest::Approx(-0.02).epsilon(1e-12));

    // empty weight: a node with no points on the weighting side gives X = 0
    const HawkesNetwork pair = make_constant_net(2, {1.0, 1.0}, {});
    SimulationResult lone;
    lone.times = {1.0};
    lone.marks = {0};
    lone.meta.horizon = 2.0;
    const MartingaleStats lone_stats = martingale_residuals(lone, pair, 0);
    CHECK(lone_stats.x_recent[1] == 0.0);
    CHECK(lone_stats.x_older[1] == 0.0);

    // two nodes: node 1 fired at 0.99, node 0 at 1.0; window [t-0.02,t)
    SimulationResult two;
    two.times = {0.99, 1.0};
    two.marks = {1, 0};
    two.meta.horizon = 2.0;
    const MartingaleStats cross = martingale_residuals(two, pair, 0);
    // dN = 1 (0.99 inside [0.98,1.0)), dLambda = 1.0 * 0.02
    CHECK(cross.x_recent[1] == doctest::Approx(1.0 - 0.02).epsilon(1e-12));

    CHECK_THROWS_AS(martingale_residuals(two, pair, 5), std::invalid_argument);
    CHECK_THROWS_AS(martingale_residuals(two, pair, 0, 0.04, 0.02), std::invalid_argument);
}

TEST_CASE("exact psi-weighted compensator matches a grid-aligned Riemann sum") {
    const HawkesNetwork net =
        make_constant_net(4, {6.0, 6.0, 6.0, 6.0}, {{0, 1}, {1, 2}, {2, 3}});
    const DependenceGraph graph = from_kernels(net);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        RngStream rng(seed);
        SimulationResult run = simulate_localgraph(net, graph, 10.0, rng);
        REQUIRE(run.times.size() > 100);
        // snap every point onto the 1e-5 grid so the Riemann sum sees no
        // straddled breakpoints; kernel breaks (0.02) already align
        const double h = 1e-5;
        for (double& t : run.times) {
            t = std::round(t / h) * h;
        }
        const auto per_node = run.points_by_node(4);
        const StepFunction lam = reconstruct_intensity(per_node, net, 2);

        const int j = 1; // weight by node 1's recent window
        const auto& pts = per_node[static_cast<std::size_t>(j)];
        auto psi = [&](double t) {
            const auto lo = std::lower_bound(pts.begin(), pts.end(), t - 0.02);
            const auto hi = std::lower_bound(pts.begin(), pts.end(), t);
            return static_cast<double>(hi - lo);
        };
        double riemann = 0.0;
        const auto steps = static_cast<std::int64_t>(std::llround(10.0 / h));
        for (std::int64_t k = 0; k < steps; ++k) {
            // midpoints never sit on the snapped breakpoints
            const double t = (static_cast<double>(k) + 0.5) * h;
            riemann += psi(t) * lam.value(t) * h;
        }

        const MartingaleStats stats = martingale_residuals(run, net, 2);
        double dn = 0.0;
        for (double p : per_node[2]) {
            dn += psi(p);
        }
        const double exact = dn - stats.x_recent[static_cast<std::size_t>(j)];
        CHECK(exact == doctest::Approx(riemann).epsilon(1e-6));
    }
}

TEST_SUITE_END();
