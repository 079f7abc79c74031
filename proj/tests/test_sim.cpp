#include "doctest.h"

#include "ppsim/gof.hpp"
#include "ppsim/naive.hpp"
#include "ppsim/simulate.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <set>

using namespace ppsim;
using testing::make_constant_net;

TEST_SUITE_BEGIN("simulate");

namespace {

std::vector<double> pooled_rescaled_delays(const SimulationResult& result,
                                           const HawkesNetwork& net) {
    std::vector<double> pooled;
    const auto per_node = result.points_by_node(net.node_count());
    for (int i = 0; i < net.node_count(); ++i) {
        const StepFunction intensity = reconstruct_intensity(per_node, net, i);
        const auto rescaled =
            time_rescale(per_node[static_cast<std::size_t>(i)],
                         [&](double t) { return intensity.integral_to(t); });
        for (double d : delays_of(rescaled)) {
            pooled.push_back(d);
        }
    }
    return pooled;
}

void check_result_invariants(const SimulationResult& result, int node_count, double horizon) {
    double prev = 0.0;
    for (std::size_t k = 0; k < result.times.size(); ++k) {
        CHECK(result.times[k] > prev);
        CHECK(result.times[k] <= horizon);
        CHECK(result.marks[k] >= 0);
        CHECK(result.marks[k] < node_count);
        prev = result.times[k];
    }
}

} // namespace

TEST_CASE("full scan on one Poisson node") {
    const HawkesNetwork net = make_constant_net(1, {3.0}, {});
    RngStream rng(61);
    const SimulationResult result = simulate_fullscan(net, 100.0, rng);
    check_result_invariants(result, 1, 100.0);
    // count within 3 sigma of 300
    CHECK(std::abs(static_cast<double>(result.times.size()) - 300.0) <= 3.0 * std::sqrt(300.0));
    // the full battery holds for a homogeneous process
    const TestReport report = node_gof(result, net, 0);
    for (const auto& entry : report.tests) {
        CHECK(entry.p_value > 0.005);
    }
    CHECK_THROWS_AS(simulate_fullscan(net, 0.0, rng), std::invalid_argument);
}

TEST_CASE("full scan marks follow the intensity ratios") {
    // independent Poisson nodes: P(mark) is exactly nu_i / sum(nu) at all times
    const HawkesNetwork net = make_constant_net(2, {1.0, 2.0}, {});
    RngStream rng(62);
    const SimulationResult result = simulate_fullscan(net, 500.0, rng);
    double mark2 = 0.0;
    for (int mark : result.marks) {
        mark2 += mark == 1 ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(result.marks.size());
    const double fraction = mark2 / n;
    const double sigma = std::sqrt((2.0 / 3.0) * (1.0 / 3.0) / n);
    CHECK(std::abs(fraction - 2.0 / 3.0) <= 3.0 * sigma);

    // three-way selection: chi-squared against the exact ratios (2 dof)
    const HawkesNetwork net3 = make_constant_net(3, {1.0, 2.0, 7.0}, {});
    RngStream rng3(63);
    const SimulationResult r3 = simulate_fullscan(net3, 10000.0, rng3);
    double counts[3] = {0.0, 0.0, 0.0};
    for (int mark : r3.marks) {
        counts[mark] += 1.0;
    }
    const double total = static_cast<double>(r3.marks.size());
    CHECK(total > 50000.0);
    double chi2 = 0.0;
    const double expected[3] = {total * 0.1, total * 0.2, total * 0.7};
    for (int i = 0; i < 3; ++i) {
        chi2 += (counts[i] - expected[i]) * (counts[i] - expected[i]) / expected[i];
    }
    CHECK(chi2 < 9.21); // chi-squared(2) 0.99 quantile
}

TEST_CASE("full scan union spot checks stay tight") {
    const HawkesNetwork net =
        make_constant_net(4, {4.0, 4.0, 4.0, 4.0}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    RngStream rng(64);
    SimOptions options;
    options.check_unions = true;
    const SimulationResult result = simulate_fullscan(net, 50.0, rng, options);
    CHECK(result.meta.debug_checks > 100);
    CHECK(result.meta.debug_max_union_error <= 1e-9);
}

TEST_CASE("local graph touches exactly the children plus the firing node") {
    // the six-node example graph: a point on node 1 (0-based) recomputes {1,2,5}
    const HawkesNetwork net = make_constant_net(
        6, std::vector<double>(6, 10.0), {{0, 1}, {4, 1}, {1, 2}, {1, 5}});
    const DependenceGraph graph = from_kernels(net);
    RngStream rng(65);
    const SimulationResult result = simulate_localgraph(net, graph, 50.0, rng);
    check_result_invariants(result, 6, 50.0);
    CHECK(result.meta.tie_warnings == 0);

    std::uint64_t expected_touched = 0;
    for (int mark : result.marks) {
        std::set<int> touched(graph.children(mark).begin(), graph.children(mark).end());
        touched.insert(mark);
        expected_touched += touched.size();
    }
    CHECK(result.meta.touched_nodes_total == expected_touched);

    // disconnected graph: every event touches exactly one node
    const HawkesNetwork loose = make_constant_net(5, std::vector<double>(5, 2.0), {});
    RngStream rng2(66);
    const SimulationResult r2 = simulate_localgraph(loose, from_kernels(loose), 80.0, rng2);
    CHECK(r2.meta.touched_nodes_total == r2.times.size());
    for (int i = 0; i < 5; ++i) {
        const double count = static_cast<double>(r2.points_by_node(5)[static_cast<std::size_t>(i)].size());
        CHECK(std::abs(count - 160.0) <= 3.0 * std::sqrt(160.0));
    }
}

TEST_CASE("local graph debug mode validates locality from scratch") {
    const HawkesNetwork net = make_constant_net(
        5, std::vector<double>(5, 8.0), {{0, 1}, {1, 2}, {2, 0}, {3, 4}});
    const DependenceGraph graph = from_kernels(net);
    RngStream rng(67);
    SimOptions options;
    options.debug_locality = true;
    const SimulationResult result = simulate_localgraph(net, graph, 20.0, rng, options);
    CHECK(result.times.size() > 500);
    CHECK(result.meta.debug_checks == result.times.size());
    CHECK(result.meta.debug_max_intensity_error <= 1e-9);
    CHECK(result.meta.debug_touched_mismatches == 0);
}

TEST_CASE("graph validation rejects mismatched inputs") {
    const HawkesNetwork net = make_constant_net(3, {1.0, 1.0, 1.0}, {{0, 1}});
    const DependenceGraph wrong_m(2, {{0, 1}});
    RngStream rng(1);
    CHECK_THROWS_AS(simulate_localgraph(net, wrong_m, 1.0, rng), std::invalid_argument);
    const DependenceGraph missing(3, {});
    CHECK_THROWS_AS(simulate_localgraph(net, missing, 1.0, rng), std::invalid_argument);
    const DependenceGraph extra(3, {{0, 1}, {1, 2}});
    CHECK_THROWS_AS(simulate_localgraph(net, extra, 1.0, rng), std::invalid_argument);
}

TEST_CASE("both simulators and the oracle agree in distribution") {
    const HawkesNetwork net = make_constant_net(
        4, {6.0, 5.0, 7.0, 4.0}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
    const DependenceGraph graph = from_kernels(net);

    RngStream rng_full(70), rng_local(71), rng_naive(72);
    const SimulationResult full = simulate_fullscan(net, 200.0, rng_full);
    const SimulationResult local = simulate_localgraph(net, graph, 200.0, rng_local);
    const SimulationResult naive = simulate_naive(net, 200.0, rng_naive);

    check_result_invariants(naive, 4, 200.0);

    const auto d_full = pooled_rescaled_delays(full, net);
    const auto d_local = pooled_rescaled_delays(local, net);
    const auto d_naive = pooled_rescaled_delays(naive, net);
    CHECK(d_full.size() > 3000);
    CHECK(ks_two_sample(d_full, d_local) > 0.005);
    CHECK(ks_two_sample(d_full, d_naive) > 0.005);
    CHECK(ks_two_sample(d_local, d_naive) > 0.005);

    // each sample individually behaves as Exp(1)
    CHECK(ks_test_exp1(d_full) > 0.005);
    CHECK(ks_test_exp1(d_local) > 0.005);
    CHECK(ks_test_exp1(d_naive) > 0.005);
}

TEST_CASE("naive oracle reproduces Poisson counts") {
    const HawkesNetwork net = make_constant_net(3, {2.0, 3.0, 1.0}, {});
    RngStream rng(73);
    const SimulationResult result = simulate_naive(net, 100.0, rng);
    const auto per_node = result.points_by_node(3);
    const double expected[3] = {200.0, 300.0, 100.0};
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(static_cast<double>(per_node[static_cast<std::size_t>(i)].size()) -
                       expected[i]) <= 3.0 * std::sqrt(expected[i]));
    }
}

TEST_CASE("identical seeds reproduce identical runs") {
    const HawkesNetwork net = make_constant_net(3, {5.0, 5.0, 5.0}, {{0, 1}, {1, 2}});
    const DependenceGraph graph = from_kernels(net);
    for (int algo = 0; algo < 3; ++algo) {
        RngStream a(90), b(90);
        const SimulationResult ra = algo == 0   ? simulate_fullscan(net, 50.0, a)
                                    : algo == 1 ? simulate_localgraph(net, graph, 50.0, a)
                                                : simulate_naive(net, 50.0, a);
        const SimulationResult rb = algo == 0   ? simulate_fullscan(net, 50.0, b)
                                    : algo == 1 ? simulate_localgraph(net, graph, 50.0, b)
                                                : simulate_naive(net, 50.0, b);
        CHECK(ra.times == rb.times);
        CHECK(ra.marks == rb.marks);
    }
}

TEST_CASE("zero-rate network terminates early") {
    KernelMap kernels;
    const HawkesNetwork net({0.0, 0.0}, std::move(kernels));
    RngStream rng(5);
    const SimulationResult full = simulate_fullscan(net, 10.0, rng);
    CHECK(full.times.empty());
    CHECK(full.meta.ended_early);
    const SimulationResult local = simulate_localgraph(net, from_kernels(net), 10.0, rng);
    CHECK(local.times.empty());
    CHECK(local.meta.ended_early);
}

TEST_SUITE_END();
