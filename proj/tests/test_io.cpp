#include "doctest.h"

#include "ppsim/io.hpp"
#include "test_helpers.hpp"

#include <sstream>

using namespace ppsim;
using testing::make_constant_net;

TEST_SUITE_BEGIN("io");

TEST_CASE("doubles render in round-trip form") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-7) == "-2.5e-07");
    for (double x : {1.0 / 3.0, 0.02, 12345.678901234567, 1e-300}) {
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("network file round trip is byte identical") {
    KernelMap kernels;
    kernels.emplace(std::make_pair(0, 2), InteractionKernel::constant(5.0, 0.02));
    kernels.emplace(std::make_pair(2, 1),
                    InteractionKernel(Scheduler{{0.0, 1.5}, {0.25, -0.5}, {0.75, -1.0}}));
    const HawkesNetwork net({10.0, 0.125, 7.5}, std::move(kernels));

    std::ostringstream first;
    write_network(first, net);
    std::istringstream back(first.str());
    const HawkesNetwork reread = read_network(back);

    CHECK(reread.node_count() == 3);
    CHECK(reread.nu() == net.nu());
    REQUIRE(reread.kernel(0, 2) != nullptr);
    CHECK(reread.kernel(0, 2)->integral() == net.kernel(0, 2)->integral());
    REQUIRE(reread.kernel(2, 1) != nullptr);
    CHECK(reread.kernel(2, 1)->steps() == net.kernel(2, 1)->steps());

    std::ostringstream second;
    write_network(second, reread);
    CHECK(first.str() == second.str());

    std::istringstream junk("nonsense 1 2\n");
    CHECK_THROWS_AS(read_network(junk), std::invalid_argument);
}

TEST_CASE("graph file round trip with comments") {
    const EdgeList edges{{0, 1}, {4, 1}, {1, 5}};
    std::ostringstream out;
    write_graph(out, 6, edges);
    CHECK(out.str() == "M 6\n1 2\n5 2\n2 6\n");

    std::istringstream in("# a comment\nM 6\n1 2 # trailing note\n5 2\n2 6\n");
    const auto [m, reread] = read_graph(in);
    CHECK(m == 6);
    CHECK(reread == edges);

    std::istringstream missing("1 2\n");
    CHECK_THROWS_AS(read_graph(missing), std::invalid_argument);
}

TEST_CASE("points csv round trip keeps bits and order") {
    SimulationResult result;
    result.times = {0.12345678901234567, 1.0 / 3.0, 2.5};
    result.marks = {4, 0, 17};
    std::ostringstream out;
    write_points_csv(out, result);
    const std::string text = out.str();
    CHECK(text.rfind("time,node\n", 0) == 0);

    std::istringstream in(text);
    const SimulationResult reread = read_points_csv(in);
    CHECK(reread.times == result.times);
    CHECK(reread.marks == result.marks);

    std::istringstream empty("");
    CHECK_THROWS_AS(read_points_csv(empty), std::invalid_argument);
}

TEST_CASE("gof report rows") {
    TestReport report;
    report.tests.push_back({"ks_exp1", 0.25, 0.1, 100});
    report.tests.push_back({"autocorr_lag1", 0.5, -1.0, 99});
    std::ostringstream out;
    write_report_csv(out, report, 4);
    CHECK(out.str() == "test,node,p_value\nks_exp1,5,0.25\nautocorr_lag1,5,0.5\n");
}

TEST_SUITE_END();
