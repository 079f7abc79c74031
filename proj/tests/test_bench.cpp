#include "doctest.h"

#include "ppsim/bench.hpp"
#include "ppsim/errors.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <sstream>

using namespace ppsim;
using testing::make_constant_net;

TEST_SUITE_BEGIN("bench");

TEST_CASE("plug-in predictors") {
    // empty graph, nu = m = 10 everywhere, M = 10, T = 1
    const HawkesNetwork empty = make_constant_net(10, std::vector<double>(10, 10.0), {});
    const DependenceGraph empty_graph = from_kernels(empty);
    CHECK(predict_fullscan(empty, empty_graph, 1.0) ==
          doctest::Approx(100.0 * 10.0 * std::log(10.0)).epsilon(1e-12));
    // R = 0 kills every term but log(M) |m|_1
    CHECK(predict_localgraph(empty, empty_graph, 1.0) ==
          doctest::Approx(std::log(10.0) * 100.0).epsilon(1e-12));

    // degenerate single node: log argument clamps to 2
    const HawkesNetwork unit = make_constant_net(1, {1.0}, {});
    CHECK(predict_fullscan(unit, from_kernels(unit), 1.0) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // a wired network keeps both predictors finite and positive
    RngStream rng(8);
    const EdgeList edges = gen_erdos_renyi(100, 0.01, rng);
    Matrix h(100, std::vector<double>(100, 0.0));
    for (const auto& [j, i] : edges) {
        h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 0.1;
    }
    const BalanceResult balanced = balance_rates(h, std::vector<double>(100, 10.0));
    REQUIRE(balanced.feasible);
    KernelMap kernels;
    for (const auto& e : edges) {
        kernels.emplace(e, InteractionKernel::constant(5.0, 0.02));
    }
    const HawkesNetwork paper_net(balanced.nu, std::move(kernels));
    const DependenceGraph paper_graph = from_kernels(paper_net);
    const double full = predict_fullscan(paper_net, paper_graph, 150.0);
    const double local = predict_localgraph(paper_net, paper_graph, 150.0);
    CHECK(full > 0.0);
    CHECK(local > 0.0);
    CHECK(std::isfinite(full));
    CHECK(local < full);
}

TEST_CASE("log-log slope fit recovers exact power laws") {
    std::vector<std::pair<double, double>> quadratic, linear;
    for (double m : {50.0, 100.0, 200.0, 400.0, 800.0, 1600.0}) {
        quadratic.emplace_back(m, 3.0e-7 * m * m);
        linear.emplace_back(m, 5.0e-5 * m);
    }
    const SlopeFit q = fit_loglog_slope(quadratic);
    CHECK(q.slope == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(q.stderr_slope < 1e-9);
    CHECK(fit_loglog_slope(linear).slope == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(fit_loglog_slope({{1.0, 1.0}, {2.0, 2.0}}), InsufficientSampleError);
    CHECK_THROWS_AS(fit_loglog_slope({{1.0, -1.0}, {2.0, 2.0}, {3.0, 1.0}, {4.0, 1.0}, {5.0, 2.0}}),
                    std::invalid_argument);
}

TEST_CASE("bench config parser") {
    std::istringstream in(
        "# comment line\n"
        "topologies = er, cascade\n"
        "m_grid = 10, 20, 40\n"
        "fullscan_max_m = 20\n"
        "er_p = degree:3\n"
        "horizon = 2.5\n"
        "target_m = 8\n"
        "graph_seeds = 2\n"
        "reps = 4\n"
        "warmup = 0\n"
        "algos = localgraph\n"
        "master_seed = 99\n"
        "workers = 2\n");
    const BenchConfig config = parse_bench_config(in);
    CHECK(config.topologies == std::vector<std::string>{"er", "cascade"});
    CHECK(config.m_grid == std::vector<int>{10, 20, 40});
    CHECK(config.fullscan_max_m == 20);
    CHECK(config.er_p == "degree:3");
    CHECK(config.horizon == 2.5);
    CHECK(config.target_m == 8.0);
    CHECK(config.graph_seeds == 2);
    CHECK(config.reps == 4);
    CHECK(config.warmup == 0);
    CHECK(config.algos == std::vector<std::string>{"localgraph"});
    CHECK(config.master_seed == 99);
    CHECK(config.workers == 2);

    std::istringstream bad("no_such_key = 1\n");
    CHECK_THROWS_AS(parse_bench_config(bad), std::invalid_argument);
}

TEST_CASE("scaling suite runs, stays deterministic and never discards the benchmark kernel") {
    BenchConfig config;
    config.topologies = {"er", "cascade", "sbm1"};
    config.m_grid = {10, 20};
    config.fullscan_max_m = 20;
    config.er_p = "paper-grid";
    config.horizon = 2.0;
    config.reps = 2;
    config.warmup = 0;
    config.graph_seeds = 2;
    config.master_seed = 4242;
    config.workers = 1;

    const BenchOutcome outcome = run_scaling_suite(config);
    CHECK(outcome.discarded == 0); // the benchmark kernel values discard nothing
    CHECK(!outcome.rows.empty());

    // er with the paper grid: p in {0, 1/M, ...} while k <= ln(M) - 1
    int er_rows_m10 = 0;
    for (const BenchRow& row : outcome.rows) {
        if (row.topology == "er" && row.m == 10) {
            ++er_rows_m10;
        }
        CHECK((row.algo == "fullscan" || row.algo == "localgraph"));
        CHECK(row.predicted > 0.0);
        CHECK(row.wall_seconds >= 0.0);
    }
    // ln(10)-1 = 1.30 -> k in {0,1}: 2 p-values x 2 seeds x 2 algos
    CHECK(er_rows_m10 == 8);

    // identical config => identical rows apart from wall clocks, any workers
    BenchConfig threaded = config;
    threaded.workers = 3;
    const BenchOutcome again = run_scaling_suite(threaded);
    REQUIRE(again.rows.size() == outcome.rows.size());
    for (std::size_t k = 0; k < outcome.rows.size(); ++k) {
        CHECK(outcome.rows[k].topology == again.rows[k].topology);
        CHECK(outcome.rows[k].m == again.rows[k].m);
        CHECK(outcome.rows[k].p_or_preset == again.rows[k].p_or_preset);
        CHECK(outcome.rows[k].seed == again.rows[k].seed);
        CHECK(outcome.rows[k].algo == again.rows[k].algo);
        CHECK(outcome.rows[k].points == again.rows[k].points);
        CHECK(outcome.rows[k].predicted == again.rows[k].predicted);
    }
}

TEST_CASE("infeasible balancing is a discard, not a crash") {
    BenchConfig config;
    config.topologies = {"cascade"};
    config.m_grid = {10};
    config.kernel_level = 60.0; // integral 1.2: balanced rates go negative
    config.reps = 1;
    config.warmup = 0;
    config.workers = 1;
    const BenchOutcome outcome = run_scaling_suite(config);
    CHECK(outcome.rows.empty());
    // every retry of the (deterministic) cascade topology is discarded
    CHECK(outcome.discarded >= outcome.configurations);
}

TEST_CASE("results csv carries the pinned columns") {
    BenchRow row;
    row.topology = "er";
    row.m = 10;
    row.p_or_preset = "0.1";
    row.seed = 3;
    row.algo = "localgraph";
    row.points = 200;
    row.wall_seconds = 0.25;
    row.predicted = 123.5;
    row.wall_seconds_mean = 0.5;
    std::ostringstream out;
    write_results_csv(out, {row});
    CHECK(out.str() ==
          "topology,M,p_or_preset,seed,algo,points,wall_seconds,predicted,wall_seconds_mean\n"
          "er,10,0.1,3,localgraph,200,0.25,123.5,0.5\n");
}

TEST_SUITE_END();
