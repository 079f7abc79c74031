#include "CLI11.hpp"

#include "ppsim/bench.hpp"
#include "ppsim/errors.hpp"
#include "ppsim/gof.hpp"
#include "ppsim/graph.hpp"
#include "ppsim/io.hpp"
#include "ppsim/naive.hpp"
#include "ppsim/simulate.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitDiscarded = 3;
constexpr int kExitInternalError = 4;

using KeyValues = std::map<std::string, std::string>;

/// "name:key=value,key=value" -> (name, {key: value}).
std::pair<std::string, KeyValues> parse_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    std::pair<std::string, KeyValues> out;
    out.first = spec.substr(0, colon);
    if (colon == std::string::npos) {
        return out;
    }
    std::istringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("expected key=value in spec item '" + item + "'");
        }
        out.second[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

double want_double(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        throw std::invalid_argument("missing spec key '" + key + "'");
    }
    return std::stod(it->second);
}

int want_int(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        throw std::invalid_argument("missing spec key '" + key + "'");
    }
    return std::stoi(it->second);
}

std::pair<int, ppsim::EdgeList> resolve_graph(const std::string& spec) {
    if (std::filesystem::exists(spec)) {
        std::ifstream in(spec);
        return ppsim::read_graph(in);
    }
    auto [name, kv] = parse_spec(spec);
    const bool self_loops = kv.count("selfloops") == 0 || kv.at("selfloops") != "0";
    if (name == "er") {
        const int m = want_int(kv, "M");
        ppsim::RngStream rng(static_cast<std::uint64_t>(want_int(kv, "seed")));
        return {m, ppsim::gen_erdos_renyi(m, want_double(kv, "p"), rng, self_loops)};
    }
    if (name == "cascade") {
        const int m = want_int(kv, "M");
        return {m, ppsim::gen_cascade(m)};
    }
    if (name == "sbm") {
        const int m = want_int(kv, "M");
        const ppsim::SbmPreset preset = ppsim::sbm_preset(m, want_int(kv, "preset"));
        ppsim::RngStream rng(static_cast<std::uint64_t>(want_int(kv, "seed")));
        return {m, ppsim::gen_stochastic_block(m, preset.block_sizes, preset.prob, rng,
                                               self_loops)};
    }
    throw std::invalid_argument("graph '" + spec + "' is neither a file nor a known gen-spec");
}

ppsim::InteractionKernel resolve_kernel(const std::string& spec) {
    auto [name, kv] = parse_spec(spec);
    if (name == "const") {
        return ppsim::InteractionKernel::constant(want_double(kv, "level"),
                                                  want_double(kv, "support"));
    }
    if (name == "steps") {
        // keys are breakpoint times, values absolute levels; last level 0
        ppsim::Scheduler steps;
        double prev_level = 0.0;
        std::map<double, double> ordered;
        for (const auto& [t, level] : kv) {
            ordered[std::stod(t)] = std::stod(level);
        }
        for (const auto& [t, level] : ordered) {
            steps.insert({t, level - prev_level});
            prev_level = level;
        }
        return ppsim::InteractionKernel(std::move(steps));
    }
    throw std::invalid_argument("unknown kernel spec '" + spec + "'");
}

struct NuSpec {
    bool balance = false;
    double value = 0.0;
    std::vector<double> list;
};

NuSpec resolve_nu(const std::string& spec) {
    NuSpec out;
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    if (colon == std::string::npos) {
        throw std::invalid_argument("nu spec needs a value, e.g. const:10");
    }
    const std::string arg = spec.substr(colon + 1);
    if (name == "const") {
        out.value = std::stod(arg);
    } else if (name == "balance") {
        out.balance = true;
        out.value = std::stod(arg);
    } else if (name == "list") {
        std::istringstream ss(arg);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.list.push_back(std::stod(item));
        }
    } else {
        throw std::invalid_argument("unknown nu spec '" + spec + "'");
    }
    return out;
}

int run_simulate(const std::string& algo,
                 const std::string& graph_spec,
                 const std::string& kernel_spec,
                 const std::string& nu_spec,
                 double horizon,
                 std::uint64_t seed,
                 const std::string& out_path,
                 const std::string& save_net_path) {
    const auto [m, edges] = resolve_graph(graph_spec);
    const NuSpec nu = resolve_nu(nu_spec);

    ppsim::KernelMap kernels;
    ppsim::Matrix h(static_cast<std::size_t>(m),
                    std::vector<double>(static_cast<std::size_t>(m), 0.0));
    for (const auto& edge : edges) {
        ppsim::InteractionKernel kernel = resolve_kernel(kernel_spec);
        h[static_cast<std::size_t>(edge.second)][static_cast<std::size_t>(edge.first)] =
            kernel.integral();
        kernels.emplace(edge, std::move(kernel));
    }

    std::vector<double> rates;
    if (nu.balance) {
        if (ppsim::spectral_radius(h) >= 1.0) {
            std::cerr << "discard: spectral radius of H is >= 1\n";
            return kExitDiscarded;
        }
        const ppsim::BalanceResult balance = ppsim::balance_rates(
            h, std::vector<double>(static_cast<std::size_t>(m), nu.value));
        if (!balance.feasible) {
            std::cerr << "discard: balanced rate is negative at node "
                      << balance.first_negative + 1 << "\n";
            return kExitDiscarded;
        }
        rates = balance.nu;
    } else if (!nu.list.empty()) {
        if (nu.list.size() != static_cast<std::size_t>(m)) {
            throw std::invalid_argument("nu list length does not match the node count");
        }
        rates = nu.list;
    } else {
        rates.assign(static_cast<std::size_t>(m), nu.value);
    }

    const ppsim::HawkesNetwork net(rates, std::move(kernels));
    ppsim::RngStream rng(seed);
    ppsim::SimOptions options;
    options.seed_label = seed;

    ppsim::SimulationResult result;
    if (algo == "fullscan") {
        result = ppsim::simulate_fullscan(net, horizon, rng, options);
    } else if (algo == "localgraph") {
        result = ppsim::simulate_localgraph(net, ppsim::from_kernels(net), horizon, rng, options);
    } else {
        result = ppsim::simulate_naive(net, horizon, rng, options);
    }

    std::ofstream out(out_path);
    if (!out) {
        throw std::invalid_argument("cannot open output file " + out_path);
    }
    ppsim::write_points_csv(out, result);

    if (!save_net_path.empty()) {
        std::ofstream net_out(save_net_path);
        if (!net_out) {
            throw std::invalid_argument("cannot open network file " + save_net_path);
        }
        ppsim::write_network(net_out, net);
    }
    std::cerr << "wrote " << result.times.size() << " points to " << out_path << " ("
              << ppsim::format_double(result.meta.wall_seconds) << " s)\n";
    return kExitOk;
}

int run_gof(const std::string& points_path,
            const std::string& net_path,
            int node_one_based,
            double horizon,
            const std::string& out_path) {
    std::ifstream net_in(net_path);
    if (!net_in) {
        throw std::invalid_argument("cannot read network file " + net_path);
    }
    const ppsim::HawkesNetwork net = ppsim::read_network(net_in);

    std::ifstream points_in(points_path);
    if (!points_in) {
        throw std::invalid_argument("cannot read points file " + points_path);
    }
    ppsim::SimulationResult result = ppsim::read_points_csv(points_in);
    result.meta.horizon = horizon > 0.0
                              ? horizon
                              : (result.times.empty() ? 0.0 : result.times.back());

    const int node = node_one_based - 1;
    if (node < 0 || node >= net.node_count()) {
        throw std::invalid_argument("node index out of range");
    }
    const ppsim::TestReport report = ppsim::node_gof(result, net, node);

    std::printf("%-16s %6s %12s %12s %8s\n", "test", "node", "p_value", "statistic", "n");
    for (const auto& entry : report.tests) {
        std::printf("%-16s %6d %12.6f %12.6f %8zu\n", entry.name.c_str(), node_one_based,
                    entry.p_value, entry.statistic, entry.n);
    }
    std::ofstream out(out_path);
    if (!out) {
        throw std::invalid_argument("cannot open output file " + out_path);
    }
    ppsim::write_report_csv(out, report, node);
    return kExitOk;
}

int run_bench(const std::string& config_path, const std::string& out_path) {
    std::ifstream in(config_path);
    if (!in) {
        throw std::invalid_argument("cannot read bench config " + config_path);
    }
    const ppsim::BenchConfig config = ppsim::parse_bench_config(in);
    const ppsim::BenchOutcome outcome = ppsim::run_scaling_suite(config);
    std::cerr << outcome.rows.size() << " rows from " << outcome.configurations
              << " configurations, " << outcome.discarded << " discarded\n";
    std::ofstream out(out_path);
    if (!out) {
        throw std::invalid_argument("cannot open output file " + out_path);
    }
    ppsim::write_results_csv(out, outcome.rows);
    if (outcome.discarded == outcome.configurations && outcome.configurations > 0) {
        return kExitDiscarded;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete-event simulation and validation for multivariate point processes"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "simulate one network realization");
    std::string algo = "localgraph";
    std::string graph_spec;
    std::string kernel_spec = "const:level=5,support=0.02";
    std::string nu_spec = "const:10";
    double horizon = 0.0;
    std::uint64_t seed = 1;
    std::string points_out = "points.csv";
    std::string save_net;
    simulate->add_option("--algo", algo, "fullscan | localgraph | naive")
        ->check(CLI::IsMember({"fullscan", "localgraph", "naive"}));
    simulate->add_option("--graph", graph_spec,
                         "graph file, or er:M=..,p=..,seed=.. | cascade:M=.. | "
                         "sbm:M=..,preset=..,seed=..")
        ->required();
    simulate->add_option("--kernel", kernel_spec,
                         "const:level=..,support=.. | steps:t=level,...");
    simulate->add_option("--nu", nu_spec, "const:v | balance:m | list:v1,v2,...");
    simulate->add_option("--horizon", horizon, "simulation horizon T")->required();
    simulate->add_option("--seed", seed, "random stream seed");
    simulate->add_option("--out", points_out, "points csv path");
    simulate->add_option("--save-net", save_net, "also write the network file");

    auto* gof = app.add_subcommand("gof", "goodness-of-fit battery for one node");
    std::string points_path;
    std::string net_path;
    int node = 1;
    double gof_horizon = 0.0;
    std::string report_out = "report.csv";
    gof->add_option("--points", points_path, "points csv")->required();
    gof->add_option("--net", net_path, "network file")->required();
    gof->add_option("--node", node, "node index (1-based)")->required();
    gof->add_option("--horizon", gof_horizon,
                    "simulation horizon; defaults to the last point time");
    gof->add_option("--out", report_out, "report csv path");

    auto* bench = app.add_subcommand("bench", "scaling suite over the three topologies");
    std::string config_path;
    std::string results_out = "results.csv";
    bench->add_option("--config", config_path, "key = value configuration file")->required();
    bench->add_option("--out", results_out, "results csv path");

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) {
            return run_simulate(algo, graph_spec, kernel_spec, nu_spec, horizon, seed,
                                points_out, save_net);
        }
        if (gof->parsed()) {
            return run_gof(points_path, net_path, node, gof_horizon, report_out);
        }
        return run_bench(config_path, results_out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidConfig;
    } catch (const ppsim::CorruptedIntensityError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return kExitInternalError;
    } catch (const ppsim::OracleInconsistencyError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return kExitInternalError;
    } catch (const ppsim::NumericError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return kExitInternalError;
    } catch (const ppsim::CausalityError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return kExitInternalError;
    } catch (const ppsim::StationarityError& e) {
        std::cerr << "discard: " << e.what() << "\n";
        return kExitDiscarded;
    } catch (const std::exception& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    }
}
