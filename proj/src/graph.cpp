#include "ppsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ppsim {

DependenceGraph::DependenceGraph(int node_count, const EdgeList& edges) {
    if (node_count < 0) {
        throw std::invalid_argument("negative node count");
    }
    children_.assign(static_cast<std::size_t>(node_count), {});
    parents_.assign(static_cast<std::size_t>(node_count), {});
    for (const auto& [source, target] : edges) {
        if (source < 0 || source >= node_count || target < 0 || target >= node_count) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        children_[static_cast<std::size_t>(source)].push_back(target);
        parents_[static_cast<std::size_t>(target)].push_back(source);
    }
    for (auto& list : children_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        edge_count_ += list.size();
    }
    for (auto& list : parents_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
}

bool DependenceGraph::has_edge(int source, int target) const {
    const auto& ch = children(source);
    return std::binary_search(ch.begin(), ch.end(), target);
}

DependenceGraph from_kernels(const HawkesNetwork& net) {
    EdgeList edges;
    for (int j = 0; j < net.node_count(); ++j) {
        for (const auto& [target, kernel] : net.outgoing(j)) {
            if (kernel->integral() != 0.0) {
                edges.emplace_back(j, target);
            }
        }
    }
    return DependenceGraph(net.node_count(), edges);
}

EdgeList gen_erdos_renyi(int node_count, double p, RngStream& rng, bool include_self_loops) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("edge probability outside [0,1]");
    }
    EdgeList edges;
    for (int j = 0; j < node_count; ++j) {
        for (int i = 0; i < node_count; ++i) {
            if (!include_self_loops && i == j) {
                continue;
            }
            if (rng.uniform() < p) {
                edges.emplace_back(j, i);
            }
        }
    }
    return edges;
}

EdgeList gen_cascade(int node_count) {
    if (node_count < 2) {
        throw std::invalid_argument("cascade needs at least two nodes");
    }
    EdgeList edges;
    edges.reserve(static_cast<std::size_t>(node_count - 1));
    for (int i = 0; i + 1 < node_count; ++i) {
        edges.emplace_back(i, i + 1);
    }
    return edges;
}

EdgeList gen_stochastic_block(int node_count,
                              const std::vector<int>& block_sizes,
                              const std::vector<std::vector<double>>& prob,
                              RngStream& rng,
                              bool include_self_loops) {
    int total = 0;
    for (int s : block_sizes) {
        if (s < 0) {
            throw std::invalid_argument("negative block size");
        }
        total += s;
    }
    if (total != node_count) {
        throw std::invalid_argument("block sizes do not sum to the node count");
    }
    if (prob.size() != block_sizes.size()) {
        throw std::invalid_argument("probability matrix does not match block count");
    }
    for (const auto& row : prob) {
        if (row.size() != block_sizes.size()) {
            throw std::invalid_argument("probability matrix is not square");
        }
        for (double p : row) {
            if (p < 0.0 || p > 1.0) {
                throw std::invalid_argument("block probability outside [0,1]");
            }
        }
    }
    std::vector<int> block_of(static_cast<std::size_t>(node_count));
    int node = 0;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        for (int k = 0; k < block_sizes[b]; ++k) {
            block_of[static_cast<std::size_t>(node++)] = static_cast<int>(b);
        }
    }
    EdgeList edges;
    for (int j = 0; j < node_count; ++j) {
        const auto& row = prob[static_cast<std::size_t>(block_of[static_cast<std::size_t>(j)])];
        for (int i = 0; i < node_count; ++i) {
            if (!include_self_loops && i == j) {
                continue;
            }
            if (rng.uniform() < row[static_cast<std::size_t>(block_of[static_cast<std::size_t>(i)])]) {
                edges.emplace_back(j, i);
            }
        }
    }
    return edges;
}

SbmPreset sbm_preset(int node_count, int preset) {
    const double m = static_cast<double>(node_count);
    const int half = node_count / 2;
    switch (preset) {
    case 1: {
        const double q = (2.0 / m) * std::log(m / 2.0);
        return {{half, node_count - half}, {{q, 0.0}, {0.0, q}}};
    }
    case 2: {
        const double q = (2.0 / m) * std::log(m / 2.0);
        return {{half, node_count - half}, {{0.0, q}, {q, 0.0}}};
    }
    case 3: {
        const int small = static_cast<int>(std::ceil(std::log(m)));
        const int large = node_count - small;
        if (small <= 0 || large <= 0) {
            throw std::invalid_argument("node count too small for the log-split preset");
        }
        const double p01 = std::log(static_cast<double>(small)) / static_cast<double>(small);
        const double p10 = std::log(static_cast<double>(large)) / static_cast<double>(large);
        return {{small, large}, {{0.0, p01}, {p10, 0.0}}};
    }
    default:
        throw std::invalid_argument("unknown stochastic-block preset");
    }
}

} // namespace ppsim
