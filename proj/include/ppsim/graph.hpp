#pragma once

#include "ppsim/hawkes.hpp"
#include "ppsim/rng.hpp"

#include <utility>
#include <vector>

namespace ppsim {

using EdgeList = std::vector<std::pair<int, int>>; // (source, target), 0-indexed

/// Local independence graph: children/parents adjacency with O(1) node access.
class DependenceGraph {
public:
    DependenceGraph(int node_count, const EdgeList& edges);

    int node_count() const noexcept { return static_cast<int>(children_.size()); }
    const std::vector<int>& children(int node) const { return children_.at(static_cast<std::size_t>(node)); }
    const std::vector<int>& parents(int node) const { return parents_.at(static_cast<std::size_t>(node)); }
    bool has_edge(int source, int target) const;
    std::size_t edge_count() const noexcept { return edge_count_; }

private:
    std::vector<std::vector<int>> children_;
    std::vector<std::vector<int>> parents_;
    std::size_t edge_count_ = 0;
};

/// Graph with edge j -> i iff the kernel j -> i has nonzero integral.
DependenceGraph from_kernels(const HawkesNetwork& net);

/// Each ordered pair present independently with probability p. Self pairs
/// take part in the draws when include_self_loops is set (default).
EdgeList gen_erdos_renyi(int node_count, double p, RngStream& rng, bool include_self_loops = true);

/// Chain 0 -> 1 -> ... -> M-1; one graph per M, no randomness.
EdgeList gen_cascade(int node_count);

/// Block-structured Bernoulli draws: an edge from a block-b node to a
/// block-b' node is present with probability prob[b][b'].
EdgeList gen_stochastic_block(int node_count,
                              const std::vector<int>& block_sizes,
                              const std::vector<std::vector<double>>& prob,
                              RngStream& rng,
                              bool include_self_loops = true);

struct SbmPreset {
    std::vector<int> block_sizes;
    std::vector<std::vector<double>> prob;
};

/// The three benchmark configurations: 1 = two equal blocks, intra-block
/// only; 2 = two equal blocks, inter-block only; 3 = ceil(ln M) / rest
/// asymmetric split with cross connections only.
SbmPreset sbm_preset(int node_count, int preset);

} // namespace ppsim
