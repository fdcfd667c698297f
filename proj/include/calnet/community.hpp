#ifndef CALNET_COMMUNITY_HPP
#define CALNET_COMMUNITY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "calnet/netgraph.hpp"

namespace calnet {

/// Assignment of every node to one community. Canonical form numbers
/// communities 1..n_communities by first appearance in node order.
struct Partition {
    std::vector<int> assignment;  // node index -> community id (>= 1)
    int n_communities = 0;

    /// Renumbers by first appearance in node order; ids become contiguous 1..n.
    void canonicalize();
    bool operator==(const Partition&) const = default;
};

Partition single_community(std::size_t n_nodes);

/// Newman modularity on the symmetrized view, with total degrees (strengths
/// when weighted). Exactly 0 for the single-community partition. Empty on an
/// edgeless network; throws std::invalid_argument if the partition does not
/// cover every node.
std::optional<double> modularity(const NetTradeNetwork& g, const Partition& p, bool weighted);

/// Greedy multi-level modularity optimization (local moves until no gain,
/// then community aggregation, repeated until stable). Nodes are visited in
/// ascending index order; the seed only shuffles tie-breaking among
/// equal-gain moves. Returns a canonicalized partition whose modularity is
/// >= 0; empty on an edgeless network.
std::optional<Partition> detect_communities(const NetTradeNetwork& g, bool weighted,
                                            std::uint64_t seed, double resolution = 1.0);

struct BestPartition {
    Partition partition;
    double q = 0.0;
};

/// Exhaustively enumerates all set partitions (Bell-number many) and returns
/// one maximizing modularity; ties go to the lexicographically smallest
/// canonical assignment. Refuses networks with more than max_n nodes.
BestPartition brute_force_best_partition(const NetTradeNetwork& g, bool weighted,
                                         std::size_t max_n = 10);

/// Per-community internal edge count, internal weight and internal
/// connectivity, for inspection.
struct CommunityInfo {
    int community = 0;
    std::size_t size = 0;
    std::size_t internal_edges = 0;
    double internal_weight = 0.0;
    /// internal_edges / (size*(size-1)); 0 for singletons.
    double internal_connectivity = 0.0;
};

std::vector<CommunityInfo> community_diagnostics(const NetTradeNetwork& g, const Partition& p);

}  // namespace calnet

#endif  // CALNET_COMMUNITY_HPP
