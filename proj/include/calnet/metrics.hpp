#ifndef CALNET_METRICS_HPP
#define CALNET_METRICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "calnet/netgraph.hpp"

namespace calnet {

/// Per-node degree and strength sums, indexed like the network's node list.
struct NodeDegrees {
    std::vector<int> k_in;
    std::vector<int> k_out;
    std::vector<double> s_in;
    std::vector<double> s_out;
};

enum class CorrelationVariant { row_row, in_out_self };

/// Whole-network measures for one year. Undefined measures (degenerate
/// inputs) stay empty and serialize as null.
struct NetworkSummary {
    int year = 0;
    std::size_t n_nodes = 0;  // N
    std::size_t n_edges = 0;  // L
    std::optional<double> connectivity;
    std::optional<double> h;
    std::optional<double> h_w;
    std::optional<double> r_unweighted;
    std::optional<double> r_weighted;
    std::optional<double> degree_corr;
    std::optional<double> q_unweighted;
    std::optional<double> q_weighted;
};

NodeDegrees degrees(const NetTradeNetwork& g);

/// L / (N(N-1)); at most 0.5 on a net network. Empty for N < 2.
std::optional<double> connectivity(const NetTradeNetwork& g);

/// Mean |in - out| imbalance over nodes, normalized by the mean total degree
/// 2L/N (strength 2W/N when weighted). In [0, 1]; empty on an edgeless
/// network.
std::optional<double> heterogeneity(const NetTradeNetwork& g, bool weighted);

/// Pearson correlation across nodes between s_out and s_in. Empty when either
/// series has zero variance or N < 2.
std::optional<double> degree_correlation(const NetTradeNetwork& g);

/// Mean pairwise Pearson correlation of trade profiles.
///
/// row_row: correlate every ordered pair of in-profile rows (w_i. over all N
/// columns, diagonal included; adjacency rows when unweighted); zero-variance
/// rows contribute 0 for their pairs; mean over N(N-1) pairs.
///
/// in_out_self: correlate each node's in-profile with its own out-profile and
/// average over the N nodes.
std::optional<double> node_correlation_similarity(const NetTradeNetwork& g, bool weighted,
                                                  CorrelationVariant variant);

/// Pearson correlation of two equal-length series; empty when either variance
/// is exactly zero. Result clamped to [-1, 1].
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace calnet

#endif  // CALNET_METRICS_HPP
