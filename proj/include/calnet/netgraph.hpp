#ifndef CALNET_NETGRAPH_HPP
#define CALNET_NETGRAPH_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace calnet {

/// Per-year gross caloric flows. Entry (importer, exporter) -> kcal flowing
/// from exporter to importer; absent entries are zero. Nodes are country
/// codes sorted ascending, and entry indices refer into that list.
struct CalorieMatrix {
    int year = 0;
    std::vector<std::string> nodes;
    // Keyed (importer index, exporter index); values are >= 0 and off-diagonal.
    std::map<std::pair<int, int>, double> gross;

    int index_of(const std::string& code) const;  // -1 if absent
    double at(int importer, int exporter) const;
};

struct NetEdge {
    int src = 0;  // exporter
    int dst = 0;  // importer
    double kcal = 0.0;
};

/// Directed, weighted, antisymmetric net-flow network for one year.
/// At most one direction per unordered pair carries an edge, and stored
/// weights are strictly positive. Immutable once built.
struct NetTradeNetwork {
    int year = 0;
    std::vector<std::string> nodes;    // index <-> code bijection, codes sorted
    std::vector<NetEdge> edges;        // sorted by (src, dst)
    double total_weight = 0.0;         // W, kcal

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edges.size(); }  // L
    int index_of(const std::string& code) const;             // -1 if absent
};

/// Undirected view of a net network: one undirected edge per directed edge,
/// same weight. Lossless because antisymmetry rules out reciprocal pairs.
struct UndirectedView {
    struct Neighbor {
        int node;
        double weight;
    };
    std::vector<std::string> nodes;
    std::vector<std::vector<Neighbor>> adjacency;  // per node, sorted by neighbor index
    double total_weight = 0.0;                     // sum over undirected edges
    std::size_t edge_count = 0;
};

/// Nets opposing gross flows into at most one directed edge per pair.
/// Exact ties (including zero/zero) yield no edge. Keeps the full node list,
/// isolated nodes included.
NetTradeNetwork build_net_network(const CalorieMatrix& m);

UndirectedView symmetrize(const NetTradeNetwork& g);

/// Writes `year,source,target,kcal` rows sorted by (source, target).
/// kcal is printed with round-trippable precision.
void export_edge_list(const NetTradeNetwork& g, std::ostream& sink);

}  // namespace calnet

#endif  // CALNET_NETGRAPH_HPP
