#include "calnet/netgraph.hpp"

#include <algorithm>
#include <cassert>

#include "calnet/util.hpp"

namespace calnet {

namespace {

int find_code(const std::vector<std::string>& nodes, const std::string& code) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), code);
    if (it == nodes.end() || *it != code) return -1;
    return static_cast<int>(it - nodes.begin());
}

}  // namespace

int CalorieMatrix::index_of(const std::string& code) const {
    return find_code(nodes, code);
}

double CalorieMatrix::at(int importer, int exporter) const {
    auto it = gross.find({importer, exporter});
    return it == gross.end() ? 0.0 : it->second;
}

int NetTradeNetwork::index_of(const std::string& code) const {
    return find_code(nodes, code);
}

NetTradeNetwork build_net_network(const CalorieMatrix& m) {
    NetTradeNetwork g;
    g.year = m.year;
    g.nodes = m.nodes;

    // Visit each unordered pair exactly once. For a pair {lo, hi} the two
    // possible keys are (lo, hi) and (hi, lo); the map is ordered, so (lo, hi)
    // comes first when both exist.
    for (const auto& entry : m.gross) {
        auto [i, j] = entry.first;  // importer i, exporter j
        int lo = std::min(i, j), hi = std::max(i, j);
        if (i > j && m.gross.count({lo, hi}) > 0) continue;  // handled at the mirror key
        double to_lo = m.at(lo, hi);  // hi -> lo
        double to_hi = m.at(hi, lo);  // lo -> hi
        if (to_lo > to_hi) {
            g.edges.push_back({hi, lo, to_lo - to_hi});
        } else if (to_hi > to_lo) {
            g.edges.push_back({lo, hi, to_hi - to_lo});
        }
        // Exact tie: no edge in either direction.
    }

    std::sort(g.edges.begin(), g.edges.end(), [](const NetEdge& a, const NetEdge& b) {
        return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
    });
    double w = 0.0;
    for (const NetEdge& e : g.edges) w += e.kcal;
    g.total_weight = w;
    return g;
}

UndirectedView symmetrize(const NetTradeNetwork& g) {
    UndirectedView u;
    u.nodes = g.nodes;
    u.adjacency.resize(g.nodes.size());
    for (const NetEdge& e : g.edges) {
        u.adjacency[e.src].push_back({e.dst, e.kcal});
        u.adjacency[e.dst].push_back({e.src, e.kcal});
    }
    for (auto& nbrs : u.adjacency) {
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const UndirectedView::Neighbor& a, const UndirectedView::Neighbor& b) {
                      return a.node < b.node;
                  });
    }
    u.total_weight = g.total_weight;
    u.edge_count = g.edges.size();
    return u;
}

void export_edge_list(const NetTradeNetwork& g, std::ostream& sink) {
    sink << "year,source,target,kcal\n";
    // Node indices follow sorted code order, so index order == code order.
    for (const NetEdge& e : g.edges) {
        sink << g.year << ',' << g.nodes[e.src] << ',' << g.nodes[e.dst] << ','
             << util::format_double(e.kcal) << '\n';
    }
    if (!sink) throw IoError("edge list write failed");
}

}  // namespace calnet
