#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "calnet/metrics.hpp"
#include "calnet/netgraph.hpp"
#include "calnet/util.hpp"
#include "testutil.hpp"

using namespace calnet;

namespace {

CalorieMatrix matrix_of(int year, const std::vector<std::string>& nodes,
                        const std::vector<std::tuple<std::string, std::string, double>>& flows) {
    CalorieMatrix m;
    m.year = year;
    m.nodes = nodes;
    for (const auto& [exporter, importer, kcal] : flows) {
        m.gross[{m.index_of(importer), m.index_of(exporter)}] += kcal;
    }
    return m;
}

}  // namespace

TEST_SUITE("netgraph") {

TEST_CASE("one-way flow becomes one edge") {
    CalorieMatrix m = matrix_of(1986, {"III", "JJJ"}, {{"JJJ", "III", 3300.0}});
    NetTradeNetwork g = build_net_network(m);
    REQUIRE(g.edge_count() == 1);
    CHECK(g.nodes[g.edges[0].src] == "JJJ");
    CHECK(g.nodes[g.edges[0].dst] == "III");
    CHECK(g.edges[0].kcal == 3300.0);
    CHECK(g.total_weight == 3300.0);
}

TEST_CASE("reciprocal flows net to the stronger direction") {
    CalorieMatrix m = matrix_of(1986, {"III", "JJJ"},
                                {{"JJJ", "III", 2.0}, {"III", "JJJ", 7.0}});
    NetTradeNetwork g = build_net_network(m);
    REQUIRE(g.edge_count() == 1);
    CHECK(g.nodes[g.edges[0].src] == "III");
    CHECK(g.nodes[g.edges[0].dst] == "JJJ");
    CHECK(g.edges[0].kcal == 5.0);
}

TEST_CASE("exact ties produce no edge but keep the nodes") {
    CalorieMatrix m = matrix_of(1986, {"III", "JJJ"},
                                {{"JJJ", "III", 5e6}, {"III", "JJJ", 5e6}});
    NetTradeNetwork g = build_net_network(m);
    CHECK(g.edge_count() == 0);
    CHECK(g.nodes == std::vector<std::string>{"III", "JJJ"});
}

TEST_CASE("isolated nodes survive netting") {
    CalorieMatrix m = matrix_of(1986, {"AAA", "BBB", "CCC"}, {{"AAA", "BBB", 10.0}});
    NetTradeNetwork g = build_net_network(m);
    CHECK(g.nodes.size() == 3);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("symmetrize mirrors each edge once") {
    NetTradeNetwork g = testutil::make_network(
        1986, {{"AAA", "BBB", 5.0}});
    UndirectedView u = symmetrize(g);
    CHECK(u.edge_count == 1);
    CHECK(u.adjacency[0].size() == 1);
    CHECK(u.adjacency[1].size() == 1);
    CHECK(u.adjacency[0][0].weight == 5.0);

    NetTradeNetwork cycle = testutil::make_network(
        1986, {{"AAA", "BBB", 1.0}, {"BBB", "CCC", 1.0}, {"CCC", "AAA", 1.0}});
    UndirectedView uc = symmetrize(cycle);
    CHECK(uc.edge_count == 3);
    for (const auto& nbrs : uc.adjacency) CHECK(nbrs.size() == 2);

    NetTradeNetwork empty;
    empty.nodes = {"AAA"};
    UndirectedView ue = symmetrize(empty);
    CHECK(ue.edge_count == 0);
}

TEST_CASE("edge list export is sorted and round-trippable") {
    NetTradeNetwork g = testutil::make_network(
        1986, {{"ZZZ", "AAA", 0.1 + 0.2}, {"BRA", "CHN", 5000.0}});
    std::ostringstream out;
    export_edge_list(g, out);
    std::string expected = "year,source,target,kcal\n1986,BRA,CHN,5000\n1986,ZZZ,AAA," +
                           util::format_double(0.1 + 0.2) + "\n";
    CHECK(out.str() == expected);

    // The printed kcal parses back to the exact stored double.
    auto parsed = util::parse_double(util::format_double(0.1 + 0.2));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == 0.1 + 0.2);

    NetTradeNetwork empty;
    empty.year = 1986;
    std::ostringstream out2;
    export_edge_list(empty, out2);
    CHECK(out2.str() == "year,source,target,kcal\n");
}

TEST_CASE("property: antisymmetry, shrinkage, idempotence, node preservation") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + trial % 9;
        CalorieMatrix m = testutil::random_matrix(rng, n, 0.4);
        NetTradeNetwork g = build_net_network(m);

        CHECK(g.nodes == m.nodes);

        // min(w_ij, w_ji) = 0 and max = |c_ij - c_ji| per unordered pair.
        std::map<std::pair<int, int>, double> w;
        for (const NetEdge& e : g.edges) {
            w[{e.dst, e.src}] = e.kcal;
            CHECK(e.kcal > 0.0);
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double wij = w.count({i, j}) ? w[{i, j}] : 0.0;
                double wji = w.count({j, i}) ? w[{j, i}] : 0.0;
                CHECK(wij * wji == 0.0);
                CHECK(std::max(wij, wji) == std::abs(m.at(i, j) - m.at(j, i)));
            }
        }

        // Gross-to-net shrinkage.
        double gross_total = 0.0;
        for (const auto& [key, kcal] : m.gross) gross_total += kcal;
        CHECK(g.total_weight <= gross_total * (1.0 + 1e-12));

        // L within the antisymmetry bound.
        CHECK(g.edge_count() <= static_cast<std::size_t>(n * (n - 1) / 2));

        // Feeding the net weights back reproduces the same network.
        CalorieMatrix back;
        back.year = m.year;
        back.nodes = m.nodes;
        for (const NetEdge& e : g.edges) back.gross[{e.dst, e.src}] = e.kcal;
        NetTradeNetwork g2 = build_net_network(back);
        REQUIRE(g2.edge_count() == g.edge_count());
        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            CHECK(g2.edges[k].src == g.edges[k].src);
            CHECK(g2.edges[k].dst == g.edges[k].dst);
            CHECK(g2.edges[k].kcal == g.edges[k].kcal);
        }

        // Undirected degree equals k_in + k_out.
        UndirectedView u = symmetrize(g);
        NodeDegrees d = degrees(g);
        for (int i = 0; i < n; ++i) {
            CHECK(u.adjacency[static_cast<std::size_t>(i)].size() ==
                  static_cast<std::size_t>(d.k_in[i] + d.k_out[i]));
        }
    }
}

}  // TEST_SUITE
