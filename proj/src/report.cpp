#include "calnet/report.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace calnet {

std::string direction_name(Direction d) {
    return d == Direction::exports ? "export" : "import";
}

RankingTable rank_top(const NetTradeNetwork& g, Direction direction, std::size_t k) {
    if (k < 1) throw std::invalid_argument("rank_top: k must be >= 1");
    NodeDegrees d = degrees(g);
    const std::vector<double>& strength = direction == Direction::exports ? d.s_out : d.s_in;

    RankingTable table;
    table.year = g.year;
    table.direction = direction;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (strength[i] > 0.0) table.entries.push_back({g.nodes[i], strength[i]});
    }
    std::sort(table.entries.begin(), table.entries.end(),
              [](const RankingEntry& a, const RankingEntry& b) {
                  if (a.kcal != b.kcal) return a.kcal > b.kcal;
                  return a.country < b.country;
              });
    if (table.entries.size() > k) table.entries.resize(k);
    return table;
}

std::optional<double> export_share(const NetTradeNetwork& g,
                                   const std::set<std::string>& countries) {
    for (const std::string& c : countries) {
        if (g.index_of(c) < 0) {
            throw std::invalid_argument("export_share: unknown country '" + c + "'");
        }
    }
    if (!(g.total_weight > 0.0)) return std::nullopt;
    NodeDegrees d = degrees(g);
    double sum = 0.0;
    // std::set iterates in code order, which matches node-index order.
    for (const std::string& c : countries) sum += d.s_out[static_cast<std::size_t>(g.index_of(c))];
    return sum / g.total_weight;
}

std::vector<std::string> peripheral_nodes(const NetTradeNetwork& g) {
    NodeDegrees d = degrees(g);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (d.k_out[i] == 0) out.push_back(g.nodes[i]);
    }
    return out;
}

ZeroExportSeries zero_export_fraction(const std::vector<NetTradeNetwork>& series) {
    if (series.empty()) throw std::invalid_argument("zero_export_fraction: no networks");
    ZeroExportSeries out;
    for (const NetTradeNetwork& g : series) {
        if (g.node_count() == 0) {
            throw std::invalid_argument("zero_export_fraction: network with no nodes");
        }
        double fraction = static_cast<double>(peripheral_nodes(g).size()) /
                          static_cast<double>(g.node_count());
        out.per_year.push_back({g.year, fraction});
    }
    std::sort(out.per_year.begin(), out.per_year.end());

    for (std::size_t s = 0; s < 3; ++s) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& [year, fraction] : out.per_year) {
            if (year >= kStages[s].from && year <= kStages[s].to) {
                sum += fraction;
                ++count;
            }
        }
        if (count > 0) out.stage_means[s] = sum / static_cast<double>(count);
    }
    return out;
}

namespace {

TimeSeriesRow compute_row(int year, const NetTradeNetwork& g, const CommunityParams& params,
                          CorrelationVariant default_variant) {
    TimeSeriesRow row;
    NetworkSummary& s = row.summary;
    s.year = year;
    s.n_nodes = g.node_count();
    s.n_edges = g.edge_count();
    s.connectivity = connectivity(g);
    s.h = heterogeneity(g, false);
    s.h_w = heterogeneity(g, true);
    s.degree_corr = degree_correlation(g);

    row.r_row_row_unweighted = node_correlation_similarity(g, false, CorrelationVariant::row_row);
    row.r_row_row_weighted = node_correlation_similarity(g, true, CorrelationVariant::row_row);
    row.r_in_out_unweighted =
        node_correlation_similarity(g, false, CorrelationVariant::in_out_self);
    row.r_in_out_weighted = node_correlation_similarity(g, true, CorrelationVariant::in_out_self);
    if (default_variant == CorrelationVariant::row_row) {
        s.r_unweighted = row.r_row_row_unweighted;
        s.r_weighted = row.r_row_row_weighted;
    } else {
        s.r_unweighted = row.r_in_out_unweighted;
        s.r_weighted = row.r_in_out_weighted;
    }

    row.partition_unweighted = detect_communities(g, false, params.seed, params.resolution);
    row.partition_weighted = detect_communities(g, true, params.seed, params.resolution);
    if (row.partition_unweighted) s.q_unweighted = modularity(g, *row.partition_unweighted, false);
    if (row.partition_weighted) s.q_weighted = modularity(g, *row.partition_weighted, true);

    NodeDegrees d = degrees(g);
    row.nodes.reserve(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        NodeTableRow n;
        n.country = g.nodes[i];
        n.k_in = d.k_in[i];
        n.k_out = d.k_out[i];
        n.s_in = d.s_in[i];
        n.s_out = d.s_out[i];
        n.peripheral = d.k_out[i] == 0;
        n.isolated = d.k_out[i] == 0 && d.k_in[i] == 0;
        row.nodes.push_back(std::move(n));
    }
    return row;
}

}  // namespace

TimeSeries metric_series(const std::map<int, NetTradeNetwork>& networks,
                         const CommunityParams& params, CorrelationVariant default_variant,
                         unsigned threads) {
    if (networks.empty()) throw std::invalid_argument("metric_series: no networks");

    std::vector<const std::pair<const int, NetTradeNetwork>*> items;
    items.reserve(networks.size());
    for (const auto& entry : networks) items.push_back(&entry);

    TimeSeries series;
    series.rows.resize(items.size());

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(items.size()));

    if (threads <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) {
            series.rows[i] =
                compute_row(items[i]->first, items[i]->second, params, default_variant);
        }
        return series;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= items.size()) break;
            series.rows[i] =
                compute_row(items[i]->first, items[i]->second, params, default_variant);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return series;
}

}  // namespace calnet
