#ifndef CALNET_REPORT_HPP
#define CALNET_REPORT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "calnet/community.hpp"
#include "calnet/metrics.hpp"
#include "calnet/netgraph.hpp"

namespace calnet {

enum class Direction { exports, imports };

std::string direction_name(Direction d);  // "export" / "import"

struct RankingEntry {
    std::string country;
    double kcal = 0.0;
};

/// Top-k by strength, descending; ties by country code ascending; countries
/// with zero strength never appear.
struct RankingTable {
    int year = 0;
    Direction direction = Direction::exports;
    std::vector<RankingEntry> entries;
};

RankingTable rank_top(const NetTradeNetwork& g, Direction direction, std::size_t k);

/// Share of total edge weight exported by `countries`. Empty when W = 0;
/// throws std::invalid_argument when a country is not a node of g.
std::optional<double> export_share(const NetTradeNetwork& g, const std::set<std::string>& countries);

/// Countries with zero net export strength, fully isolated nodes included.
std::vector<std::string> peripheral_nodes(const NetTradeNetwork& g);

struct Stage {
    int from = 0;
    int to = 0;
};

/// Reporting stages for zero-export averages; the gap years 1997-2000 belong
/// to none of them.
inline constexpr Stage kStages[] = {{1986, 1996}, {2001, 2013}, {2014, 2022}};

struct ZeroExportSeries {
    std::vector<std::pair<int, double>> per_year;            // (year, fraction), year ascending
    std::optional<double> stage_means[3];                    // empty when a stage has no years
};

ZeroExportSeries zero_export_fraction(const std::vector<NetTradeNetwork>& series);

struct CommunityParams {
    std::uint64_t seed = 42;
    double resolution = 1.0;
};

struct NodeTableRow {
    std::string country;
    int k_in = 0;
    int k_out = 0;
    double s_in = 0.0;
    double s_out = 0.0;
    bool peripheral = false;  // s_out == 0
    bool isolated = false;    // s_out == 0 and s_in == 0
};

struct TimeSeriesRow {
    NetworkSummary summary;  // holds the default-variant correlations
    // Both node-correlation variants, regardless of the default.
    std::optional<double> r_row_row_unweighted;
    std::optional<double> r_row_row_weighted;
    std::optional<double> r_in_out_unweighted;
    std::optional<double> r_in_out_weighted;
    std::optional<Partition> partition_unweighted;
    std::optional<Partition> partition_weighted;
    std::vector<NodeTableRow> nodes;
};

struct TimeSeries {
    std::vector<TimeSeriesRow> rows;  // year ascending, one per built year
};

/// Computes the full per-year measure set. Years run independently on up to
/// `threads` workers (0 = hardware concurrency); assembly is in year order
/// and results do not depend on the thread count.
TimeSeries metric_series(const std::map<int, NetTradeNetwork>& networks,
                         const CommunityParams& params,
                         CorrelationVariant default_variant = CorrelationVariant::row_row,
                         unsigned threads = 1);

}  // namespace calnet

#endif  // CALNET_REPORT_HPP
