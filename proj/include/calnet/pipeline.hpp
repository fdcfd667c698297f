#ifndef CALNET_PIPELINE_HPP
#define CALNET_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "calnet/ingest.hpp"
#include "calnet/netgraph.hpp"
#include "calnet/report.hpp"

namespace calnet {

std::string mass_unit_name(MassUnit u);              // "tonnes" / "kilograms"
MassUnit mass_unit_from_name(const std::string& s);  // throws on unknown

std::string variant_name(CorrelationVariant v);              // "row-row" / "in-out-self"
CorrelationVariant variant_from_name(const std::string& s);  // throws on unknown

struct RunConfig {
    std::filesystem::path trade_path;
    std::filesystem::path factors_path;
    std::filesystem::path output_dir;
    int year_from = 1986;
    int year_to = 2022;
    MassUnit mass_unit = MassUnit::tonnes;
    std::uint64_t seed = 42;
    double resolution = 1.0;
    int top_k = 5;
    CorrelationVariant correlation_variant = CorrelationVariant::row_row;

    IngestConfig ingest_config() const { return {year_from, year_to, mass_unit}; }
    void check() const;  // throws std::invalid_argument on invariant violations
};

struct BuildResult {
    std::map<int, NetTradeNetwork> networks;
    IngestStats stats;
};

/// Ingests, nets, and writes per-year edge lists, ingest_stats.json and
/// manifest.json (input checksums + config echo + per-year node rosters)
/// to output_dir. All writes are atomic.
BuildResult run_build(const RunConfig& cfg);

struct AnalyzeResult {
    TimeSeries series;
    /// True when networks were reconstructed from existing build outputs
    /// (matching manifest) instead of re-ingesting the raw inputs.
    bool reused_build_outputs = false;
};

/// Produces summary.json, nodes_<year>.csv, rankings.csv, zero_export.csv,
/// zero_export_stages.json and per-year partition files. Runs the build
/// implicitly unless output_dir already holds build outputs whose manifest
/// matches the inputs and build-relevant config.
AnalyzeResult run_analyze(const RunConfig& cfg);

struct ValidateIssue {
    std::uint64_t line = 0;
    std::string message;
};

struct ValidateReport {
    bool fatal = false;
    std::vector<std::string> fatal_messages;
    std::vector<ValidateIssue> row_issues;  // capped; see issues_truncated
    bool issues_truncated = false;
    IngestStats stats;
    std::vector<std::string> items_missing_factor;  // distinct traded items without a factor
    double coverage = 1.0;
};

/// Dry-run schema, category and factor-coverage validation. Never writes.
ValidateReport run_validate(const RunConfig& cfg);

/// Thread cap from CALNET_THREADS (0 or unset = hardware concurrency).
unsigned threads_from_env();

/// Reconstructs per-year networks from manifest.json + edges_<year>.csv,
/// exactly (node rosters from the manifest, weights round-tripped through
/// the edge lists). Used by run_analyze when the manifest matches.
std::map<int, NetTradeNetwork> load_built_networks(const std::filesystem::path& output_dir);

}  // namespace calnet

#endif  // CALNET_PIPELINE_HPP
