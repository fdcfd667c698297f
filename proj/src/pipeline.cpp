#include "calnet/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "calnet/util.hpp"

namespace calnet {

namespace fs = std::filesystem;
using nlohmann::json;

std::string mass_unit_name(MassUnit u) {
    return u == MassUnit::tonnes ? "tonnes" : "kilograms";
}

MassUnit mass_unit_from_name(const std::string& s) {
    if (s == "tonnes") return MassUnit::tonnes;
    if (s == "kilograms") return MassUnit::kilograms;
    throw std::invalid_argument("unknown mass unit '" + s + "' (tonnes|kilograms)");
}

std::string variant_name(CorrelationVariant v) {
    return v == CorrelationVariant::row_row ? "row-row" : "in-out-self";
}

CorrelationVariant variant_from_name(const std::string& s) {
    if (s == "row-row") return CorrelationVariant::row_row;
    if (s == "in-out-self") return CorrelationVariant::in_out_self;
    throw std::invalid_argument("unknown correlation variant '" + s + "' (row-row|in-out-self)");
}

void RunConfig::check() const {
    if (trade_path.empty()) throw std::invalid_argument("trade path is empty");
    if (factors_path.empty()) throw std::invalid_argument("factors path is empty");
    if (output_dir.empty()) throw std::invalid_argument("output dir is empty");
    if (year_from > year_to) throw std::invalid_argument("year_from exceeds year_to");
    if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
    if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
}

unsigned threads_from_env() {
    const char* env = std::getenv("CALNET_THREADS");
    if (env == nullptr) return 0;  // auto
    auto parsed = util::parse_int(env);
    if (!parsed || *parsed < 0) return 0;
    return static_cast<unsigned>(*parsed);
}

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

fs::path edges_path(const fs::path& dir, int year) {
    return dir / ("edges_" + std::to_string(year) + ".csv");
}

json input_entry(const fs::path& path) {
    json j;
    j["path"] = path.string();
    j["fnv1a64"] = hex64(util::fnv1a64_file(path));
    j["bytes"] = fs::file_size(path);
    return j;
}

json config_echo(const RunConfig& cfg) {
    json j;
    j["trade"] = cfg.trade_path.string();
    j["factors"] = cfg.factors_path.string();
    j["out"] = cfg.output_dir.string();
    j["from"] = cfg.year_from;
    j["to"] = cfg.year_to;
    j["mass-unit"] = mass_unit_name(cfg.mass_unit);
    j["seed"] = cfg.seed;
    j["resolution"] = cfg.resolution;
    j["top-k"] = cfg.top_k;
    j["correlation-variant"] = variant_name(cfg.correlation_variant);
    return j;
}

std::map<int, NetTradeNetwork> ingest_networks(const RunConfig& cfg, IngestStats& stats) {
    std::ifstream factors_in(cfg.factors_path);
    if (!factors_in) throw IoError("cannot open factors file: " + cfg.factors_path.string());
    FactorTable factors = parse_nutritive_factors(factors_in);

    std::ifstream trade_in(cfg.trade_path, std::ios::binary);
    if (!trade_in) throw IoError("cannot open trade file: " + cfg.trade_path.string());

    IngestConfig icfg = cfg.ingest_config();
    FlowAccumulator acc;
    scan_trade_records(trade_in, icfg, stats, [&](TradeRecord&& r) {
        if (auto flow = to_calories(r, factors, icfg, stats)) acc.add(*flow);
    });

    std::map<int, NetTradeNetwork> networks;
    for (const auto& [year, matrix] : acc.finish()) {
        networks.emplace(year, build_net_network(matrix));
    }
    return networks;
}

void write_build_outputs(const RunConfig& cfg, const std::map<int, NetTradeNetwork>& networks,
                         const IngestStats& stats) {
    fs::create_directories(cfg.output_dir);

    for (const auto& [year, g] : networks) {
        std::ostringstream csv;
        export_edge_list(g, csv);
        util::atomic_write(edges_path(cfg.output_dir, year), csv.str());
    }

    util::atomic_write(cfg.output_dir / "ingest_stats.json", stats.to_json());

    json manifest;
    manifest["tool"] = {{"name", "calnet"}, {"version", kToolVersion}};
    manifest["inputs"] = {{"trade", input_entry(cfg.trade_path)},
                          {"factors", input_entry(cfg.factors_path)}};
    manifest["config"] = config_echo(cfg);
    json years = json::object();
    for (const auto& [year, g] : networks) {
        years[std::to_string(year)] = {{"nodes", g.nodes}, {"edges", g.edge_count()}};
    }
    manifest["years"] = years;
    util::atomic_write(cfg.output_dir / "manifest.json", manifest.dump(2) + "\n");
}

// True when output_dir holds a manifest whose inputs and build-relevant
// config match cfg, so the edge lists can be reused as-is.
bool manifest_matches(const RunConfig& cfg) {
    fs::path path = cfg.output_dir / "manifest.json";
    std::error_code ec;
    if (!fs::exists(path, ec)) return false;
    try {
        json manifest = json::parse(util::read_file(path));
        const json& c = manifest.at("config");
        if (c.at("from").get<int>() != cfg.year_from) return false;
        if (c.at("to").get<int>() != cfg.year_to) return false;
        if (c.at("mass-unit").get<std::string>() != mass_unit_name(cfg.mass_unit)) return false;
        const json& inputs = manifest.at("inputs");
        if (inputs.at("trade").at("fnv1a64").get<std::string>() !=
            hex64(util::fnv1a64_file(cfg.trade_path)))
            return false;
        if (inputs.at("factors").at("fnv1a64").get<std::string>() !=
            hex64(util::fnv1a64_file(cfg.factors_path)))
            return false;
        for (const auto& [year, info] : manifest.at("years").items()) {
            if (!fs::exists(edges_path(cfg.output_dir, std::stoi(year)), ec)) return false;
            (void)info;
        }
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

std::string bool01(bool b) { return b ? "1" : "0"; }

void write_partition(const fs::path& dir, int year, bool weighted, const Partition& p,
                     const NetTradeNetwork& g, const RunConfig& cfg) {
    std::string stem = "partition_" + std::to_string(year) + (weighted ? "_weighted" : "_unweighted");
    std::ostringstream csv;
    csv << "node,community\n";
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        csv << g.nodes[i] << ',' << p.assignment[i] << '\n';
    }
    util::atomic_write(dir / (stem + ".csv"), csv.str());

    json meta;
    meta["year"] = year;
    meta["weighted"] = weighted;
    meta["seed"] = cfg.seed;
    meta["resolution"] = cfg.resolution;
    meta["communities"] = p.n_communities;
    util::atomic_write(dir / (stem + ".meta.json"), meta.dump(2) + "\n");
}

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

void write_analyze_outputs(const RunConfig& cfg, const TimeSeries& series,
                           const std::map<int, NetTradeNetwork>& networks) {
    fs::create_directories(cfg.output_dir);

    json summary = json::array();
    for (const TimeSeriesRow& row : series.rows) {
        const NetworkSummary& s = row.summary;
        json j;
        j["year"] = s.year;
        j["N"] = s.n_nodes;
        j["L"] = s.n_edges;
        j["connectivity"] = optional_number(s.connectivity);
        j["h"] = optional_number(s.h);
        j["h_w"] = optional_number(s.h_w);
        j["r_unweighted"] = optional_number(s.r_unweighted);
        j["r_weighted"] = optional_number(s.r_weighted);
        j["degree_corr"] = optional_number(s.degree_corr);
        j["Q_unweighted"] = optional_number(s.q_unweighted);
        j["Q_weighted"] = optional_number(s.q_weighted);
        summary.push_back(j);
    }
    util::atomic_write(cfg.output_dir / "summary.json", summary.dump(2) + "\n");

    for (const TimeSeriesRow& row : series.rows) {
        std::ostringstream csv;
        csv << "country,k_in,k_out,s_in,s_out,peripheral,isolated\n";
        for (const NodeTableRow& n : row.nodes) {
            csv << n.country << ',' << n.k_in << ',' << n.k_out << ','
                << util::format_double(n.s_in) << ',' << util::format_double(n.s_out) << ','
                << bool01(n.peripheral) << ',' << bool01(n.isolated) << '\n';
        }
        util::atomic_write(cfg.output_dir / ("nodes_" + std::to_string(row.summary.year) + ".csv"),
                           csv.str());
    }

    std::ostringstream rankings;
    rankings << "year,direction,rank,country,kcal\n";
    for (const auto& [year, g] : networks) {
        for (Direction dir : {Direction::exports, Direction::imports}) {
            RankingTable table = rank_top(g, dir, static_cast<std::size_t>(cfg.top_k));
            for (std::size_t i = 0; i < table.entries.size(); ++i) {
                rankings << year << ',' << direction_name(dir) << ',' << i + 1 << ','
                         << table.entries[i].country << ','
                         << util::format_double(table.entries[i].kcal) << '\n';
            }
        }
    }
    util::atomic_write(cfg.output_dir / "rankings.csv", rankings.str());

    std::vector<NetTradeNetwork> nets;
    nets.reserve(networks.size());
    for (const auto& [year, g] : networks) nets.push_back(g);
    if (!nets.empty()) {
        ZeroExportSeries zes = zero_export_fraction(nets);
        std::ostringstream csv;
        csv << "year,fraction\n";
        for (const auto& [year, fraction] : zes.per_year) {
            csv << year << ',' << util::format_double(fraction) << '\n';
        }
        util::atomic_write(cfg.output_dir / "zero_export.csv", csv.str());

        json stages;
        for (std::size_t s = 0; s < 3; ++s) {
            std::string key =
                std::to_string(kStages[s].from) + "-" + std::to_string(kStages[s].to);
            stages[key] = optional_number(zes.stage_means[s]);
        }
        util::atomic_write(cfg.output_dir / "zero_export_stages.json", stages.dump(2) + "\n");
    }

    for (const TimeSeriesRow& row : series.rows) {
        const NetTradeNetwork& g = networks.at(row.summary.year);
        if (row.partition_unweighted) {
            write_partition(cfg.output_dir, row.summary.year, false, *row.partition_unweighted, g,
                            cfg);
        }
        if (row.partition_weighted) {
            write_partition(cfg.output_dir, row.summary.year, true, *row.partition_weighted, g,
                            cfg);
        }
    }
}

}  // namespace

std::map<int, NetTradeNetwork> load_built_networks(const fs::path& output_dir) {
    json manifest = json::parse(util::read_file(output_dir / "manifest.json"));
    std::map<int, NetTradeNetwork> networks;
    for (const auto& [year_str, info] : manifest.at("years").items()) {
        int year = std::stoi(year_str);
        NetTradeNetwork g;
        g.year = year;
        g.nodes = info.at("nodes").get<std::vector<std::string>>();

        std::ifstream in(edges_path(output_dir, year));
        if (!in) throw IoError("missing edge list for year " + year_str);
        std::string line;
        if (!std::getline(in, line)) throw ParseError("empty edge list for year " + year_str);
        std::vector<std::string_view> fields;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (!util::split_fields(line, fields, 4)) {
                throw ParseError("bad edge list row in year " + year_str);
            }
            int src = g.index_of(std::string(fields[1]));
            int dst = g.index_of(std::string(fields[2]));
            auto kcal = util::parse_double(fields[3]);
            if (src < 0 || dst < 0 || !kcal) {
                throw ParseError("bad edge list row in year " + year_str);
            }
            g.edges.push_back({src, dst, *kcal});
        }
        std::sort(g.edges.begin(), g.edges.end(), [](const NetEdge& a, const NetEdge& b) {
            return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
        });
        double w = 0.0;
        for (const NetEdge& e : g.edges) w += e.kcal;
        g.total_weight = w;
        networks.emplace(year, std::move(g));
    }
    return networks;
}

BuildResult run_build(const RunConfig& cfg) {
    cfg.check();
    BuildResult result;
    result.networks = ingest_networks(cfg, result.stats);
    write_build_outputs(cfg, result.networks, result.stats);
    return result;
}

AnalyzeResult run_analyze(const RunConfig& cfg) {
    cfg.check();
    AnalyzeResult result;

    std::map<int, NetTradeNetwork> networks;
    if (manifest_matches(cfg)) {
        try {
            networks = load_built_networks(cfg.output_dir);
            result.reused_build_outputs = true;
        } catch (const std::exception&) {
            networks.clear();
            result.reused_build_outputs = false;
        }
    }
    if (!result.reused_build_outputs) {
        networks = run_build(cfg).networks;
    }

    if (!networks.empty()) {
        CommunityParams params{cfg.seed, cfg.resolution};
        result.series =
            metric_series(networks, params, cfg.correlation_variant, threads_from_env());
    }
    write_analyze_outputs(cfg, result.series, networks);
    return result;
}

ValidateReport run_validate(const RunConfig& cfg) {
    cfg.check();
    ValidateReport report;
    constexpr std::size_t kMaxIssues = 50;

    FactorTable factors;
    try {
        std::ifstream factors_in(cfg.factors_path);
        if (!factors_in) throw IoError("cannot open factors file: " + cfg.factors_path.string());
        factors = parse_nutritive_factors(factors_in);
    } catch (const std::exception& e) {
        report.fatal = true;
        report.fatal_messages.push_back(e.what());
        return report;
    }

    std::set<std::string> missing_items;
    try {
        std::ifstream trade_in(cfg.trade_path, std::ios::binary);
        if (!trade_in) throw IoError("cannot open trade file: " + cfg.trade_path.string());
        IngestConfig icfg = cfg.ingest_config();
        scan_trade_records(
            trade_in, icfg, report.stats,
            [&](TradeRecord&& r) {
                if (factors.find(r.item) == nullptr) {
                    ++report.stats.records_missing_factor;
                    missing_items.insert(r.item);
                }
            },
            [&](std::uint64_t line, RejectReason reason) {
                if (report.row_issues.size() < kMaxIssues) {
                    report.row_issues.push_back(
                        {line, std::string(reject_reason_name(reason)) + " row"});
                } else {
                    report.issues_truncated = true;
                }
            });
    } catch (const std::exception& e) {
        report.fatal = true;
        report.fatal_messages.push_back(e.what());
        return report;
    }

    report.items_missing_factor.assign(missing_items.begin(), missing_items.end());
    report.coverage = report.stats.factor_coverage();
    return report;
}

}  // namespace calnet
