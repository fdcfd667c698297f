// calnet: build and analyze per-year net caloric food-trade networks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "calnet/pipeline.hpp"
#include "calnet/util.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string trade;
    std::string factors;
    std::string out = "calnet_out";
    int year_from = 1986;
    int year_to = 2022;
    std::string mass_unit = "tonnes";
    std::uint64_t seed = 42;
    double resolution = 1.0;
    int top_k = 5;
    std::string variant = "row-row";

    calnet::RunConfig resolve() const {
        calnet::RunConfig r;
        r.trade_path = trade;
        r.factors_path = factors;
        r.output_dir = out;
        r.year_from = year_from;
        r.year_to = year_to;
        r.mass_unit = calnet::mass_unit_from_name(mass_unit);
        r.seed = seed;
        r.resolution = resolution;
        r.top_k = top_k;
        r.correlation_variant = calnet::variant_from_name(variant);
        return r;
    }
};

void add_common_options(CLI::App& sub, CliOptions& opts) {
    sub.add_option("--config", opts.config_path,
                   "flat key=value config file mirroring the flags; flags win");
    sub.add_option("--trade", opts.trade, "trade CSV (year,reporter,partner,item,quantity_tonnes)");
    sub.add_option("--factors", opts.factors,
                   "nutritive factors CSV (item,kcal_per_100g,category)");
    sub.add_option("--out", opts.out, "output directory")->capture_default_str();
    sub.add_option("--from", opts.year_from, "first year to ingest")->capture_default_str();
    sub.add_option("--to", opts.year_to, "last year to ingest")->capture_default_str();
    sub.add_option("--mass-unit", opts.mass_unit, "quantity unit: tonnes|kilograms")
        ->check(CLI::IsMember({"tonnes", "kilograms"}))
        ->capture_default_str();
    sub.add_option("--seed", opts.seed, "community-detection tie-break seed")
        ->capture_default_str();
    sub.add_option("--resolution", opts.resolution, "community-detection resolution")
        ->capture_default_str();
    sub.add_option("--top-k", opts.top_k, "ranking table depth")->capture_default_str();
    sub.add_option("--correlation-variant", opts.variant,
                   "node correlation variant: row-row|in-out-self")
        ->check(CLI::IsMember({"row-row", "in-out-self"}))
        ->capture_default_str();
}

// key=value per line; blank lines and #-comments allowed. Unknown keys are
// fatal so config typos cannot silently fall back to defaults.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw calnet::IoError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        std::size_t eq = line.find('=', start);
        if (eq == std::string::npos) {
            throw calnet::ParseError("config line " + std::to_string(line_no) +
                                     ": expected key=value");
        }
        std::string key = line.substr(start, eq - start);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
        };
        trim(key);
        trim(value);
        kv[key] = value;
    }
    return kv;
}

// Config values fill in whatever the command line did not set.
void merge_config_file(CLI::App& sub, CliOptions& opts) {
    if (opts.config_path.empty()) return;
    auto parse_or_fail = [&](const std::string& key, const std::string& value, auto& target) {
        std::istringstream ss(value);
        ss >> target;
        if (ss.fail() || !ss.eof()) {
            throw calnet::ParseError("config key '" + key + "': bad value '" + value + "'");
        }
    };
    for (const auto& [key, value] : read_config_file(opts.config_path)) {
        if (sub.count("--" + key) > 0) continue;  // flag wins
        if (key == "trade") {
            opts.trade = value;
        } else if (key == "factors") {
            opts.factors = value;
        } else if (key == "out") {
            opts.out = value;
        } else if (key == "from") {
            parse_or_fail(key, value, opts.year_from);
        } else if (key == "to") {
            parse_or_fail(key, value, opts.year_to);
        } else if (key == "mass-unit") {
            opts.mass_unit = value;
        } else if (key == "seed") {
            parse_or_fail(key, value, opts.seed);
        } else if (key == "resolution") {
            parse_or_fail(key, value, opts.resolution);
        } else if (key == "top-k") {
            parse_or_fail(key, value, opts.top_k);
        } else if (key == "correlation-variant") {
            opts.variant = value;
        } else {
            throw calnet::ParseError("config key '" + key + "' is not recognized");
        }
    }
}

calnet::RunConfig resolve(CLI::App& sub, CliOptions& opts) {
    merge_config_file(sub, opts);
    if (opts.trade.empty()) throw calnet::ParseError("--trade is required (flag or config)");
    if (opts.factors.empty()) throw calnet::ParseError("--factors is required (flag or config)");
    return opts.resolve();
}

int do_build(const calnet::RunConfig& cfg) {
    calnet::BuildResult result = calnet::run_build(cfg);
    std::cerr << "built " << result.networks.size() << " year(s) into " << cfg.output_dir.string()
              << " (" << result.stats.rows_accepted << " rows accepted, "
              << result.stats.rows_rejected() << " rejected, "
              << result.stats.records_missing_factor << " missing factor)\n";
    return 0;
}

int do_analyze(const calnet::RunConfig& cfg) {
    calnet::AnalyzeResult result = calnet::run_analyze(cfg);
    std::cerr << "analyzed " << result.series.rows.size() << " year(s) into "
              << cfg.output_dir.string()
              << (result.reused_build_outputs ? " (reused existing build outputs)" : "") << "\n";
    return 0;
}

int do_validate(const calnet::RunConfig& cfg) {
    calnet::ValidateReport report = calnet::run_validate(cfg);
    for (const std::string& msg : report.fatal_messages) {
        std::cerr << "fatal: " << msg << "\n";
    }
    for (const calnet::ValidateIssue& issue : report.row_issues) {
        std::cerr << "line " << issue.line << ": " << issue.message << "\n";
    }
    if (report.issues_truncated) std::cerr << "(further row issues suppressed)\n";
    if (report.fatal) return 1;

    std::printf("rows accepted: %llu of %llu\n",
                static_cast<unsigned long long>(report.stats.rows_accepted),
                static_cast<unsigned long long>(report.stats.rows_read));
    std::printf("factor coverage: %.6f\n", report.coverage);
    if (!report.items_missing_factor.empty()) {
        std::cerr << "warning: " << report.items_missing_factor.size()
                  << " traded item(s) lack a nutritive factor:";
        for (const std::string& item : report.items_missing_factor) std::cerr << ' ' << item;
        std::cerr << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"net caloric food-trade network builder and analyzer"};
    app.require_subcommand(1);

    CliOptions build_opts, analyze_opts, validate_opts;
    CLI::App* build = app.add_subcommand("build", "ingest trade data and write per-year edge lists");
    add_common_options(*build, build_opts);
    CLI::App* analyze =
        app.add_subcommand("analyze", "compute network measures, rankings and partitions");
    add_common_options(*analyze, analyze_opts);
    CLI::App* validate =
        app.add_subcommand("validate", "dry-run schema and factor-coverage checks");
    add_common_options(*validate, validate_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return do_build(resolve(*build, build_opts));
        if (analyze->parsed()) return do_analyze(resolve(*analyze, analyze_opts));
        if (validate->parsed()) return do_validate(resolve(*validate, validate_opts));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
