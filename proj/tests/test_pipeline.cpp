#include <doctest.h>

#include <fstream>
#include <set>

#include <json.hpp>

#include "calnet/pipeline.hpp"
#include "calnet/util.hpp"
#include "testutil.hpp"

using namespace calnet;

namespace {

RunConfig fixture_config(const std::filesystem::path& out) {
    RunConfig cfg;
    cfg.trade_path = testutil::fixture_trade();
    cfg.factors_path = testutil::fixture_factors();
    cfg.output_dir = out;
    return cfg;
}

std::set<std::string> dir_files(const std::filesystem::path& dir) {
    std::set<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        names.insert(entry.path().filename().string());
    }
    return names;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("config invariants are checked") {
    RunConfig cfg = fixture_config("x");
    cfg.year_from = 2000;
    cfg.year_to = 1990;
    CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
    cfg = fixture_config("x");
    cfg.top_k = 0;
    CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
    cfg = fixture_config("x");
    cfg.resolution = 0.0;
    CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
    cfg = fixture_config("");
    CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
}

TEST_CASE("build writes edge lists, stats and manifest") {
    testutil::TempDir tmp("build");
    RunConfig cfg = fixture_config(tmp.path());
    BuildResult result = run_build(cfg);

    CHECK(result.networks.size() == 2);
    CHECK(result.stats.rows_accepted == 12);
    CHECK(result.stats.records_missing_factor == 1);
    CHECK(result.stats.kcal_total == 35315000.0);

    std::set<std::string> files = dir_files(tmp.path());
    CHECK(files.count("edges_1990.csv") == 1);
    CHECK(files.count("edges_1991.csv") == 1);
    CHECK(files.count("ingest_stats.json") == 1);
    CHECK(files.count("manifest.json") == 1);

    CHECK(testutil::slurp(tmp.path() / "edges_1990.csv") ==
          "year,source,target,kcal\n1990,BRA,CHN,4950000\n1990,USA,ARG,700000\n");
}

TEST_CASE("build networks survive a round trip through the outputs") {
    testutil::TempDir tmp("roundtrip");
    RunConfig cfg = fixture_config(tmp.path());
    BuildResult result = run_build(cfg);

    std::map<int, NetTradeNetwork> loaded = load_built_networks(tmp.path());
    REQUIRE(loaded.size() == result.networks.size());
    for (const auto& [year, g] : result.networks) {
        const NetTradeNetwork& l = loaded.at(year);
        CHECK(l.nodes == g.nodes);
        REQUIRE(l.edges.size() == g.edges.size());
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            CHECK(l.edges[i].src == g.edges[i].src);
            CHECK(l.edges[i].dst == g.edges[i].dst);
            CHECK(l.edges[i].kcal == g.edges[i].kcal);  // bit-exact via the CSV
        }
        CHECK(l.total_weight == g.total_weight);
    }
}

TEST_CASE("analyze writes every interface file") {
    testutil::TempDir tmp("analyze");
    RunConfig cfg = fixture_config(tmp.path());
    AnalyzeResult result = run_analyze(cfg);

    CHECK(result.series.rows.size() == 2);
    std::set<std::string> files = dir_files(tmp.path());
    for (const char* name :
         {"summary.json", "nodes_1990.csv", "nodes_1991.csv", "rankings.csv", "zero_export.csv",
          "zero_export_stages.json", "partition_1990_weighted.csv",
          "partition_1990_weighted.meta.json", "partition_1990_unweighted.csv",
          "partition_1991_weighted.csv", "edges_1990.csv", "manifest.json"}) {
        CHECK_MESSAGE(files.count(name) == 1, name);
    }

    std::string nodes1990 = testutil::slurp(tmp.path() / "nodes_1990.csv");
    CHECK(nodes1990 ==
          "country,k_in,k_out,s_in,s_out,peripheral,isolated\n"
          "ARG,1,0,700000,0,1,0\n"
          "BRA,0,1,0,4950000,0,0\n"
          "CHN,1,0,4950000,0,1,0\n"
          "EGY,0,0,0,0,1,1\n"
          "USA,0,1,0,700000,0,0\n");

    std::string rankings = testutil::slurp(tmp.path() / "rankings.csv");
    CHECK(rankings.find("1990,export,1,BRA,4950000\n") != std::string::npos);
    CHECK(rankings.find("1990,import,1,CHN,4950000\n") != std::string::npos);
    CHECK(rankings.find("1991,export,1,BRA,9900000\n") != std::string::npos);

    std::string zero = testutil::slurp(tmp.path() / "zero_export.csv");
    CHECK(zero == "year,fraction\n1990,0.6\n1991,0.2\n");
}

TEST_CASE("summary.json rows carry exactly the interface keys") {
    testutil::TempDir tmp("summary");
    RunConfig cfg = fixture_config(tmp.path());
    run_analyze(cfg);

    nlohmann::json summary = nlohmann::json::parse(testutil::slurp(tmp.path() / "summary.json"));
    REQUIRE(summary.is_array());
    REQUIRE(summary.size() == 2);
    const std::set<std::string> expected = {"year",         "N",          "L",
                                            "connectivity", "h",          "h_w",
                                            "r_unweighted", "r_weighted", "degree_corr",
                                            "Q_unweighted", "Q_weighted"};
    for (const auto& row : summary) {
        std::set<std::string> keys;
        for (const auto& [key, value] : row.items()) keys.insert(key);
        CHECK(keys == expected);
    }
    CHECK(summary[0]["year"] == 1990);
    CHECK(summary[0]["N"] == 5);
    CHECK(summary[0]["L"] == 2);
    CHECK(summary[0]["connectivity"] == 0.1);
    CHECK(summary[0]["h"] == 1.0);
    CHECK(summary[1]["year"] == 1991);
    CHECK(summary[1]["connectivity"] == 0.2);
}

TEST_CASE("analyze reuses matching build outputs and rebuilds on mismatch") {
    testutil::TempDir tmp("reuse");
    RunConfig cfg = fixture_config(tmp.path());
    run_build(cfg);

    AnalyzeResult again = run_analyze(cfg);
    CHECK(again.reused_build_outputs);

    // A config change that affects the build invalidates the reuse.
    RunConfig kg = cfg;
    kg.mass_unit = MassUnit::kilograms;
    AnalyzeResult rebuilt = run_analyze(kg);
    CHECK(!rebuilt.reused_build_outputs);
}

TEST_CASE("analyze rerun with identical config is byte-identical") {
    testutil::TempDir tmp("det");
    std::filesystem::path out = tmp.path() / "out";
    RunConfig cfg = fixture_config(out);

    run_analyze(cfg);
    std::map<std::string, std::string> snapshot;
    for (const std::string& name : dir_files(out)) snapshot[name] = testutil::slurp(out / name);

    // Fresh run with the same config, nothing to reuse.
    std::filesystem::remove_all(out);
    run_analyze(cfg);

    CHECK(dir_files(out).size() == snapshot.size());
    for (const auto& [name, bytes] : snapshot) {
        CHECK_MESSAGE(testutil::slurp(out / name) == bytes, name);
    }

    // Third run on top of existing outputs (reuse path) changes nothing either.
    run_analyze(cfg);
    for (const auto& [name, bytes] : snapshot) {
        CHECK_MESSAGE(testutil::slurp(out / name) == bytes, name);
    }
}

TEST_CASE("seed changes partitions at most, never the metrics") {
    testutil::TempDir tmp1("seed1");
    testutil::TempDir tmp2("seed2");
    RunConfig cfg1 = fixture_config(tmp1.path());
    RunConfig cfg2 = fixture_config(tmp2.path());
    cfg2.seed = 7;
    run_analyze(cfg1);
    run_analyze(cfg2);

    for (const char* name : {"nodes_1990.csv", "nodes_1991.csv", "rankings.csv",
                             "zero_export.csv", "edges_1990.csv", "edges_1991.csv"}) {
        CHECK_MESSAGE(testutil::slurp(tmp1.path() / name) == testutil::slurp(tmp2.path() / name),
                      name);
    }
}

TEST_CASE("empty trade file yields zero years and success") {
    testutil::TempDir tmp("empty");
    std::filesystem::path trade = tmp.path() / "trade.csv";
    {
        std::ofstream out(trade);
        out << "year,reporter,partner,item,quantity_tonnes\n";
    }
    RunConfig cfg = fixture_config(tmp.path() / "out");
    cfg.trade_path = trade;
    BuildResult result = run_build(cfg);
    CHECK(result.networks.empty());
    CHECK(std::filesystem::exists(tmp.path() / "out" / "manifest.json"));

    AnalyzeResult analyzed = run_analyze(cfg);
    CHECK(analyzed.series.rows.empty());
    CHECK(testutil::slurp(tmp.path() / "out" / "summary.json") == "[]\n");
}

TEST_CASE("missing inputs are fatal") {
    testutil::TempDir tmp("missing");
    RunConfig cfg = fixture_config(tmp.path());
    cfg.factors_path = tmp.path() / "nope.csv";
    CHECK_THROWS_AS(run_build(cfg), IoError);
}

TEST_CASE("validate reports coverage and row issues") {
    testutil::TempDir tmp("validate");
    RunConfig cfg = fixture_config(tmp.path());
    ValidateReport report = run_validate(cfg);
    CHECK(!report.fatal);
    CHECK(report.stats.rows_accepted == 12);
    CHECK(report.items_missing_factor == std::vector<std::string>{"99"});
    CHECK(report.coverage == doctest::Approx(11.0 / 12.0));

    // Well-formed inputs with full coverage.
    std::filesystem::path trade = tmp.path() / "trade.csv";
    {
        std::ofstream out(trade);
        out << "year,reporter,partner,item,quantity_tonnes\n1990,AAA,BBB,11,1\n";
    }
    RunConfig clean = cfg;
    clean.trade_path = trade;
    ValidateReport ok = run_validate(clean);
    CHECK(!ok.fatal);
    CHECK(ok.coverage == 1.0);
    CHECK(ok.row_issues.empty());

    // Duplicate factor row is fatal.
    std::filesystem::path factors = tmp.path() / "factors.csv";
    {
        std::ofstream out(factors);
        out << "item,kcal_per_100g,category\n11,330,primary\n11,100,primary\n";
    }
    RunConfig dup = cfg;
    dup.factors_path = factors;
    ValidateReport bad = run_validate(dup);
    CHECK(bad.fatal);

    // Malformed rows come back with line numbers.
    std::filesystem::path messy = tmp.path() / "messy.csv";
    {
        std::ofstream out(messy);
        out << "year,reporter,partner,item,quantity_tonnes\n1990,AAA,BBB,11,1\noops\n";
    }
    RunConfig messy_cfg = cfg;
    messy_cfg.trade_path = messy;
    ValidateReport issues = run_validate(messy_cfg);
    CHECK(!issues.fatal);
    REQUIRE(issues.row_issues.size() == 1);
    CHECK(issues.row_issues[0].line == 3);
}

TEST_CASE("atomic_write never leaves a partial target") {
    testutil::TempDir tmp("atomic");
    std::filesystem::path target = tmp.path() / "file.txt";
    util::atomic_write(target, "first");
    CHECK(testutil::slurp(target) == "first");
    util::atomic_write(target, "second");
    CHECK(testutil::slurp(target) == "second");
    // No temp droppings left behind.
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(tmp.path())) {
        (void)entry;
        ++count;
    }
    CHECK(count == 1);
}

}  // TEST_SUITE
