// Independent recomputation of everything the hand fixture should produce.
//
// The fixture rows are embedded here as literals and all quantities are
// recomputed spreadsheet-style with dense matrices and direct double sums,
// deliberately sharing no code with the library. Tests compare library
// output against these values.

#ifndef CALNET_TESTS_FIXTURE_ORACLE_HPP
#define CALNET_TESTS_FIXTURE_ORACLE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fixture {

struct TradeRow {
    int year;
    const char* reporter;
    const char* partner;
    const char* item;
    double quantity;
};

struct FactorRow {
    const char* item;
    double kcal_per_100g;
    const char* category;
};

// Same content as tests/data/fixture_trade.csv / fixture_factors.csv.
const std::vector<TradeRow>& trade_rows();
const std::vector<FactorRow>& factor_rows();

struct OracleEdge {
    std::string src;
    std::string dst;
    double kcal;
};

struct OracleYear {
    int year = 0;
    std::vector<std::string> nodes;          // sorted
    std::vector<OracleEdge> edges;           // sorted by (src, dst)
    std::vector<int> k_in, k_out;            // by node order
    std::vector<double> s_in, s_out;         // by node order
    double total_weight = 0.0;
    double connectivity = 0.0;
    double h = 0.0;
    double h_w = 0.0;
    std::optional<double> degree_corr;
    double r_row_row_unweighted = 0.0;
    double r_row_row_weighted = 0.0;
    double r_in_out_unweighted = 0.0;
    double r_in_out_weighted = 0.0;
    // Fixed reference partition, by node order: {ARG,USA | BRA,CHN | EGY}.
    std::vector<int> fixed_partition;
    double q_fixed_unweighted = 0.0;
    double q_fixed_weighted = 0.0;
    std::vector<std::pair<std::string, double>> top_exporters;  // full ranking
    std::vector<std::pair<std::string, double>> top_importers;
    std::vector<std::string> peripheral;  // sorted
    double zero_export_fraction = 0.0;
};

struct OracleExpectations {
    std::map<int, OracleYear> years;
    double kcal_total = 0.0;             // over all converted records
    int records_missing_factor = 0;
    int rows_read = 0;
    int rows_accepted = 0;
    double stage_mean_1986_1996 = 0.0;   // only stage with fixture years
};

/// Recomputes the whole expectation set from the literals above.
const OracleExpectations& expectations();

}  // namespace fixture

#endif  // CALNET_TESTS_FIXTURE_ORACLE_HPP
