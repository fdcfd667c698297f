#ifndef CALNET_INGEST_HPP
#define CALNET_INGEST_HPP

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "calnet/netgraph.hpp"

namespace calnet {

enum class MassUnit { tonnes, kilograms };

/// Hundred-gram units per quantity unit: 1 tonne = 1e4 x 100 g,
/// 1 kg = 10 x 100 g.
double mass_unit_factor(MassUnit u);

struct IngestConfig {
    int year_from = 1986;
    int year_to = 2022;
    MassUnit mass_unit = MassUnit::tonnes;
};

/// One reporter-declared export row.
struct TradeRecord {
    int year = 0;
    std::string reporter;  // exporter
    std::string partner;   // importer
    std::string item;
    double quantity_tonnes = 0.0;  // interpreted per MassUnit
};

enum class FactorCategory { primary, secondary, animal };

struct NutritiveFactor {
    double kcal_per_100g = 0.0;
    FactorCategory category = FactorCategory::primary;
};

struct FactorTable {
    std::unordered_map<std::string, NutritiveFactor> entries;

    const NutritiveFactor* find(const std::string& item) const {
        auto it = entries.find(item);
        return it == entries.end() ? nullptr : &it->second;
    }
};

struct CalorieFlowRecord {
    int year = 0;
    std::string exporter;
    std::string importer;
    std::string item;
    double kcal = 0.0;
};

/// Row-rejection buckets, bytes read, and running conversion counters.
struct IngestStats {
    std::uint64_t rows_read = 0;      // data rows, header excluded
    std::uint64_t rows_accepted = 0;
    std::uint64_t bad_year = 0;
    std::uint64_t non_positive = 0;
    std::uint64_t self_trade = 0;
    std::uint64_t malformed = 0;
    std::uint64_t bytes_read = 0;     // raw bytes consumed, header included
    std::uint64_t records_missing_factor = 0;
    double kcal_total = 0.0;          // over all converted (non-excluded) records

    std::uint64_t rows_rejected() const { return bad_year + non_positive + self_trade + malformed; }
    /// Fraction of accepted rows whose item has a nutritive factor.
    double factor_coverage() const;
    std::string to_json() const;
};

enum class RejectReason { bad_year, non_positive_quantity, self_trade, malformed };

std::string_view reject_reason_name(RejectReason r);

/// Streaming core behind parse_trade_records: one pass over
/// `year,reporter,partner,item,quantity_tonnes` rows, invoking on_record for
/// each valid row in input order and on_reject (when set) with the 1-based
/// line number of each skipped row. A missing or misnamed header throws
/// ParseError; individual bad rows are never fatal.
void scan_trade_records(std::istream& in, const IngestConfig& config, IngestStats& stats,
                        const std::function<void(TradeRecord&&)>& on_record,
                        const std::function<void(std::uint64_t, RejectReason)>& on_reject = {});

/// Reads `year,reporter,partner,item,quantity_tonnes` rows. Invalid rows are
/// counted per bucket and skipped; a missing or misnamed header throws
/// ParseError. Output preserves input row order.
std::vector<TradeRecord> parse_trade_records(std::istream& in, const IngestConfig& config,
                                             IngestStats& stats);

/// Reads `item,kcal_per_100g,category` rows. Duplicate items, unknown
/// categories and negative factors are fatal.
FactorTable parse_nutritive_factors(std::istream& in);

/// Converts one record to kilocalories. Secondary-category items are
/// excluded (empty result, no counter); items absent from the table yield an
/// empty result and bump stats.records_missing_factor. Successful conversions
/// add to stats.kcal_total.
std::optional<CalorieFlowRecord> to_calories(const TradeRecord& record, const FactorTable& factors,
                                             const IngestConfig& config, IngestStats& stats);

/// Sums kcal per (importer, exporter) pair for one year. All records must
/// carry `year`; a mixed-year input throws ParseError. The node set is the
/// union of exporters and importers seen, sorted ascending.
CalorieMatrix aggregate_flows(const std::vector<CalorieFlowRecord>& records, int year);

/// Streaming equivalent of per-year aggregate_flows over a multi-year record
/// stream; used by the pipeline to avoid buffering converted records.
class FlowAccumulator {
public:
    void add(const CalorieFlowRecord& record);
    /// Finalizes one CalorieMatrix per year seen, keyed by year.
    std::map<int, CalorieMatrix> finish() const;

private:
    struct YearSlice {
        // Accumulation in input order keyed by (importer code, exporter code).
        std::map<std::pair<std::string, std::string>, double> sums;
    };
    std::map<int, YearSlice> years_;
};

}  // namespace calnet

#endif  // CALNET_INGEST_HPP
