#include "calnet/ingest.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "calnet/util.hpp"

namespace calnet {

double mass_unit_factor(MassUnit u) {
    return u == MassUnit::tonnes ? 1e4 : 10.0;
}

double IngestStats::factor_coverage() const {
    if (rows_accepted == 0) return 1.0;
    return 1.0 - static_cast<double>(records_missing_factor) / static_cast<double>(rows_accepted);
}

std::string IngestStats::to_json() const {
    nlohmann::json j;
    j["rows_read"] = rows_read;
    j["rows_accepted"] = rows_accepted;
    j["rows_rejected"] = {
        {"bad-year", bad_year},
        {"non-positive-quantity", non_positive},
        {"self-trade", self_trade},
        {"malformed", malformed},
    };
    j["records_missing_factor"] = records_missing_factor;
    j["kcal_total"] = kcal_total;
    return j.dump(2) + "\n";
}

namespace {

constexpr std::string_view kTradeHeader = "year,reporter,partner,item,quantity_tonnes";
constexpr std::string_view kFactorsHeader = "item,kcal_per_100g,category";

// Reads one line, stripping a trailing '\r'. Adds consumed bytes (including
// the newline when present) to `bytes`.
bool next_line(std::istream& in, std::string& line, std::uint64_t& bytes) {
    if (!std::getline(in, line)) return false;
    bytes += line.size() + (in.eof() ? 0 : 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

std::string_view reject_reason_name(RejectReason r) {
    switch (r) {
        case RejectReason::bad_year: return "bad-year";
        case RejectReason::non_positive_quantity: return "non-positive-quantity";
        case RejectReason::self_trade: return "self-trade";
        case RejectReason::malformed: return "malformed";
    }
    return "unknown";
}

void scan_trade_records(std::istream& in, const IngestConfig& config, IngestStats& stats,
                        const std::function<void(TradeRecord&&)>& on_record,
                        const std::function<void(std::uint64_t, RejectReason)>& on_reject) {
    std::string line;
    if (!next_line(in, line, stats.bytes_read) || line != kTradeHeader) {
        throw ParseError("trade CSV: missing or misnamed header (expected '" +
                         std::string(kTradeHeader) + "')");
    }

    std::uint64_t line_no = 1;
    std::vector<std::string_view> fields;
    auto reject = [&](RejectReason reason) {
        switch (reason) {
            case RejectReason::bad_year: ++stats.bad_year; break;
            case RejectReason::non_positive_quantity: ++stats.non_positive; break;
            case RejectReason::self_trade: ++stats.self_trade; break;
            case RejectReason::malformed: ++stats.malformed; break;
        }
        if (on_reject) on_reject(line_no, reason);
    };

    while (next_line(in, line, stats.bytes_read)) {
        ++line_no;
        if (line.empty()) continue;
        ++stats.rows_read;
        if (!util::split_fields(line, fields, 5)) {
            reject(RejectReason::malformed);
            continue;
        }
        auto year = util::parse_int(fields[0]);
        auto quantity = util::parse_double(fields[4]);
        if (!year || !quantity || !std::isfinite(*quantity) || fields[1].empty() ||
            fields[2].empty() || fields[3].empty()) {
            reject(RejectReason::malformed);
            continue;
        }
        if (*year < config.year_from || *year > config.year_to) {
            reject(RejectReason::bad_year);
            continue;
        }
        if (*quantity <= 0.0) {
            reject(RejectReason::non_positive_quantity);
            continue;
        }
        if (fields[1] == fields[2]) {
            reject(RejectReason::self_trade);
            continue;
        }
        ++stats.rows_accepted;
        on_record({static_cast<int>(*year), std::string(fields[1]), std::string(fields[2]),
                   std::string(fields[3]), *quantity});
    }
    if (in.bad()) throw IoError("trade CSV: stream read error");
}

std::vector<TradeRecord> parse_trade_records(std::istream& in, const IngestConfig& config,
                                             IngestStats& stats) {
    std::vector<TradeRecord> out;
    scan_trade_records(in, config, stats, [&](TradeRecord&& r) { out.push_back(std::move(r)); });
    return out;
}

FactorTable parse_nutritive_factors(std::istream& in) {
    std::string line;
    std::uint64_t bytes = 0;
    if (!next_line(in, line, bytes) || line != kFactorsHeader) {
        throw ParseError("factors CSV: missing or misnamed header (expected '" +
                         std::string(kFactorsHeader) + "')");
    }

    FactorTable table;
    std::vector<std::string_view> fields;
    std::uint64_t line_no = 1;
    while (next_line(in, line, bytes)) {
        ++line_no;
        if (line.empty()) continue;
        if (!util::split_fields(line, fields, 3)) {
            throw ParseError("factors CSV line " + std::to_string(line_no) + ": expected 3 fields");
        }
        std::string item(fields[0]);
        auto factor = util::parse_double(fields[1]);
        if (item.empty() || !factor || !std::isfinite(*factor)) {
            throw ParseError("factors CSV line " + std::to_string(line_no) + ": malformed row");
        }
        if (*factor < 0.0) {
            throw ParseError("factors CSV line " + std::to_string(line_no) +
                             ": negative kcal_per_100g");
        }
        FactorCategory category;
        if (fields[2] == "primary") {
            category = FactorCategory::primary;
        } else if (fields[2] == "secondary") {
            category = FactorCategory::secondary;
        } else if (fields[2] == "animal") {
            category = FactorCategory::animal;
        } else {
            throw ParseError("factors CSV line " + std::to_string(line_no) +
                             ": unknown category '" + std::string(fields[2]) + "'");
        }
        auto [it, inserted] = table.entries.emplace(item, NutritiveFactor{*factor, category});
        if (!inserted) {
            throw ParseError("factors CSV line " + std::to_string(line_no) + ": duplicate item '" +
                             item + "'");
        }
    }
    if (in.bad()) throw IoError("factors CSV: stream read error");
    return table;
}

std::optional<CalorieFlowRecord> to_calories(const TradeRecord& record, const FactorTable& factors,
                                             const IngestConfig& config, IngestStats& stats) {
    const NutritiveFactor* factor = factors.find(record.item);
    if (factor == nullptr) {
        ++stats.records_missing_factor;
        return std::nullopt;
    }
    if (factor->category == FactorCategory::secondary) return std::nullopt;
    double kcal = record.quantity_tonnes * mass_unit_factor(config.mass_unit) * factor->kcal_per_100g;
    stats.kcal_total += kcal;
    return CalorieFlowRecord{record.year, record.reporter, record.partner, record.item, kcal};
}

void FlowAccumulator::add(const CalorieFlowRecord& record) {
    if (record.exporter == record.importer) {
        throw ParseError("self-trade record cannot enter a CalorieMatrix");
    }
    years_[record.year].sums[{record.importer, record.exporter}] += record.kcal;
}

std::map<int, CalorieMatrix> FlowAccumulator::finish() const {
    std::map<int, CalorieMatrix> out;
    for (const auto& [year, slice] : years_) {
        CalorieMatrix m;
        m.year = year;
        for (const auto& entry : slice.sums) {
            m.nodes.push_back(entry.first.first);
            m.nodes.push_back(entry.first.second);
        }
        std::sort(m.nodes.begin(), m.nodes.end());
        m.nodes.erase(std::unique(m.nodes.begin(), m.nodes.end()), m.nodes.end());
        for (const auto& [pair, kcal] : slice.sums) {
            m.gross[{m.index_of(pair.first), m.index_of(pair.second)}] = kcal;
        }
        out.emplace(year, std::move(m));
    }
    return out;
}

CalorieMatrix aggregate_flows(const std::vector<CalorieFlowRecord>& records, int year) {
    FlowAccumulator acc;
    for (const CalorieFlowRecord& r : records) {
        if (r.year != year) {
            throw ParseError("aggregate_flows: record year " + std::to_string(r.year) +
                             " does not match " + std::to_string(year));
        }
        acc.add(r);
    }
    auto by_year = acc.finish();
    if (by_year.empty()) {
        CalorieMatrix empty;
        empty.year = year;
        return empty;
    }
    return std::move(by_year.begin()->second);
}

}  // namespace calnet
