#include "calnet/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace calnet {

NodeDegrees degrees(const NetTradeNetwork& g) {
    NodeDegrees d;
    std::size_t n = g.node_count();
    d.k_in.assign(n, 0);
    d.k_out.assign(n, 0);
    d.s_in.assign(n, 0.0);
    d.s_out.assign(n, 0.0);
    for (const NetEdge& e : g.edges) {
        d.k_out[e.src] += 1;
        d.k_in[e.dst] += 1;
        d.s_out[e.src] += e.kcal;
        d.s_in[e.dst] += e.kcal;
    }
    return d;
}

std::optional<double> connectivity(const NetTradeNetwork& g) {
    double n = static_cast<double>(g.node_count());
    if (g.node_count() < 2) return std::nullopt;
    return static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

std::optional<double> heterogeneity(const NetTradeNetwork& g, bool weighted) {
    std::size_t n = g.node_count();
    if (n == 0) return std::nullopt;
    if (g.edge_count() == 0) return std::nullopt;  // 0/0 both weighted and not
    if (weighted && !(g.total_weight > 0.0)) return std::nullopt;

    NodeDegrees d = degrees(g);
    double imbalance = 0.0;  // sum |in - out|
    double total = 0.0;      // sum (in + out)
    for (std::size_t i = 0; i < n; ++i) {
        double in = weighted ? d.s_in[i] : static_cast<double>(d.k_in[i]);
        double out = weighted ? d.s_out[i] : static_cast<double>(d.k_out[i]);
        imbalance += std::abs(in - out);
        total += in + out;
    }
    // <|in-out|> / <in+out>; the 1/N factors cancel.
    return imbalance / total;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    if (n != y.size() || n < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> degree_correlation(const NetTradeNetwork& g) {
    if (g.node_count() < 2) return std::nullopt;
    NodeDegrees d = degrees(g);
    return pearson(d.s_out, d.s_in);
}

namespace {

// Dense in-profile matrix: row i holds w_ik = flow k -> i (1.0 when
// unweighted), diagonal zero.
std::vector<double> in_profile_matrix(const NetTradeNetwork& g, bool weighted) {
    std::size_t n = g.node_count();
    std::vector<double> w(n * n, 0.0);
    for (const NetEdge& e : g.edges) {
        w[static_cast<std::size_t>(e.dst) * n + static_cast<std::size_t>(e.src)] =
            weighted ? e.kcal : 1.0;
    }
    return w;
}

struct CenteredRow {
    std::vector<double> values;  // entries minus row mean
    double norm2 = 0.0;          // sum of squared centered entries
};

CenteredRow center(const double* row, std::size_t n) {
    CenteredRow c;
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) mean += row[k];
    mean /= static_cast<double>(n);
    c.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        c.values[k] = row[k] - mean;
        c.norm2 += c.values[k] * c.values[k];
    }
    return c;
}

double pair_correlation(const CenteredRow& a, const CenteredRow& b) {
    // Zero-variance profiles contribute 0 rather than dropping the pair.
    if (a.norm2 == 0.0 || b.norm2 == 0.0) return 0.0;
    double cov = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) cov += a.values[k] * b.values[k];
    return std::clamp(cov / std::sqrt(a.norm2 * b.norm2), -1.0, 1.0);
}

}  // namespace

std::optional<double> node_correlation_similarity(const NetTradeNetwork& g, bool weighted,
                                                  CorrelationVariant variant) {
    std::size_t n = g.node_count();
    if (n < 2) return std::nullopt;

    std::vector<double> w = in_profile_matrix(g, weighted);

    if (variant == CorrelationVariant::row_row) {
        std::vector<CenteredRow> rows;
        rows.reserve(n);
        for (std::size_t i = 0; i < n; ++i) rows.push_back(center(&w[i * n], n));
        // Pearson is symmetric, so sum unordered pairs once and double the
        // total; node-index order keeps the summation deterministic.
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                sum += pair_correlation(rows[i], rows[j]);
            }
        }
        return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
    }

    // in_out_self: column i of the in-profile matrix is node i's out-profile.
    double sum = 0.0;
    std::vector<double> out_profile(n);
    for (std::size_t i = 0; i < n; ++i) {
        CenteredRow in = center(&w[i * n], n);
        for (std::size_t k = 0; k < n; ++k) out_profile[k] = w[k * n + i];
        CenteredRow out = center(out_profile.data(), n);
        sum += pair_correlation(in, out);
    }
    return sum / static_cast<double>(n);
}

}  // namespace calnet
