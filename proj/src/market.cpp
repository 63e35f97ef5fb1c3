#include "edtwk/market.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <random>
#include <sstream>

#include "edtwk/csv.hpp"

namespace edtwk {

void PriceTable::validate() const {
    if (tickers.size() < 2) throw shape_error("price table needs at least 2 tickers");
    if (dates.size() < 2) throw shape_error("price table needs at least 2 dates");
    if (prices.rows() != n_days() || prices.cols() != n_assets())
        throw shape_error("price matrix shape does not match dates x tickers");
    for (std::size_t i = 1; i < dates.size(); ++i)
        if (!(dates[i - 1] < dates[i]))
            throw validation_error("dates not strictly increasing at row " + std::to_string(i + 1));
    if ((prices.array() <= 0.0).any())
        throw validation_error("all prices must be positive");
}

PriceTable parse_prices(std::istream& in, MissingPolicy policy) {
    PriceTable table;
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line)) throw parse_error("empty input", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.size() < 3)
        throw shape_error("header must name a date column plus at least 2 tickers");
    table.tickers.assign(header.begin() + 1, header.end());

    const std::size_t n_cols = header.size();
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != n_cols)
            throw parse_error("expected " + std::to_string(n_cols) + " columns, got " +
                                  std::to_string(cells.size()),
                              lineno);
        table.dates.push_back(cells[0]);
        std::vector<double> row(n_cols - 1);
        for (std::size_t j = 1; j < n_cols; ++j) {
            const std::string& cell = cells[j];
            if (cell.empty()) {
                if (policy == MissingPolicy::ForwardFill && !rows.empty()) {
                    row[j - 1] = rows.back()[j - 1];
                    continue;
                }
                throw parse_error("missing price for ticker " + table.tickers[j - 1], lineno);
            }
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw parse_error("malformed price cell '" + cell + "'", lineno);
            }
            if (pos != cell.size()) throw parse_error("malformed price cell '" + cell + "'", lineno);
            if (!(v > 0.0))
                throw validation_error("non-positive price " + cell + " at line " +
                                       std::to_string(lineno));
            row[j - 1] = v;
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw shape_error("need at least 2 data rows");

    table.prices.resize(static_cast<long>(rows.size()), static_cast<long>(n_cols - 1));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j + 1 < n_cols; ++j) table.prices(i, j) = rows[i][j];
    table.validate();
    return table;
}

double pearson_abs(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y) {
    if (x.size() != y.size()) throw shape_error("pearson_abs: length mismatch");
    if (x.size() < 2) throw shape_error("pearson_abs: need at least 2 observations");
    const Vector xc = x.array() - x.mean();
    const Vector yc = y.array() - y.mean();
    const double sx = xc.squaredNorm();
    const double sy = yc.squaredNorm();
    if (sx == 0.0 || sy == 0.0) return 0.0;  // no linear co-movement
    double r = xc.dot(yc) / std::sqrt(sx * sy);
    r = std::clamp(r, -1.0, 1.0);
    return std::abs(r);
}

void NetworkSnapshot::validate() const {
    if (adjacency.rows() != adjacency.cols()) throw shape_error("adjacency not square");
    if (adjacency.diagonal().cwiseAbs().maxCoeff() != 0.0)
        throw validation_error("adjacency diagonal must be zero");
    if ((adjacency - adjacency.transpose()).cwiseAbs().maxCoeff() != 0.0)
        throw validation_error("adjacency must be symmetric");
    if (adjacency.minCoeff() < 0.0 || adjacency.maxCoeff() > 1.0)
        throw validation_error("adjacency entries must lie in [0,1]");
}

std::vector<NetworkSnapshot> build_network_sequence(const PriceTable& prices, int width) {
    if (width < 2) throw shape_error("window width must be >= 2");
    const long n_days = prices.n_days();
    const long n = prices.n_assets();
    if (width > n_days) throw shape_error("window width exceeds number of days");

    std::vector<NetworkSnapshot> out;
    out.reserve(n_days - width + 1);
    for (long t = width - 1; t < n_days; ++t) {
        NetworkSnapshot snap;
        snap.t = static_cast<int>(t);
        snap.adjacency = Matrix::Zero(n, n);
        const auto window = prices.prices.block(t - width + 1, 0, width, n);
        for (long u = 0; u < n; ++u)
            for (long v = u + 1; v < n; ++v) {
                const double w = pearson_abs(window.col(u), window.col(v));
                snap.adjacency(u, v) = w;
                snap.adjacency(v, u) = w;
            }
        out.push_back(std::move(snap));
    }
    return out;
}

void SynthConfig::validate() const {
    if (n_assets < 2) throw config_error("n_assets must be >= 2");
    if (n_days < 2) throw config_error("n_days must be >= 2");
    if (!(noise_scale > 0.0)) throw config_error("noise_scale must be positive");
    if (core_fraction < 0.0 || core_fraction > 1.0) throw config_error("core_fraction in [0,1]");
    if (ar_coefficient < 0.0 || ar_coefficient >= 1.0) throw config_error("ar_coefficient in [0,1)");
    std::vector<Regime> sorted = regimes;
    std::sort(sorted.begin(), sorted.end(),
              [](const Regime& a, const Regime& b) { return a.start_day < b.start_day; });
    int prev_end = 0;
    for (const auto& r : sorted) {
        if (r.loading < 0.0 || r.loading > 1.0) throw config_error("regime loading in [0,1]");
        if (r.start_day < 0 || r.end_day > n_days || r.start_day >= r.end_day)
            throw config_error("regime interval out of range");
        if (r.start_day < prev_end) throw config_error("regimes overlap");
        prev_end = r.end_day;
    }
}

PriceTable synth_market(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const int n = cfg.n_assets;
    const int n_core = std::max(1, static_cast<int>(std::lround(cfg.core_fraction * n)));
    std::vector<double> exposure(n, cfg.background_exposure);
    {
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int i = 0; i < n_core; ++i) exposure[idx[i]] = cfg.core_exposure;
    }

    const double phi = cfg.ar_coefficient;
    const double s_u = std::sqrt(1.0 - phi * phi);
    double factor = 0.0;
    std::vector<double> noise(n, 0.0);

    PriceTable table;
    table.tickers.resize(n);
    for (int j = 0; j < n; ++j) {
        char name[16];
        std::snprintf(name, sizeof(name), "A%03d", j);
        table.tickers[j] = name;
    }
    table.dates.resize(cfg.n_days);
    table.prices.resize(cfg.n_days, n);

    for (int t = 0; t < cfg.n_days; ++t) {
        double loading = 0.0;
        for (const auto& r : cfg.regimes)
            if (r.start_day <= t && t < r.end_day) loading = r.loading;

        factor += gauss(rng);
        for (int j = 0; j < n; ++j) noise[j] = phi * noise[j] + s_u * gauss(rng);

        for (int j = 0; j < n; ++j) {
            const double lam = loading * exposure[j];
            const double level = lam * factor + std::sqrt(1.0 - lam * lam) * noise[j];
            table.prices(t, j) = std::exp(std::log(100.0) + cfg.noise_scale * level);
        }
        // synthetic calendar: ISO dates spaced one day apart starting 2000-01-01
        const int serial = t;
        char date[16];
        std::snprintf(date, sizeof(date), "%04d-%02d-%02d", 2000 + serial / 360,
                      1 + (serial % 360) / 30, 1 + serial % 30);
        table.dates[t] = date;
    }
    table.validate();
    return table;
}

}  // namespace edtwk
