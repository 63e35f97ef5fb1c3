#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "edtwk/common.hpp"

namespace edtwk {

/// Dates x tickers matrix of closing prices.
struct PriceTable {
    std::vector<std::string> dates;    // strictly increasing ISO-8601
    std::vector<std::string> tickers;
    Matrix prices;                     // rows = dates, cols = tickers, all > 0

    long n_days() const { return static_cast<long>(dates.size()); }
    long n_assets() const { return static_cast<long>(tickers.size()); }
    void validate() const;
};

enum class MissingPolicy { Reject, ForwardFill };

/// Parse the CSV price format: header `date,T1,T2,...`, one row per trading day.
PriceTable parse_prices(std::istream& in, MissingPolicy policy = MissingPolicy::Reject);

/// |sample Pearson correlation|; 0 when either series has zero variance.
double pearson_abs(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y);

/// Symmetric |Pearson| adjacency for the window ending at trading day t.
struct NetworkSnapshot {
    int t = 0;
    Matrix adjacency;  // zero diagonal, entries in [0,1]

    void validate() const;
};

std::vector<NetworkSnapshot> build_network_sequence(const PriceTable& prices, int width);

struct Regime {
    int start_day = 0;
    int end_day = 0;    // exclusive
    double loading = 0.0;
};

struct SynthConfig {
    int n_assets = 30;
    int n_days = 600;
    std::vector<Regime> regimes;
    double noise_scale = 0.02;
    std::uint64_t seed = 0;

    // One-factor model shape. A core block of assets carries the full factor
    // loading; the rest are nearly decoupled, so a high-loading regime forms a
    // tight clique against a diffuse background. The idiosyncratic component is
    // a stationary AR(1) on log-price levels, which keeps windowed price
    // correlations near zero when the loading is zero.
    double core_fraction = 0.2;
    double core_exposure = 1.0;
    double background_exposure = 0.05;
    double ar_coefficient = 0.6;

    void validate() const;
};

/// Deterministic synthetic market; same config + seed gives a bit-identical table.
PriceTable synth_market(const SynthConfig& cfg);

}  // namespace edtwk
