#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

#include "uzone/types.hpp"

namespace uzone {

struct MarketOrderCost {
    double value = 0.0;  // currency per unit volume
    /// eta > 1/2: makers would lose money and are expected to widen the spread.
    bool spread_widening_expected = false;
};

/// alpha/2 - eta*alpha
MarketOrderCost market_order_cost(double alpha, double eta);

/// 2*eta*alpha, width of the uncertainty zone.
double implicit_spread(double alpha, double eta);

struct VolStat {
    double sigma = 0.0;       // sqrt of realized daily variance, currency
    std::size_t trades = 0;   // M
};

inline constexpr std::chrono::microseconds kDefaultVolGrid = std::chrono::minutes{5};

/// Realized volatility of one day: last-trade prices are sampled every `grid`
/// starting at the first trade; sigma is the root of the summed squared
/// absolute increments. nullopt with fewer than two grid points.
std::optional<VolStat> realized_vol(std::span<const TradeRecord> day,
                                    std::chrono::microseconds grid = kDefaultVolGrid);

inline double vol_per_trade(const VolStat& v) {
    return v.trades == 0 ? 0.0 : v.sigma / std::sqrt(static_cast<double>(v.trades));
}

/// One (eta*alpha, sigma/sqrt(M)) point.
struct CostObservation {
    double eta_alpha = 0.0;
    double vol_per_trade = 0.0;
};

/// Least-squares slope through the origin of eta*alpha on sigma/sqrt(M).
/// nullopt with fewer than two points or an all-zero regressor.
std::optional<double> fit_c(std::span<const CostObservation> observations);

/// Market maker P&L per trade: S*alpha/2 - c*sigma/sqrt(M).
double mm_edge(double spread_ticks, double alpha, double sigma, std::size_t trades, double c = 1.0);

struct CostReport {
    MarketOrderCost market_order;
    double implicit_spread = 0.0;
    double vol_per_trade = 0.0;
    double c = 1.0;
    double mm_edge = 0.0;
};

CostReport cost_report(double alpha, double eta, double spread_ticks, const VolStat& vol,
                       double c = 1.0);

}  // namespace uzone
