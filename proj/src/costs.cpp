#include "uzone/costs.hpp"

#include <stdexcept>

namespace uzone {

MarketOrderCost market_order_cost(double alpha, double eta) {
    return {alpha / 2.0 - eta * alpha, eta > 0.5};
}

double implicit_spread(double alpha, double eta) {
    return 2.0 * eta * alpha;
}

std::optional<VolStat> realized_vol(std::span<const TradeRecord> day, std::chrono::microseconds grid) {
    if (grid <= std::chrono::microseconds{0}) throw std::invalid_argument("realized_vol: grid must be positive");
    if (day.empty()) return std::nullopt;

    const Timestamp first = day.front().timestamp;
    const Timestamp last = day.back().timestamp;
    const auto n_points = (last - first) / grid + 1;
    if (n_points < 2) return std::nullopt;

    double sum_sq = 0.0;
    double previous = day.front().price;
    std::size_t i = 0;
    for (std::int64_t k = 1; k < n_points; ++k) {
        const Timestamp g = first + k * grid;
        while (i + 1 < day.size() && day[i + 1].timestamp <= g) ++i;
        const double sample = day[i].price;
        const double r = sample - previous;
        sum_sq += r * r;
        previous = sample;
    }
    return VolStat{std::sqrt(sum_sq), day.size()};
}

std::optional<double> fit_c(std::span<const CostObservation> observations) {
    if (observations.size() < 2) return std::nullopt;
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& o : observations) {
        sxy += o.vol_per_trade * o.eta_alpha;
        sxx += o.vol_per_trade * o.vol_per_trade;
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

double mm_edge(double spread_ticks, double alpha, double sigma, std::size_t trades, double c) {
    if (trades == 0) throw std::invalid_argument("mm_edge: at least one trade per day required");
    return spread_ticks * alpha / 2.0 - c * sigma / std::sqrt(static_cast<double>(trades));
}

CostReport cost_report(double alpha, double eta, double spread_ticks, const VolStat& vol, double c) {
    CostReport r;
    r.market_order = market_order_cost(alpha, eta);
    r.implicit_spread = implicit_spread(alpha, eta);
    r.vol_per_trade = vol_per_trade(vol);
    r.c = c;
    r.mm_edge = vol.trades > 0 ? mm_edge(spread_ticks, alpha, vol.sigma, vol.trades, c) : 0.0;
    return r;
}

}  // namespace uzone
