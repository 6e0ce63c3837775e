#include "uzone/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace uzone {

JumpSequence extract_jumps(std::span<const double> prices, double tick) {
    if (!(tick > 0.0)) throw std::invalid_argument("extract_jumps: tick must be positive");
    JumpSequence jumps;
    for (std::size_t i = 1; i < prices.size(); ++i) {
        const double diff = prices[i] - prices[i - 1];
        if (diff == 0.0) continue;
        const double in_ticks = diff / tick;
        const double rounded = std::round(in_ticks);
        if (std::fabs(in_ticks - rounded) > kGridTolerance * std::max(1.0, std::fabs(rounded))) {
            throw DataError("non-grid price change from " + std::to_string(prices[i - 1]) + " to " +
                            std::to_string(prices[i]) + " (index " + std::to_string(i) +
                            ") at tick " + std::to_string(tick));
        }
        // Sub-tolerance wiggles between equal prices round to zero; they are not moves.
        if (rounded == 0.0) continue;
        jumps.push_back(static_cast<std::int32_t>(rounded));
    }
    return jumps;
}

TransitionCounts count_transitions(std::span<const std::int32_t> jumps) {
    TransitionCounts counts;
    std::int32_t previous = 0;  // 0: no one-tick predecessor
    for (const auto j : jumps) {
        if (j != 1 && j != -1) {
            previous = 0;
            continue;
        }
        if (previous != 0) {
            if (j == previous) {
                ++counts.continuations;
            } else {
                ++counts.alternations;
            }
        }
        previous = j;
    }
    return counts;
}

std::optional<double> eta_day(TransitionCounts counts) {
    if (counts.alternations <= 0) return std::nullopt;
    return static_cast<double>(counts.continuations) / (2.0 * static_cast<double>(counts.alternations));
}

double quantile(std::vector<double> sample, double p) {
    if (sample.empty()) throw std::invalid_argument("quantile of an empty sample");
    std::sort(sample.begin(), sample.end());
    const double h = (static_cast<double>(sample.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sample.size() - 1);
    return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

std::optional<EtaEstimate> eta_period(std::span<const DayStats> days) {
    std::vector<double> etas;
    etas.reserve(days.size());
    for (const auto& d : days) {
        if (d.eta) etas.push_back(*d.eta);
    }
    if (etas.empty()) return std::nullopt;

    EtaEstimate est;
    est.n_days = etas.size();
    est.mean = std::accumulate(etas.begin(), etas.end(), 0.0) / static_cast<double>(etas.size());
    est.q25 = quantile(etas, 0.25);
    est.q75 = quantile(std::move(etas), 0.75);
    return est;
}

DayStats estimate_day(Date date, std::span<const double> prices, double tick) {
    DayStats stats;
    stats.date = date;
    stats.counts = count_transitions(extract_jumps(prices, tick));
    stats.eta = eta_day(stats.counts);
    stats.trade_count = prices.size();
    if (!prices.empty()) stats.observed_ticks.insert(tick);
    return stats;
}

}  // namespace uzone
