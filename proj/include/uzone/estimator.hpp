#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "uzone/types.hpp"

namespace uzone {

/// Signed transaction-price jumps in ticks. Never contains zero.
using JumpSequence = std::vector<std::int32_t>;

/// Relative tolerance (in ticks) for deciding that a price move lies on the grid.
inline constexpr double kGridTolerance = 1e-6;

/// Collapses repeated prices and expresses every remaining move in ticks.
/// Throws DataError when a move is not an integer number of ticks.
JumpSequence extract_jumps(std::span<const double> prices, double tick);

struct TransitionCounts {
    std::int64_t continuations = 0;
    std::int64_t alternations = 0;

    TransitionCounts& operator+=(const TransitionCounts& o) {
        continuations += o.continuations;
        alternations += o.alternations;
        return *this;
    }
    friend bool operator==(const TransitionCounts&, const TransitionCounts&) = default;
};

/// Counts consecutive one-tick jump pairs with equal (continuation) or opposite
/// (alternation) sign. A jump of two ticks or more is skipped and the jump
/// following it starts a fresh pair.
TransitionCounts count_transitions(std::span<const std::int32_t> jumps);

/// N_c / (2 N_a); undefined when there are no alternations.
std::optional<double> eta_day(TransitionCounts counts);

/// Per-day statistics of one instrument.
struct DayStats {
    Date date{};
    TransitionCounts counts;
    std::optional<double> eta;
    std::optional<double> spread_ticks;  // mean (ask - bid) / tick
    std::size_t trade_count = 0;
    std::optional<double> sigma;  // realized volatility, currency
    std::set<double> observed_ticks;
};

/// Period-level estimate built from daily estimates.
struct EtaEstimate {
    double mean = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::size_t n_days = 0;
};

/// Linear-interpolation quantile between order statistics (R type 7).
/// `sample` must be non-empty; p in [0, 1].
double quantile(std::vector<double> sample, double p);

/// Mean and quartiles of the defined daily etas; nullopt if none are defined.
std::optional<EtaEstimate> eta_period(std::span<const DayStats> days);

/// Convenience: counts and daily eta for one day of prices at a known tick.
DayStats estimate_day(Date date, std::span<const double> prices, double tick);

}  // namespace uzone
