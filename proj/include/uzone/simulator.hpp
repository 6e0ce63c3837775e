#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "uzone/ingest.hpp"
#include "uzone/types.hpp"

namespace uzone {

/// Parameters of one simulated instrument under the uncertainty-zones model.
///
/// The efficient price is a driftless Brownian motion with `sigma` currency
/// units of standard deviation per trading day. A trading day is the total
/// length of `sessions` (trims ignored); weekends are skipped.
struct SimConfig {
    double eta = 0.25;              // in (0, 0.5]
    double alpha = 1.0;             // tick value
    double sigma = 30.0;            // per trading day
    double initial_price = 3000.0;  // must lie on the alpha grid
    std::size_t n_changes = 10'000;
    double trades_between = 2.0;    // Poisson mean of same-price trades between changes
    std::uint64_t seed = 1;
    Date start_date = Date{std::chrono::year{2013}, std::chrono::month{6}, std::chrono::day{3}};
    SessionSpec sessions{{Session{std::chrono::hours{9}, std::chrono::hours{15}}}};
    /// Euler step standard deviation is (smaller barrier distance) / this.
    double steps_per_barrier = 10.0;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

/// Synthetic trades plus the ground truth that generated them.
struct SimPath {
    std::vector<TradeRecord> trades;
    double eta_true = 0.0;
    std::vector<std::int8_t> directions;  // +1 / -1 per price change
};

/// Deterministic in `config` (including the seed). Produces exactly
/// config.n_changes one-tick price changes. Quotes straddle the last trade by
/// one tick on the side of the last move.
///
/// Throws std::runtime_error if the path drives the bid to zero or below.
SimPath simulate(const SimConfig& config);

/// Probability that a one-tick move repeats the previous direction:
/// 2*eta / (1 + 2*eta).
double continuation_prob(double eta);

/// Writes the path in the delimited format parse_trades reads.
void export_trades(const SimPath& path, std::ostream& out, const CsvFormat& format = {});

}  // namespace uzone
