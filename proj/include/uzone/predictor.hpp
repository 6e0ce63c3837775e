#pragma once

#include <optional>

#include "uzone/classification.hpp"
#include "uzone/estimator.hpp"

namespace uzone {

/// Current and new tick value, both in currency units.
struct TickChange {
    double from = 0.0;
    double to = 0.0;

    double ratio() const { return from / to; }
    /// Throws std::invalid_argument unless both ticks are positive and finite.
    void validate() const;
};

/// Cut-offs applied to a forecast eta.
struct PredictionThresholds {
    double large_tick_below = 0.5;  // eta_p < this -> stays large tick
    double small_tick_from = 0.55;  // eta_p >= this -> becomes small tick
    double balanced_min_eta = 0.4;
};

/// Shift of the latent-liquidity term in the eta scaling law.
inline constexpr double kEtaOffset = 0.1;

/// eta after the tick moves from change.from to change.to:
/// (eta0 + 0.1) * sqrt(from / to) - 0.1.
double predict_eta(double eta0, TickChange change);

/// Tick value at which the forecast eta equals 1/2.
double optimal_tick(double eta0, double alpha0);

Regime classify_prediction(double eta_p, const PredictionThresholds& t = {});

/// Small tick and ambiguous forecasts count as balanced.
Balance balance_forecast(double eta_p, Regime regime_p, const PredictionThresholds& t = {});

struct Prediction {
    double eta = 0.0;            // reported point, clamped into [ci_low, ci_high]
    double eta_unclamped = 0.0;  // raw forecast from the mean
    double ci_low = 0.0;
    double ci_high = 0.0;
    Regime regime = Regime::LargeTick;  // from eta_unclamped
    Balance balance = Balance::MarketMakerFavorable;  // from eta and regime
    bool clamped = false;
};

/// Point forecast from the mean, interval from the mapped quartiles.
Prediction predict_with_ci(const EtaEstimate& estimate, TickChange change,
                           const PredictionThresholds& t = {});

inline std::optional<Prediction> predict_with_ci(const std::optional<EtaEstimate>& estimate,
                                                 TickChange change,
                                                 const PredictionThresholds& t = {}) {
    if (!estimate) return std::nullopt;
    return predict_with_ci(*estimate, change, t);
}

}  // namespace uzone
