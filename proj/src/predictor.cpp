#include "uzone/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uzone {

void TickChange::validate() const {
    if (!(from > 0.0) || !(to > 0.0) || !std::isfinite(from) || !std::isfinite(to)) {
        throw std::invalid_argument("tick change: both tick values must be positive");
    }
}

double predict_eta(double eta0, TickChange change) {
    change.validate();
    // Same as (eta0 + offset) * sqrt(ratio) - offset, but exact when the tick is unchanged.
    return eta0 + (eta0 + kEtaOffset) * (std::sqrt(change.from / change.to) - 1.0);
}

double optimal_tick(double eta0, double alpha0) {
    if (!(alpha0 > 0.0)) throw std::invalid_argument("optimal_tick: alpha0 must be positive");
    const double r = (eta0 + kEtaOffset) / (0.5 + kEtaOffset);
    return r * r * alpha0;
}

Regime classify_prediction(double eta_p, const PredictionThresholds& t) {
    if (eta_p >= t.small_tick_from) return Regime::SmallTick;
    if (eta_p < t.large_tick_below) return Regime::LargeTick;
    return Regime::Ambiguous;
}

Balance balance_forecast(double eta_p, Regime regime_p, const PredictionThresholds& t) {
    if (regime_p != Regime::LargeTick) return Balance::Balanced;
    return eta_p >= t.balanced_min_eta ? Balance::Balanced : Balance::MarketMakerFavorable;
}

Prediction predict_with_ci(const EtaEstimate& estimate, TickChange change, const PredictionThresholds& t) {
    Prediction p;
    p.ci_low = predict_eta(estimate.q25, change);
    p.ci_high = predict_eta(estimate.q75, change);
    p.eta_unclamped = predict_eta(estimate.mean, change);
    p.eta = std::clamp(p.eta_unclamped, p.ci_low, p.ci_high);
    p.clamped = p.eta != p.eta_unclamped;
    p.regime = classify_prediction(p.eta_unclamped, t);
    p.balance = balance_forecast(p.eta, p.regime, t);
    return p;
}

}  // namespace uzone
