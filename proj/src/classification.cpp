#include "uzone/classification.hpp"

#include <stdexcept>

namespace uzone {

std::optional<double> avg_spread_ticks(std::span<const TradeRecord> trades, double tick) {
    if (!(tick > 0.0)) throw std::invalid_argument("avg_spread_ticks: tick must be positive");
    double sum_of_daily = 0.0;
    std::size_t n_days = 0;

    double day_sum = 0.0;
    std::size_t day_n = 0;
    Date current{};
    for (const auto& t : trades) {
        const Date d = date_of(t.timestamp);
        if (day_n > 0 && d != current) {
            sum_of_daily += day_sum / static_cast<double>(day_n);
            ++n_days;
            day_sum = 0.0;
            day_n = 0;
        }
        current = d;
        day_sum += (t.ask - t.bid) / tick;
        ++day_n;
    }
    if (day_n > 0) {
        sum_of_daily += day_sum / static_cast<double>(day_n);
        ++n_days;
    }
    if (n_days == 0) return std::nullopt;
    return sum_of_daily / static_cast<double>(n_days);
}

Regime classify_regime(double spread_ticks, const ClassificationThresholds& t) {
    if (spread_ticks <= t.large_tick_max_spread) return Regime::LargeTick;
    if (spread_ticks > t.small_tick_min_spread) return Regime::SmallTick;
    return Regime::Ambiguous;
}

Balance classify_balance(double eta, Regime regime, const ClassificationThresholds& t) {
    if (regime == Regime::SmallTick) return Balance::Balanced;
    return eta >= t.balanced_min_eta ? Balance::Balanced : Balance::MarketMakerFavorable;
}

bool suitable_tick(Regime regime, double eta, const ClassificationThresholds& t) {
    return regime == Regime::LargeTick && classify_balance(eta, regime, t) == Balance::Balanced;
}

std::string_view large_tick_label(Regime r) {
    switch (r) {
        case Regime::LargeTick: return "Yes";
        case Regime::SmallTick: return "No";
        case Regime::Ambiguous: return "Ambiguous";
    }
    return "?";
}

std::string_view balanced_label(Balance b) {
    return b == Balance::Balanced ? "Yes" : "No";
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::LargeTick: return "large_tick";
        case Regime::SmallTick: return "small_tick";
        case Regime::Ambiguous: return "ambiguous";
    }
    return "?";
}

std::string_view to_string(Balance b) {
    return b == Balance::Balanced ? "balanced" : "market_maker_favorable";
}

std::optional<Regime> parse_large_tick_label(std::string_view s) {
    if (s == "Yes") return Regime::LargeTick;
    if (s == "No") return Regime::SmallTick;
    if (s == "Ambiguous") return Regime::Ambiguous;
    return std::nullopt;
}

std::optional<Balance> parse_balanced_label(std::string_view s) {
    if (s == "Yes") return Balance::Balanced;
    if (s == "No") return Balance::MarketMakerFavorable;
    return std::nullopt;
}

}  // namespace uzone
