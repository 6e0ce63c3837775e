#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "uzone/types.hpp"

namespace uzone {

enum class Regime { LargeTick, SmallTick, Ambiguous };
enum class Balance { Balanced, MarketMakerFavorable };

/// Spread and eta cut-offs used to label a stock.
struct ClassificationThresholds {
    double large_tick_max_spread = 1.5;  // S <= this -> large tick
    double small_tick_min_spread = 1.6;  // S > this -> small tick
    double balanced_min_eta = 0.4;       // eta >= this -> balanced
};

/// Average bid-ask spread before each trade, in ticks. Trades are grouped by
/// calendar date; the result is the mean of daily means. nullopt if empty.
std::optional<double> avg_spread_ticks(std::span<const TradeRecord> trades, double tick);

Regime classify_regime(double spread_ticks, const ClassificationThresholds& t = {});

/// Small tick stocks count as balanced. Large tick and ambiguous stocks use the eta cut-off.
Balance classify_balance(double eta, Regime regime, const ClassificationThresholds& t = {});

/// Balanced large tick asset.
bool suitable_tick(Regime regime, double eta, const ClassificationThresholds& t = {});

/// "Yes" / "No" / "Ambiguous", answering "is it large tick?"
std::string_view large_tick_label(Regime r);
/// "Yes" / "No", answering "is it balanced?"
std::string_view balanced_label(Balance b);
std::string_view to_string(Regime r);
std::string_view to_string(Balance b);

std::optional<Regime> parse_large_tick_label(std::string_view s);
std::optional<Balance> parse_balanced_label(std::string_view s);

}  // namespace uzone
