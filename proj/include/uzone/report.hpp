#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uzone/classification.hpp"
#include "uzone/costs.hpp"
#include "uzone/estimator.hpp"
#include "uzone/ingest.hpp"
#include "uzone/predictor.hpp"

namespace uzone {

// ---------------------------------------------------------------------------
// Study configuration
// ---------------------------------------------------------------------------

struct StudyConfig {
    CsvFormat csv;
    SessionSpec sessions;
    std::vector<PhaseWindow> phases;
    std::map<std::string, TickTable> tick_tables;  // keyed by phase label
    ClassificationThresholds classification;
    PredictionThresholds prediction;
    std::size_t min_days = 10;
    std::chrono::microseconds vol_grid = kDefaultVolGrid;

    /// Throw ConfigError for unknown labels.
    const PhaseWindow& phase(std::string_view label) const;
    const TickTable& table(std::string_view label) const;
    void validate() const;
};

/// TSE pilot study: sessions 09:00-11:30 and 12:30-15:00 trimmed by one hour at
/// each end of the day, phases 0/1/2 and the pilot tick tables.
StudyConfig tse_study_config();

/// JSON config. Keys that are absent keep their tse_study_config() value.
/// Throws ConfigError on malformed input.
StudyConfig parse_study_config(std::string_view json_text);
StudyConfig load_study_config(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Per-day and per-phase statistics
// ---------------------------------------------------------------------------

/// Observed ticks, trade count and volatility for every day. Counts, eta and
/// spread are only filled when the day trades at a single tick value.
DayStats compute_day_stats(const TradingDay& day, const TickTable& table,
                           std::chrono::microseconds vol_grid = kDefaultVolGrid);

/// Session-filtered trades -> stats of every day inside `window`.
std::vector<DayStats> analyze_phase(std::span<const TradeRecord> filtered_trades,
                                    const PhaseWindow& window, const TickTable& table,
                                    std::chrono::microseconds vol_grid = kDefaultVolGrid);

struct PhaseSummary {
    std::string phase;
    double tick = 0.0;
    std::optional<EtaEstimate> eta;
    std::optional<double> spread;  // mean of daily spreads, ticks
    std::optional<Regime> regime;
    std::optional<Balance> balance;
    std::size_t n_days = 0;
};

PhaseSummary summarize_phase(std::string phase, double tick, std::span<const DayStats> days,
                             const ClassificationThresholds& t = {});

// ---------------------------------------------------------------------------
// Prediction scoring
// ---------------------------------------------------------------------------

/// One point per correct call: regime and balance. An "Ambiguous" regime on
/// either side earns an ambiguous star instead of a regular one.
struct ScoreCard {
    int stars = 0;
    int ambiguous_stars = 0;
    std::optional<double> relative_error;
};

ScoreCard score_prediction(Regime realized_regime, Balance realized_balance,
                           Regime predicted_regime, Balance predicted_balance);

/// |predicted - realized| / realized; nullopt unless realized > 0.
std::optional<double> relative_error(double predicted, double realized);

/// Mean of the defined relative errors; nullopt when there are none.
std::optional<double> aggregate_error(std::span<const ScoreCard> cards);

/// "(*)" per ambiguous star followed by "*" per star.
std::string stars_text(const ScoreCard& card);

// ---------------------------------------------------------------------------
// Phase-pair study
// ---------------------------------------------------------------------------

struct StockData {
    std::string id;
    std::vector<TradeRecord> trades;
};

/// Reads every regular file in `dir` as one instrument, id = file stem.
/// Result is sorted by id.
std::vector<StockData> load_data_dir(const std::filesystem::path& dir, const CsvFormat& format);

struct StockPhaseRow {
    std::string stock;
    TickChange change;
    PhaseSummary before;
    PhaseSummary after;
    Prediction prediction;
    std::vector<DayStats> days_before;  // selected days
    std::vector<DayStats> days_after;
};

struct EvaluatedStock {
    StockPhaseRow row;
    ScoreCard score;
};

struct Disqualification {
    std::string stock;
    std::string reason;
};

struct PairEvaluation {
    std::string phase_a;
    std::string phase_b;
    std::vector<EvaluatedStock> stocks;  // sorted by stock id
    std::vector<Disqualification> disqualified;
    std::optional<double> mean_relative_error;
};

/// Estimates both phases of every stock, forecasts phase B from phase A and
/// scores the forecast against the realized phase-B labels.
///
/// A stock is skipped (with a reason) when select_days disqualifies it, when
/// it is not large tick in phase A, or when its reference tick is unchanged.
PairEvaluation evaluate_phase_pair(std::span<const StockData> stocks, std::string_view phase_a,
                                   std::string_view phase_b, const StudyConfig& config);

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

enum class OutputFormat { Table, Csv, Json };

/// "table" / "csv" / "json"; throws ConfigError otherwise.
OutputFormat parse_output_format(std::string_view name);

/// Two decimals, round half away from zero on the decimal text.
std::string format_fixed2(double value);

/// "0.26 [0.19,0.27]"
std::string format_prediction_cell(const Prediction& p);

/// Rows shaped like the phase-pair tables: stars, stock, S/eta before and
/// after, realized labels, forecast with interval and forecast labels.
void render_evaluation(std::ostream& out, const PairEvaluation& eval, OutputFormat format);

struct ClassificationRow {
    std::string stock;
    PhaseSummary summary;
    std::optional<CostReport> costs;
};

/// One row per stock-phase: S, eta, large tick, balanced, suitable tick, costs.
void render_classification(std::ostream& out, std::span<const ClassificationRow> rows,
                           OutputFormat format);

/// Per-day rows: date, N_c, N_a, eta, S, M.
void render_days(std::ostream& out, std::span<const DayStats> days, OutputFormat format);

struct PlotPoint {
    Date date{};
    double value = 0.0;
    std::string series;
};

/// Daily eta points of both phases plus flat lines for each phase mean and,
/// when given, the forecast for the second phase.
std::vector<PlotPoint> daily_eta_plot(std::span<const DayStats> before, std::string_view label_before,
                                      std::span<const DayStats> after, std::string_view label_after,
                                      std::optional<double> forecast_after);

/// date, value, series rows with a header.
void render_plot_data(std::ostream& out, std::span<const PlotPoint> points, char delimiter = ',');

}  // namespace uzone
