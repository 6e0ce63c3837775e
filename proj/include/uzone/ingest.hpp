#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uzone/estimator.hpp"
#include "uzone/types.hpp"

namespace uzone {

// ---------------------------------------------------------------------------
// Delimited trade files
// ---------------------------------------------------------------------------

/// Column mapping and dialect of a delimited trade file.
///
/// The timestamp format understands %Y %m %d %H %M %S and %%; every other
/// character must match literally. %S accepts an optional fraction of up to
/// six digits (".5", ".250", ".123456").
struct CsvFormat {
    char delimiter = ',';
    std::string timestamp_format = "%Y-%m-%d %H:%M:%S";
    std::string timestamp_column = "timestamp";
    std::string price_column = "price";
    std::string bid_column = "bid";
    std::string ask_column = "ask";
    /// Fraction of data rows allowed to fail before the whole file is rejected.
    double max_error_rate = 0.001;
};

struct RowError {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string message;
};

struct ParseResult {
    std::vector<TradeRecord> trades;
    std::vector<RowError> errors;
    std::size_t rows_read = 0;
};

/// Reads a header + rows trade file.
///
/// Malformed rows are collected in ParseResult::errors. Throws ConfigError when
/// a mapped column is missing from the header and DataError when the share of
/// bad rows exceeds CsvFormat::max_error_rate. Output is sorted by timestamp
/// (stable, so equal timestamps keep file order).
ParseResult parse_trades(std::istream& in, const CsvFormat& format);
ParseResult parse_trades_file(const std::filesystem::path& path, const CsvFormat& format);

/// Parses a timestamp according to `format`; std::nullopt when it does not match.
std::optional<Timestamp> parse_timestamp(std::string_view text, std::string_view format);

/// Inverse of parse_timestamp. Sub-second parts are written with 3 digits when
/// millisecond-aligned, 6 otherwise, and omitted when zero.
std::string format_timestamp(Timestamp t, std::string_view format);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_decimal(double value);

/// Writes trades in the layout parse_trades reads (header + one row per trade).
void write_trades(std::ostream& out, std::span<const TradeRecord> trades, const CsvFormat& format);

// ---------------------------------------------------------------------------
// Tick tables
// ---------------------------------------------------------------------------

struct TickBand {
    double upper = std::numeric_limits<double>::infinity();  // exclusive
    double tick = 0.0;
};

/// Piecewise-constant price -> tick value map. The last band is unbounded.
class TickTable {
public:
    TickTable() = default;
    /// Throws ConfigError unless bounds strictly increase, the last one is
    /// infinite, and ticks are positive and non-decreasing.
    explicit TickTable(std::vector<TickBand> bands);

    /// Tick of the first band whose upper bound strictly exceeds `price`.
    double tick_value(double price) const;

    std::span<const TickBand> bands() const { return bands_; }
    bool empty() const { return bands_.empty(); }

private:
    std::vector<TickBand> bands_;
};

inline double tick_value(double price, const TickTable& table) { return table.tick_value(price); }

/// A table with a single tick for every price.
TickTable uniform_tick_table(double tick);

/// The three Tokyo Stock Exchange pilot-program tables, keyed "0", "1", "2".
std::map<std::string, TickTable> tse_pilot_tick_tables();

// ---------------------------------------------------------------------------
// Sessions, days and phases
// ---------------------------------------------------------------------------

struct Session {
    TimeOfDay open{};
    TimeOfDay close{};
};

/// Trading sessions of one day and the trims applied to the first open and
/// the last close. The default is one 24h session with no trim.
struct SessionSpec {
    std::vector<Session> sessions{Session{TimeOfDay{0}, std::chrono::hours{24}}};
    std::chrono::microseconds trim_head{0};
    std::chrono::microseconds trim_tail{0};

    /// Throws ConfigError on overlapping/unordered sessions or oversize trims.
    void validate() const;
    /// Kept intervals after trimming, each half-open [open, close).
    std::vector<Session> kept_intervals() const;
};

/// Keeps trades whose time of day falls in a kept interval. Order preserved.
std::vector<TradeRecord> session_filter(std::span<const TradeRecord> trades, const SessionSpec& spec);

struct PhaseWindow {
    std::string label;
    Date start{};  // inclusive
    Date end{};    // inclusive

    bool contains(Date d) const { return start <= d && d <= end; }
};

/// The TSE pilot-program phases 0, 1 and 2.
std::vector<PhaseWindow> tse_pilot_phases();

struct TradingDay {
    Date date{};
    std::vector<TradeRecord> trades;
};

/// Groups time-sorted trades by calendar date. Days without trades do not appear.
std::vector<TradingDay> split_days(std::span<const TradeRecord> trades);

// ---------------------------------------------------------------------------
// Day selection
// ---------------------------------------------------------------------------

struct ExcludedDay {
    Date date{};
    std::string reason;
};

struct DaySelection {
    std::vector<DayStats> period_a;
    std::vector<DayStats> period_b;
    std::vector<ExcludedDay> excluded;
    bool qualifies = false;
    std::string reason;  // empty when qualifies
};

/// Reference tick values: the tick right before the end of period A and right
/// after the start of period B.
struct ReferenceTicks {
    double period_a = 0.0;
    double period_b = 0.0;
};

/// Drops days observing several tick values or a tick other than the period's
/// reference. The pair qualifies only if both periods keep more than
/// `min_days` days.
DaySelection select_days(std::span<const DayStats> period_a, std::span<const DayStats> period_b,
                         ReferenceTicks reference, std::size_t min_days = 10);

}  // namespace uzone
