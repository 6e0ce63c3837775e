#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uzone {

/// Exchange-local wall-clock time, microsecond resolution. No time zone is attached.
using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;
using Date = std::chrono::year_month_day;
/// Offset since local midnight.
using TimeOfDay = std::chrono::microseconds;

/// One transaction with the best quotes observed immediately before it.
struct TradeRecord {
    Timestamp timestamp{};
    double price = 0.0;
    double bid = 0.0;
    double ask = 0.0;

    friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

/// Bad or inconsistent configuration (missing column, invalid tick table, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data that violates a model invariant (off-grid price move, too many bad rows, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Date date_of(Timestamp t) {
    return Date{std::chrono::floor<std::chrono::days>(t)};
}

inline TimeOfDay time_of_day(Timestamp t) {
    return t - std::chrono::floor<std::chrono::days>(t);
}

inline Timestamp at(Date d, TimeOfDay tod) {
    return Timestamp{std::chrono::sys_days{d}} + tod;
}

/// YYYY-MM-DD
std::string format_date(Date d);

/// Parses YYYY-MM-DD; throws ConfigError on malformed or invalid dates.
Date parse_date(std::string_view text);

/// Parses HH:MM or HH:MM:SS; throws ConfigError.
TimeOfDay parse_time_of_day(std::string_view text);

std::string format_time_of_day(TimeOfDay tod);

}  // namespace uzone
