#include "uzone/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace uzone {

namespace {

using namespace std::chrono;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n\"");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\"");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void split(std::string_view line, char delim, std::vector<std::string_view>& fields) {
    fields.clear();
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

// Reads between min_digits and max_digits digits at text[pos].
bool read_digits(std::string_view text, std::size_t& pos, int min_digits, int max_digits, int& value) {
    value = 0;
    int n = 0;
    while (n < max_digits && pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        value = value * 10 + (text[pos] - '0');
        ++pos;
        ++n;
    }
    return n >= min_digits;
}

void append_padded(std::string& out, long long value, int width) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    for (int i = static_cast<int>(ptr - buf); i < width; ++i) out.push_back('0');
    out.append(buf, ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// Timestamps and decimals
// ---------------------------------------------------------------------------

std::optional<Timestamp> parse_timestamp(std::string_view text, std::string_view format) {
    int year_v = 1970, month_v = 1, day_v = 1, hour_v = 0, minute_v = 0, second_v = 0;
    long micros = 0;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < format.size(); ++f) {
        const char c = format[f];
        if (c == '%' && f + 1 < format.size()) {
            const char spec = format[++f];
            bool ok = true;
            switch (spec) {
                case 'Y': ok = read_digits(text, pos, 4, 4, year_v); break;
                case 'm': ok = read_digits(text, pos, 1, 2, month_v); break;
                case 'd': ok = read_digits(text, pos, 1, 2, day_v); break;
                case 'H': ok = read_digits(text, pos, 1, 2, hour_v); break;
                case 'M': ok = read_digits(text, pos, 1, 2, minute_v); break;
                case 'S': {
                    ok = read_digits(text, pos, 1, 2, second_v);
                    if (ok && pos < text.size() && text[pos] == '.') {
                        ++pos;
                        int digits = 0;
                        long frac = 0;
                        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                            if (digits < 6) {
                                frac = frac * 10 + (text[pos] - '0');
                                ++digits;
                            }
                            ++pos;
                        }
                        if (digits == 0) return std::nullopt;
                        for (int i = digits; i < 6; ++i) frac *= 10;
                        micros = frac;
                    }
                    break;
                }
                case '%':
                    ok = pos < text.size() && text[pos] == '%';
                    ++pos;
                    break;
                default: return std::nullopt;
            }
            if (!ok) return std::nullopt;
        } else {
            if (pos >= text.size() || text[pos] != c) return std::nullopt;
            ++pos;
        }
    }
    if (pos != text.size()) return std::nullopt;
    const Date date{year{year_v}, month{static_cast<unsigned>(month_v)}, day{static_cast<unsigned>(day_v)}};
    if (!date.ok() || hour_v > 23 || minute_v > 59 || second_v > 60) return std::nullopt;
    return at(date, hours{hour_v} + minutes{minute_v} + seconds{second_v} + microseconds{micros});
}

std::string format_timestamp(Timestamp t, std::string_view format) {
    const Date date = date_of(t);
    const auto tod = time_of_day(t);
    const auto h = duration_cast<hours>(tod);
    const auto m = duration_cast<minutes>(tod - h);
    const auto s = duration_cast<seconds>(tod - h - m);
    const auto us = (tod - h - m - s).count();

    std::string out;
    out.reserve(32);
    for (std::size_t f = 0; f < format.size(); ++f) {
        const char c = format[f];
        if (c != '%' || f + 1 >= format.size()) {
            out.push_back(c);
            continue;
        }
        switch (format[++f]) {
            case 'Y': append_padded(out, static_cast<int>(date.year()), 4); break;
            case 'm': append_padded(out, static_cast<unsigned>(date.month()), 2); break;
            case 'd': append_padded(out, static_cast<unsigned>(date.day()), 2); break;
            case 'H': append_padded(out, h.count(), 2); break;
            case 'M': append_padded(out, m.count(), 2); break;
            case 'S':
                append_padded(out, s.count(), 2);
                if (us != 0) {
                    out.push_back('.');
                    if (us % 1000 == 0) {
                        append_padded(out, us / 1000, 3);
                    } else {
                        append_padded(out, us, 6);
                    }
                }
                break;
            case '%': out.push_back('%'); break;
            default:
                out.push_back('%');
                out.push_back(format[f]);
        }
    }
    return out;
}

std::string format_decimal(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Trade files
// ---------------------------------------------------------------------------

ParseResult parse_trades(std::istream& in, const CsvFormat& format) {
    ParseResult result;
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("trade file is empty: header row required");
    }

    std::vector<std::string_view> fields;
    split(line, format.delimiter, fields);
    auto column = [&](const std::string& name) {
        const auto wanted = lower(name);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (lower(fields[i]) == wanted) return i;
        }
        throw ConfigError("missing column '" + name + "' in header");
    };
    const std::size_t ts_col = column(format.timestamp_column);
    const std::size_t price_col = column(format.price_column);
    const std::size_t bid_col = column(format.bid_column);
    const std::size_t ask_col = column(format.ask_column);
    const std::size_t needed = std::max({ts_col, price_col, bid_col, ask_col}) + 1;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++result.rows_read;

        auto fail = [&](std::string msg) { result.errors.push_back({line_no, std::move(msg)}); };
        split(line, format.delimiter, fields);
        if (fields.size() < needed) {
            fail("expected at least " + std::to_string(needed) + " fields, got " +
                 std::to_string(fields.size()));
            continue;
        }
        const auto ts = parse_timestamp(fields[ts_col], format.timestamp_format);
        if (!ts) {
            fail("unparseable timestamp '" + std::string(fields[ts_col]) + "'");
            continue;
        }
        TradeRecord rec;
        rec.timestamp = *ts;
        if (!parse_double(fields[price_col], rec.price)) {
            fail("unparseable price '" + std::string(fields[price_col]) + "'");
            continue;
        }
        if (!parse_double(fields[bid_col], rec.bid)) {
            fail("unparseable bid '" + std::string(fields[bid_col]) + "'");
            continue;
        }
        if (!parse_double(fields[ask_col], rec.ask)) {
            fail("unparseable ask '" + std::string(fields[ask_col]) + "'");
            continue;
        }
        if (rec.price <= 0.0 || rec.bid <= 0.0) {
            fail("non-positive price or bid");
            continue;
        }
        if (rec.ask < rec.bid) {
            fail("crossed quote");
            continue;
        }
        result.trades.push_back(rec);
    }

    if (!result.errors.empty() &&
        static_cast<double>(result.errors.size()) >
            format.max_error_rate * static_cast<double>(result.rows_read)) {
        const auto& first = result.errors.front();
        throw DataError(std::to_string(result.errors.size()) + " of " +
                        std::to_string(result.rows_read) + " rows malformed (first: line " +
                        std::to_string(first.line) + ": " + first.message + ")");
    }

    auto by_time = [](const TradeRecord& a, const TradeRecord& b) { return a.timestamp < b.timestamp; };
    if (!std::is_sorted(result.trades.begin(), result.trades.end(), by_time)) {
        std::stable_sort(result.trades.begin(), result.trades.end(), by_time);
    }
    return result;
}

ParseResult parse_trades_file(const std::filesystem::path& path, const CsvFormat& format) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trade file " + path.string());
    try {
        return parse_trades(in, format);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_trades(std::ostream& out, std::span<const TradeRecord> trades, const CsvFormat& format) {
    const char d = format.delimiter;
    out << format.timestamp_column << d << format.price_column << d << format.bid_column << d
        << format.ask_column << '\n';
    std::string row;
    for (const auto& t : trades) {
        row.clear();
        row += format_timestamp(t.timestamp, format.timestamp_format);
        row += d;
        row += format_decimal(t.price);
        row += d;
        row += format_decimal(t.bid);
        row += d;
        row += format_decimal(t.ask);
        row += '\n';
        out << row;
    }
    if (!out) throw std::runtime_error("failed writing trade rows");
}

// ---------------------------------------------------------------------------
// Tick tables
// ---------------------------------------------------------------------------

TickTable::TickTable(std::vector<TickBand> bands) : bands_(std::move(bands)) {
    if (bands_.empty()) throw ConfigError("tick table has no bands");
    for (std::size_t i = 0; i < bands_.size(); ++i) {
        const auto& b = bands_[i];
        if (!(b.tick > 0.0) || !std::isfinite(b.tick)) {
            throw ConfigError("tick table: tick values must be positive");
        }
        if (i > 0) {
            if (!(b.upper > bands_[i - 1].upper)) {
                throw ConfigError("tick table: upper bounds must strictly increase");
            }
            if (b.tick < bands_[i - 1].tick) {
                throw ConfigError("tick table: tick values must not decrease with price");
            }
        }
    }
    if (!std::isinf(bands_.back().upper)) {
        throw ConfigError("tick table: last band must be unbounded");
    }
}

double TickTable::tick_value(double price) const {
    const auto it = std::upper_bound(bands_.begin(), bands_.end(), price,
                                     [](double p, const TickBand& b) { return p < b.upper; });
    // The last band is unbounded, so `it` is valid for any finite price.
    return it == bands_.end() ? bands_.back().tick : it->tick;
}

TickTable uniform_tick_table(double tick) {
    return TickTable({TickBand{std::numeric_limits<double>::infinity(), tick}});
}

std::map<std::string, TickTable> tse_pilot_tick_tables() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double upper[] = {1e3, 3e3, 5e3, 1e4, 3e4, 5e4, 1e5, 3e5, 5e5, 1e6, 3e6, 5e6, 1e7, 3e7, 5e7, inf};
    const double phase0[] = {1, 1, 5, 10, 10, 50, 100, 100, 500, 1000, 1000, 5000, 10000, 10000, 50000, 100000};
    const double phase1[] = {1, 1, 1, 1, 5, 5, 10, 50, 50, 100, 500, 500, 1000, 5000, 5000, 10000};
    const double phase2[] = {0.1, 0.5, 0.5, 1, 5, 5, 10, 50, 50, 100, 500, 500, 1000, 5000, 5000, 10000};
    auto make = [&](const double* ticks) {
        std::vector<TickBand> bands;
        for (std::size_t i = 0; i < std::size(upper); ++i) bands.push_back({upper[i], ticks[i]});
        return TickTable(std::move(bands));
    };
    return {{"0", make(phase0)}, {"1", make(phase1)}, {"2", make(phase2)}};
}

// ---------------------------------------------------------------------------
// Sessions and phases
// ---------------------------------------------------------------------------

void SessionSpec::validate() const {
    if (sessions.empty()) throw ConfigError("session spec: at least one session required");
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        const auto& s = sessions[i];
        if (s.open < TimeOfDay{0} || s.close > hours{24} || !(s.open < s.close)) {
            throw ConfigError("session spec: each session needs 00:00 <= open < close <= 24:00");
        }
        if (i > 0 && s.open < sessions[i - 1].close) {
            throw ConfigError("session spec: sessions must be ordered and non-overlapping");
        }
    }
    if (trim_head < microseconds{0} || trim_tail < microseconds{0}) {
        throw ConfigError("session spec: trims must be non-negative");
    }
    const auto first_len = sessions.front().close - sessions.front().open;
    const auto last_len = sessions.back().close - sessions.back().open;
    if (sessions.size() == 1 ? trim_head + trim_tail >= first_len
                             : (trim_head >= first_len || trim_tail >= last_len)) {
        throw ConfigError("session spec: trims must be shorter than the sessions they cut");
    }
}

std::vector<Session> SessionSpec::kept_intervals() const {
    std::vector<Session> kept = sessions;
    if (!kept.empty()) {
        kept.front().open += trim_head;
        kept.back().close -= trim_tail;
    }
    return kept;
}

std::vector<TradeRecord> session_filter(std::span<const TradeRecord> trades, const SessionSpec& spec) {
    const auto kept = spec.kept_intervals();
    std::vector<TradeRecord> out;
    out.reserve(trades.size());
    for (const auto& t : trades) {
        const auto tod = time_of_day(t.timestamp);
        for (const auto& s : kept) {
            if (s.open <= tod && tod < s.close) {
                out.push_back(t);
                break;
            }
        }
    }
    return out;
}

std::vector<PhaseWindow> tse_pilot_phases() {
    return {
        {"0", Date{year{2013}, month{6}, day{3}}, Date{year{2014}, month{1}, day{13}}},
        {"1", Date{year{2014}, month{1}, day{14}}, Date{year{2014}, month{7}, day{21}}},
        {"2", Date{year{2014}, month{7}, day{22}}, Date{year{2014}, month{12}, day{30}}},
    };
}

std::vector<TradingDay> split_days(std::span<const TradeRecord> trades) {
    std::vector<TradingDay> days;
    for (const auto& t : trades) {
        const Date d = date_of(t.timestamp);
        if (days.empty() || days.back().date != d) days.push_back({d, {}});
        days.back().trades.push_back(t);
    }
    return days;
}

// ---------------------------------------------------------------------------
// Day selection
// ---------------------------------------------------------------------------

namespace {

bool same_tick(double a, double b) {
    return std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

std::vector<DayStats> keep_reference_days(std::span<const DayStats> days, double reference,
                                          std::vector<ExcludedDay>& excluded) {
    std::vector<DayStats> kept;
    for (const auto& d : days) {
        if (d.observed_ticks.empty()) {
            excluded.push_back({d.date, "no trades"});
        } else if (d.observed_ticks.size() > 1) {
            excluded.push_back({d.date, "multiple tick values"});
        } else if (!same_tick(*d.observed_ticks.begin(), reference)) {
            excluded.push_back({d.date, "tick value differs from reference"});
        } else {
            kept.push_back(d);
        }
    }
    return kept;
}

}  // namespace

DaySelection select_days(std::span<const DayStats> period_a, std::span<const DayStats> period_b,
                         ReferenceTicks reference, std::size_t min_days) {
    DaySelection sel;
    sel.period_a = keep_reference_days(period_a, reference.period_a, sel.excluded);
    sel.period_b = keep_reference_days(period_b, reference.period_b, sel.excluded);

    const auto limit = std::to_string(min_days);
    if (sel.period_a.size() <= min_days) {
        sel.reason = "period A count <= " + limit + " (" + std::to_string(sel.period_a.size()) + " days)";
    } else if (sel.period_b.size() <= min_days) {
        sel.reason = "period B count <= " + limit + " (" + std::to_string(sel.period_b.size()) + " days)";
    } else {
        sel.qualifies = true;
    }
    return sel;
}

}  // namespace uzone
