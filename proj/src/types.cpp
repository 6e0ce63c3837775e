#include "uzone/types.hpp"

#include <charconv>
#include <cstdio>

namespace uzone {

namespace {

bool parse_uint(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

Date parse_date(std::string_view text) {
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_uint(text.substr(0, 4), y) ||
        !parse_uint(text.substr(5, 2), m) || !parse_uint(text.substr(8, 2), d)) {
        throw ConfigError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
              std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) throw ConfigError("invalid date '" + std::string(text) + "'");
    return date;
}

TimeOfDay parse_time_of_day(std::string_view text) {
    int h = 0, m = 0, s = 0;
    bool ok = text.size() >= 5 && text[2] == ':' && parse_uint(text.substr(0, 2), h) &&
              parse_uint(text.substr(3, 2), m);
    if (ok && text.size() == 8) {
        ok = text[5] == ':' && parse_uint(text.substr(6, 2), s);
    } else if (text.size() != 5) {
        ok = false;
    }
    // 24:00 is allowed as an end-of-day close.
    if (!ok || h > 24 || m > 59 || s > 59 || (h == 24 && (m != 0 || s != 0))) {
        throw ConfigError("invalid time of day '" + std::string(text) + "', expected HH:MM[:SS]");
    }
    return std::chrono::hours{h} + std::chrono::minutes{m} + std::chrono::seconds{s};
}

std::string format_time_of_day(TimeOfDay tod) {
    using namespace std::chrono;
    const auto h = duration_cast<hours>(tod);
    const auto m = duration_cast<minutes>(tod - h);
    const auto s = duration_cast<seconds>(tod - h - m);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", static_cast<int>(h.count()),
                  static_cast<int>(m.count()), static_cast<int>(s.count()));
    return buf;
}

}  // namespace uzone
