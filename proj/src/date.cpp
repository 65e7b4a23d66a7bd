#include "emosent/date.hpp"

#include <cctype>
#include <cstdio>

namespace emosent {

namespace {

// Reads exactly `width` decimal digits starting at `pos`.
bool read_digits(std::string_view s, std::size_t& pos, int width, int& out) {
    if (pos + width > s.size()) return false;
    int value = 0;
    for (int i = 0; i < width; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    pos += width;
    return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
    if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

std::optional<Date> read_date(std::string_view s, std::size_t& pos) {
    int y, m, d;
    if (!read_digits(s, pos, 4, y) || !expect(s, pos, '-') || !read_digits(s, pos, 2, m) ||
        !expect(s, pos, '-') || !read_digits(s, pos, 2, d))
        return std::nullopt;
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{ymd};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    text = trim(text);
    std::size_t pos = 0;
    auto d = read_date(text, pos);
    if (!d || pos != text.size()) return std::nullopt;
    return d;
}

std::optional<Instant> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    text = trim(text);
    std::size_t pos = 0;
    auto day = read_date(text, pos);
    if (!day) return std::nullopt;
    if (pos == text.size()) return Instant{*day};
    if (text[pos] != 'T' && text[pos] != 't' && text[pos] != ' ') return std::nullopt;
    ++pos;

    int hh, mm, ss = 0;
    if (!read_digits(text, pos, 2, hh) || !expect(text, pos, ':') || !read_digits(text, pos, 2, mm))
        return std::nullopt;
    if (expect(text, pos, ':')) {
        if (!read_digits(text, pos, 2, ss)) return std::nullopt;
        if (expect(text, pos, '.') || expect(text, pos, ',')) {
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == start) return std::nullopt;
        }
    }
    // 23:59:60 is tolerated and folds into the next minute.
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;

    seconds offset{0};
    if (pos < text.size()) {
        char c = text[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            ++pos;
            int oh, om = 0;
            if (!read_digits(text, pos, 2, oh)) return std::nullopt;
            if (expect(text, pos, ':')) {
                if (!read_digits(text, pos, 2, om)) return std::nullopt;
            } else if (pos < text.size()) {
                if (!read_digits(text, pos, 2, om)) return std::nullopt;
            }
            if (oh > 23 || om > 59) return std::nullopt;
            offset = hours{oh} + minutes{om};
            if (c == '-') offset = -offset;
        } else {
            return std::nullopt;
        }
    }
    if (pos != text.size()) return std::nullopt;
    return Instant{*day} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

std::string format_date(Date d) {
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_timestamp(Instant t) {
    using namespace std::chrono;
    auto day = floor<days>(t);
    hh_mm_ss<seconds> tod{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "T%02ld:%02ld:%02ldZ", static_cast<long>(tod.hours().count()),
                  static_cast<long>(tod.minutes().count()), static_cast<long>(tod.seconds().count()));
    return format_date(day) + buf;
}

}  // namespace emosent
