#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace emosent {

using Date = std::chrono::sys_days;
using Instant = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DD`. Returns nullopt on malformed or impossible dates.
std::optional<Date> parse_date(std::string_view text);

/// Parses an ISO-8601 instant and normalizes it to UTC.
///
/// Accepted forms: `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM[:SS[.frac]]` with `T` or a
/// space as separator, optionally followed by `Z` or a `+HH:MM` / `-HH:MM`
/// (also `+HHMM`, `+HH`) offset. Missing offset means UTC. Fractional seconds
/// are truncated.
std::optional<Instant> parse_timestamp(std::string_view text);

std::string format_date(Date d);
std::string format_timestamp(Instant t);

inline Date utc_day(Instant t) { return std::chrono::floor<std::chrono::days>(t); }

}  // namespace emosent
