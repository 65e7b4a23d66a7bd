#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emosent/date.hpp"
#include "emosent/emoji.hpp"
#include "emosent/series.hpp"

namespace emosent {

struct Tweet {
    std::string id;
    Instant timestamp;
    std::string text;

    Date day() const { return utc_day(timestamp); }
    friend bool operator==(const Tweet&, const Tweet&) = default;
};

struct PricePoint {
    Date date;
    double close = 0.0;
};

struct DailySample {
    Date date;
    std::vector<Tweet> tweets;
    std::uint64_t seed = 0;  ///< per-day stream seed derived from the run seed
};

struct RowError {
    std::size_t line = 0;
    std::string message;
};

/// Loader output: every valid row plus one error per rejected row.
template <class T>
struct LoadResult {
    std::vector<T> items;
    std::vector<RowError> errors;
};

enum class TweetFormat { csv, jsonl };

/// Reads `id,timestamp,text` CSV (RFC 4180, header required, extra columns
/// ignored) or JSONL with the same keys. Rows with a malformed timestamp,
/// missing field or empty text become RowErrors. Throws InputError when the
/// file cannot be read, the header lacks a column, or no valid row remains.
LoadResult<Tweet> load_tweets(const std::string& path, TweetFormat format);
LoadResult<Tweet> parse_tweets(std::string_view content, TweetFormat format);

/// Picks the format from the extension: `.jsonl`/`.ndjson` or CSV otherwise.
TweetFormat tweet_format_for(const std::string& path);

/// Reads a `date,close` CSV. Output is sorted by date; rows with a bad date,
/// a non-positive or non-numeric close, or a date seen earlier are rejected
/// as RowErrors. Date gaps are allowed.
LoadResult<PricePoint> load_prices(const std::string& path);
LoadResult<PricePoint> parse_prices(std::string_view content);

/// Generic `date,<value_column>` reader with the same row policy as
/// load_prices except that any finite value is accepted.
LoadResult<DatedValue> load_dated_series(const std::string& path, const std::string& value_column);
LoadResult<DatedValue> parse_dated_series(std::string_view content, const std::string& value_column);

DatedSeries to_series(const std::vector<PricePoint>& prices);

/// Keeps tweets whose text contains at least one emoji token.
std::vector<Tweet> filter_emoji_tweets(const std::vector<Tweet>& tweets,
                                       const EmojiTable& table = EmojiTable::bundled());

/// Draws min(sample_size, available) tweets per UTC day without replacement
/// by a partial Fisher-Yates shuffle over the day's tweets in input order.
/// Each day uses its own xoshiro256** stream seeded from (seed, date), so a
/// day's draw does not depend on other days. Days that fit entirely are
/// kept in input order. Output is sorted by date.
std::vector<DailySample> sample_daily(const std::vector<Tweet>& tweets, std::size_t sample_size, std::uint64_t seed);

std::uint64_t day_seed(std::uint64_t seed, Date day);

}  // namespace emosent
