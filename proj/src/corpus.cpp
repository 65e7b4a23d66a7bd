#include "emosent/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "emosent/csv.hpp"
#include "emosent/error.hpp"
#include "emosent/rng.hpp"

namespace emosent {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trimmed(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return std::string(s);
}

std::optional<double> parse_number(std::string_view s) {
    std::string t = trimmed(s);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = t.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

// Maps required header names to column indices; throws when one is absent.
std::vector<std::size_t> header_columns(const csv::Record& header, const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    for (const auto& name : names) {
        auto it = std::find_if(header.fields.begin(), header.fields.end(),
                               [&](const std::string& f) { return lower(trimmed(f)) == name; });
        if (it == header.fields.end()) throw InputError("missing column '" + name + "' in header");
        idx.push_back(static_cast<std::size_t>(it - header.fields.begin()));
    }
    return idx;
}

template <class T>
void require_rows(const LoadResult<T>& r, const char* what) {
    if (!r.items.empty()) return;
    std::string msg = std::string("no valid ") + what + " rows";
    if (!r.errors.empty()) msg += " (first error: line " + std::to_string(r.errors.front().line) + ": " +
                                  r.errors.front().message + ")";
    throw InputError(msg);
}

LoadResult<Tweet> parse_tweets_csv(std::string_view content) {
    LoadResult<Tweet> out;
    auto records = csv::parse(content);
    if (records.empty()) throw InputError("empty tweet file");
    auto cols = header_columns(records.front(), {"id", "timestamp", "text"});
    const std::size_t need = *std::max_element(cols.begin(), cols.end()) + 1;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() < need) {
            out.errors.push_back({rec.line, "missing column"});
            continue;
        }
        auto ts = parse_timestamp(rec.fields[cols[1]]);
        if (!ts) {
            out.errors.push_back({rec.line, "malformed timestamp '" + rec.fields[cols[1]] + "'"});
            continue;
        }
        if (rec.fields[cols[2]].empty()) {
            out.errors.push_back({rec.line, "empty text"});
            continue;
        }
        out.items.push_back({rec.fields[cols[0]], *ts, rec.fields[cols[2]]});
    }
    return out;
}

LoadResult<Tweet> parse_tweets_jsonl(std::string_view content) {
    LoadResult<Tweet> out;
    std::size_t line_no = 0;
    while (!content.empty()) {
        auto eol = content.find('\n');
        std::string_view line = content.substr(0, eol);
        content.remove_prefix(eol == std::string_view::npos ? content.size() : eol + 1);
        ++line_no;
        if (trimmed(line).empty()) continue;

        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            out.errors.push_back({line_no, "malformed JSON"});
            continue;
        }
        if (!obj.is_object()) {
            out.errors.push_back({line_no, "expected a JSON object"});
            continue;
        }
        std::string missing;
        for (const char* key : {"id", "timestamp", "text"})
            if (!obj.contains(key)) missing = key;
        if (!missing.empty()) {
            out.errors.push_back({line_no, "missing column '" + missing + "'"});
            continue;
        }
        const auto& jid = obj["id"];
        std::string id = jid.is_string() ? jid.get<std::string>() : jid.dump();
        if (!obj["timestamp"].is_string() || !obj["text"].is_string()) {
            out.errors.push_back({line_no, "timestamp and text must be strings"});
            continue;
        }
        auto ts_text = obj["timestamp"].get<std::string>();
        auto ts = parse_timestamp(ts_text);
        if (!ts) {
            out.errors.push_back({line_no, "malformed timestamp '" + ts_text + "'"});
            continue;
        }
        auto text = obj["text"].get<std::string>();
        if (text.empty()) {
            out.errors.push_back({line_no, "empty text"});
            continue;
        }
        out.items.push_back({std::move(id), *ts, std::move(text)});
    }
    return out;
}

// Shared `date,<column>` reader; `positive` enforces close > 0.
LoadResult<DatedValue> parse_dated(std::string_view content, const std::string& column, bool positive) {
    LoadResult<DatedValue> out;
    auto records = csv::parse(content);
    if (records.empty()) throw InputError("empty series file");
    auto cols = header_columns(records.front(), {"date", lower(column)});
    const std::size_t need = std::max(cols[0], cols[1]) + 1;

    std::vector<std::pair<DatedValue, std::size_t>> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() < need) {
            out.errors.push_back({rec.line, "missing column"});
            continue;
        }
        auto d = parse_date(rec.fields[cols[0]]);
        if (!d) {
            out.errors.push_back({rec.line, "malformed date '" + rec.fields[cols[0]] + "'"});
            continue;
        }
        auto v = parse_number(rec.fields[cols[1]]);
        if (!v || !std::isfinite(*v)) {
            out.errors.push_back({rec.line, "malformed number '" + rec.fields[cols[1]] + "'"});
            continue;
        }
        if (positive && *v <= 0.0) {
            out.errors.push_back({rec.line, "non-positive price on " + format_date(*d)});
            continue;
        }
        rows.push_back({{*d, *v}, rec.line});
    }
    // First occurrence of a date wins; later ones are rejected.
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.first.date != b.first.date) return a.first.date < b.first.date;
        return a.second < b.second;
    });
    for (const auto& [point, line] : rows) {
        if (!out.items.empty() && out.items.back().date == point.date) {
            out.errors.push_back({line, "duplicate date " + format_date(point.date)});
            continue;
        }
        out.items.push_back(point);
    }
    std::sort(out.errors.begin(), out.errors.end(), [](const RowError& a, const RowError& b) { return a.line < b.line; });
    return out;
}

}  // namespace

LoadResult<Tweet> parse_tweets(std::string_view content, TweetFormat format) {
    auto out = format == TweetFormat::csv ? parse_tweets_csv(content) : parse_tweets_jsonl(content);
    require_rows(out, "tweet");
    return out;
}

LoadResult<Tweet> load_tweets(const std::string& path, TweetFormat format) {
    try {
        return parse_tweets(csv::read_file(path), format);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

TweetFormat tweet_format_for(const std::string& path) {
    auto dot = path.rfind('.');
    if (dot != std::string::npos) {
        auto ext = lower(path.substr(dot));
        if (ext == ".jsonl" || ext == ".ndjson") return TweetFormat::jsonl;
    }
    return TweetFormat::csv;
}

LoadResult<PricePoint> parse_prices(std::string_view content) {
    auto series = parse_dated(content, "close", true);
    LoadResult<PricePoint> out;
    out.errors = std::move(series.errors);
    for (const auto& v : series.items) out.items.push_back({v.date, v.value});
    require_rows(out, "price");
    return out;
}

LoadResult<PricePoint> load_prices(const std::string& path) {
    try {
        return parse_prices(csv::read_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

LoadResult<DatedValue> parse_dated_series(std::string_view content, const std::string& value_column) {
    auto out = parse_dated(content, value_column, false);
    require_rows(out, "series");
    return out;
}

LoadResult<DatedValue> load_dated_series(const std::string& path, const std::string& value_column) {
    try {
        return parse_dated_series(csv::read_file(path), value_column);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

DatedSeries to_series(const std::vector<PricePoint>& prices) {
    DatedSeries out;
    out.reserve(prices.size());
    for (const auto& p : prices) out.push_back({p.date, p.close});
    return out;
}

std::vector<Tweet> filter_emoji_tweets(const std::vector<Tweet>& tweets, const EmojiTable& table) {
    std::vector<Tweet> out;
    for (const auto& t : tweets)
        if (!extract_emojis(t.text, table).empty()) out.push_back(t);
    return out;
}

std::uint64_t day_seed(std::uint64_t seed, Date day) {
    SplitMix64 mix(seed ^ (static_cast<std::uint64_t>(day.time_since_epoch().count()) * 0xD1B54A32D192ED03ULL));
    return mix.next();
}

std::vector<DailySample> sample_daily(const std::vector<Tweet>& tweets, std::size_t sample_size, std::uint64_t seed) {
    std::map<Date, std::vector<const Tweet*>> by_day;
    for (const auto& t : tweets) by_day[t.day()].push_back(&t);

    std::vector<DailySample> out;
    out.reserve(by_day.size());
    for (auto& [day, pool] : by_day) {
        DailySample sample;
        sample.date = day;
        sample.seed = day_seed(seed, day);
        const std::size_t k = std::min(sample_size, pool.size());
        if (k < pool.size()) {
            Xoshiro256 rng(sample.seed);
            for (std::size_t i = 0; i < k; ++i) {
                std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
                std::swap(pool[i], pool[j]);
            }
        }
        sample.tweets.reserve(k);
        for (std::size_t i = 0; i < k; ++i) sample.tweets.push_back(*pool[i]);
        out.push_back(std::move(sample));
    }
    return out;
}

}  // namespace emosent
