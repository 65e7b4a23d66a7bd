#include "emosent/aggregate.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "emosent/csv.hpp"
#include "emosent/error.hpp"
#include "emosent/series.hpp"

namespace emosent {

namespace {

template <class Compare>
TailAverage tail_average(std::span<const double> scores, std::size_t n, Compare comp) {
    if (scores.empty()) throw ModelError("tail average of empty score list");
    if (n == 0) throw ModelError("tail average needs n >= 1");
    std::vector<double> sorted(scores.begin(), scores.end());
    const std::size_t k = std::min(n, sorted.size());
    std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end(), comp);
    return {bounded_mean(std::span<const double>(sorted.data(), k)), n > scores.size()};
}

}  // namespace

TailAverage avg_top(std::span<const double> scores, std::size_t n) {
    return tail_average(scores, n, std::greater<double>{});
}

TailAverage avg_bottom(std::span<const double> scores, std::size_t n) {
    return tail_average(scores, n, std::less<double>{});
}

double daily_median(std::span<const double> scores) {
    if (scores.empty()) throw ModelError("median of empty score list");
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size() / 2;
    if (sorted.size() % 2 == 1) return sorted[m];
    const double lo = sorted[m - 1], hi = sorted[m];
    return std::clamp((lo + hi) / 2.0, lo, hi);
}

std::vector<DailySentiment> build_daily_series(const std::vector<std::pair<Date, double>>& tweet_means,
                                               const std::set<std::size_t>& n_values) {
    std::map<Date, std::vector<double>> by_day;
    for (const auto& [day, score] : tweet_means) by_day[day].push_back(score);

    const std::size_t max_n = n_values.empty() ? 0 : *n_values.rbegin();
    std::vector<DailySentiment> out;
    out.reserve(by_day.size());
    for (const auto& [day, scores] : by_day) {
        DailySentiment d;
        d.date = day;
        d.count = scores.size();
        d.short_sample = d.count < max_n;
        for (std::size_t n : n_values) {
            d.avgtop[n] = avg_top(scores, n).value;
            d.avgbottom[n] = avg_bottom(scores, n).value;
        }
        d.median = daily_median(scores);
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<DailySentiment> build_daily_series(const std::vector<ScoredTweet>& scored,
                                               const std::set<std::size_t>& n_values) {
    std::vector<std::pair<Date, double>> means;
    for (const auto& s : scored)
        if (s.mean_score) means.emplace_back(s.tweet.day(), *s.mean_score);
    return build_daily_series(means, n_values);
}

std::string daily_series_csv(const std::vector<DailySentiment>& days, const std::set<std::size_t>& n_values) {
    std::ostringstream out;
    std::vector<std::string> header{"date", "count", "short", "median"};
    for (auto n : n_values) header.push_back("avgtop_" + std::to_string(n));
    for (auto n : n_values) header.push_back("avgbottom_" + std::to_string(n));
    csv::write_row(out, header);
    for (const auto& d : days) {
        std::vector<std::string> row{format_date(d.date), std::to_string(d.count), d.short_sample ? "1" : "0",
                                     csv::fixed17(d.median)};
        for (auto n : n_values) row.push_back(csv::fixed17(d.avgtop.at(n)));
        for (auto n : n_values) row.push_back(csv::fixed17(d.avgbottom.at(n)));
        csv::write_row(out, row);
    }
    return out.str();
}

std::vector<DailySentiment> parse_daily_series_csv(std::string_view content, std::set<std::size_t>* n_values) {
    auto records = csv::parse(content);
    if (records.empty()) throw InputError("empty daily sentiment file");
    const auto& header = records.front().fields;
    if (header.size() < 4 || header[0] != "date" || header[1] != "count" || header[2] != "short" || header[3] != "median")
        throw InputError("daily sentiment header must start with date,count,short,median");

    struct Column {
        bool top;
        std::size_t n;
    };
    std::vector<Column> columns;
    std::set<std::size_t> ns;
    for (std::size_t i = 4; i < header.size(); ++i) {
        const auto& h = header[i];
        bool top = h.rfind("avgtop_", 0) == 0;
        bool bottom = h.rfind("avgbottom_", 0) == 0;
        if (!top && !bottom) throw InputError("unexpected daily sentiment column '" + h + "'");
        auto n = static_cast<std::size_t>(std::stoul(h.substr(top ? 7 : 10)));
        columns.push_back({top, n});
        ns.insert(n);
    }
    if (n_values) *n_values = ns;

    std::vector<DailySentiment> out;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& f = records[r].fields;
        const std::string where = "daily sentiment line " + std::to_string(records[r].line);
        if (f.size() != header.size()) throw InputError(where + ": wrong field count");
        auto d = parse_date(f[0]);
        if (!d) throw InputError(where + ": bad date");
        DailySentiment day;
        day.date = *d;
        try {
            day.count = std::stoul(f[1]);
            day.short_sample = f[2] == "1";
            day.median = std::stod(f[3]);
            for (std::size_t i = 0; i < columns.size(); ++i)
                (columns[i].top ? day.avgtop : day.avgbottom)[columns[i].n] = std::stod(f[4 + i]);
        } catch (const std::exception&) {
            throw InputError(where + ": bad number");
        }
        if (!out.empty() && out.back().date >= day.date) throw InputError(where + ": dates must increase");
        out.push_back(std::move(day));
    }
    return out;
}

DatedSeries daily_measure(const std::vector<DailySentiment>& days, DailyMeasure measure, std::size_t n,
                          bool include_short) {
    DatedSeries out;
    for (const auto& d : days) {
        if (!include_short && (measure == DailyMeasure::median ? d.short_sample : d.count < n)) continue;
        double v = 0.0;
        switch (measure) {
            case DailyMeasure::avgtop: v = d.avgtop.at(n); break;
            case DailyMeasure::avgbottom: v = d.avgbottom.at(n); break;
            case DailyMeasure::median: v = d.median; break;
        }
        out.push_back({d.date, v});
    }
    return out;
}

}  // namespace emosent
