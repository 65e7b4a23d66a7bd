#pragma once

#include <map>
#include <set>
#include <span>
#include <vector>

#include "emosent/date.hpp"
#include "emosent/sentiment.hpp"

namespace emosent {

struct TailAverage {
    double value = 0.0;
    bool short_sample = false;  ///< fewer than n scores were available
};

/// Mean of the n largest scores (all of them when n exceeds the count).
/// Throws ModelError on empty input or n == 0.
TailAverage avg_top(std::span<const double> scores, std::size_t n);
/// Mean of the n smallest scores.
TailAverage avg_bottom(std::span<const double> scores, std::size_t n);
/// Middle value; mean of the two middle values for even counts.
double daily_median(std::span<const double> scores);

struct DailySentiment {
    Date date;
    std::size_t count = 0;
    bool short_sample = false;  ///< count < max(n_values)
    std::map<std::size_t, double> avgtop;
    std::map<std::size_t, double> avgbottom;
    double median = 0.0;
};

/// One record per UTC day that has at least one tweet with a mean score,
/// sorted by date. Tweets with no scorable emoji are ignored.
std::vector<DailySentiment> build_daily_series(const std::vector<ScoredTweet>& scored,
                                               const std::set<std::size_t>& n_values);

/// Same aggregation from (day, per-tweet mean) pairs.
std::vector<DailySentiment> build_daily_series(const std::vector<std::pair<Date, double>>& tweet_means,
                                               const std::set<std::size_t>& n_values);

/// `date,count,short,median,avgtop_<n>...,avgbottom_<n>...` with every number
/// printed at 17 significant digits.
std::string daily_series_csv(const std::vector<DailySentiment>& days, const std::set<std::size_t>& n_values);

/// Inverse of daily_series_csv (n values are recovered from the header).
std::vector<DailySentiment> parse_daily_series_csv(std::string_view content, std::set<std::size_t>* n_values = nullptr);

enum class DailyMeasure { avgtop, avgbottom, median };

/// Extracts one column as a dated series. With `include_short` false, days
/// with fewer than n scores (median: days flagged short) are dropped.
DatedSeries daily_measure(const std::vector<DailySentiment>& days, DailyMeasure measure, std::size_t n = 0,
                          bool include_short = true);

}  // namespace emosent
