#pragma once

#include <map>
#include <string>
#include <vector>

#include "emosent/series.hpp"

namespace emosent {

/// What a day's sentiment is compared against: the mean of all earlier
/// sentiment values, or of the `pace` values immediately before the day
/// (the day itself is never part of its own benchmark).
struct Benchmark {
    enum class Kind { cumulative, moving };
    Kind kind = Kind::cumulative;
    int pace = 0;

    static Benchmark cumulative() { return {}; }
    static Benchmark moving(int pace) { return {Kind::moving, pace}; }
};

/// Decision for the first day, whose benchmark window is empty.
enum class EmptyWindowPolicy { no_trade, trade };

struct StrategyConfig {
    std::size_t n = 5;  ///< which avgtop(n) series drives the strategy (bookkeeping only)
    Benchmark benchmark;
    EmptyWindowPolicy empty_window = EmptyWindowPolicy::no_trade;
};

struct Trade {
    Date buy_date;
    double buy_price = 0.0;
    double sell_price = 0.0;
    double pnl() const { return sell_price - buy_price; }
};

/// One entry per eligible day: a day present in both inputs, not the last
/// common day, whose next calendar day has a price.
struct BacktestResult {
    std::vector<Date> dates;
    std::vector<double> daily_pnl;      ///< per 1 unit of the asset, quote currency
    std::vector<double> cumulative;     ///< running sum of daily_pnl
    std::vector<Trade> trades;
    std::vector<double> baseline_path;  ///< running sum when trading every eligible day
    double baseline_cumulative = 0.0;

    double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

/// Sentiment-gated long-only strategy: on each eligible day d, buy one unit
/// at close(d) and sell at close(d + 1) iff sentiment(d) >= benchmark mean.
/// The comparison is evaluated as sum over the window of (s_d - s_j) >= 0,
/// so equal sentiment values tie exactly, before and after a common shift.
/// Throws ModelError with fewer than two common dates or a moving pace < 1.
BacktestResult run_strategy(const DatedSeries& sentiment, const DatedSeries& prices, const StrategyConfig& cfg);

/// Profit of buying every day and selling the next: sum of close(d+1) -
/// close(d) over consecutive calendar days. Without gaps this telescopes to
/// last - first.
double baseline_profit(const DatedSeries& prices);

/// Re-simulates day by day with a separate, literal implementation (benchmark
/// mean computed in extended precision) and checks that `result` matches it
/// exactly: same eligible days, daily pnl, running totals and trade list.
bool verify_against_oracle(const BacktestResult& result, const DatedSeries& sentiment, const DatedSeries& prices,
                           const StrategyConfig& cfg);

struct SweepMatrix {
    std::vector<int> paces;
    std::vector<std::size_t> ns;
    std::vector<double> profit;  ///< row-major: profit[pace_index * ns.size() + n_index]

    double at(std::size_t pace_index, std::size_t n_index) const { return profit[pace_index * ns.size() + n_index]; }
};

/// Final profit of run_strategy with a moving(pace) benchmark for every
/// (pace, n). Cells are evaluated on up to `threads` workers (0 = hardware
/// concurrency); each cell is computed independently so the matrix is
/// bit-identical to a serial run. Throws ModelError when a series for some
/// n is missing.
SweepMatrix sweep(const std::map<std::size_t, DatedSeries>& sentiment_by_n, const DatedSeries& prices,
                  const std::vector<int>& paces, const std::vector<std::size_t>& ns,
                  EmptyWindowPolicy empty_window = EmptyWindowPolicy::no_trade, unsigned threads = 0);

std::string trade_log_csv(const BacktestResult& result);       ///< date,buy_price,sell_price,pnl
std::string cumulative_path_csv(const BacktestResult& result);  ///< date,strategy_cum,baseline_cum
std::string sweep_csv(const SweepMatrix& matrix);               ///< pace,n_<n>...

}  // namespace emosent
