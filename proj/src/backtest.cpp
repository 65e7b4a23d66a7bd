#include "emosent/backtest.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "emosent/csv.hpp"
#include "emosent/error.hpp"

namespace emosent {

namespace {

struct Joined {
    std::vector<Date> dates;
    std::vector<double> sentiment;
    std::vector<double> price;
};

Joined join(const DatedSeries& sentiment, const DatedSeries& prices) {
    Joined j;
    std::size_t a = 0, b = 0;
    while (a < sentiment.size() && b < prices.size()) {
        if (sentiment[a].date < prices[b].date) {
            ++a;
        } else if (prices[b].date < sentiment[a].date) {
            ++b;
        } else {
            j.dates.push_back(sentiment[a].date);
            j.sentiment.push_back(sentiment[a].value);
            j.price.push_back(prices[b].value);
            ++a;
            ++b;
        }
    }
    if (j.dates.size() < 2) throw ModelError("backtest needs at least two dates with both sentiment and price");
    return j;
}

std::size_t window_start(std::size_t day, const Benchmark& b) {
    if (b.kind == Benchmark::Kind::cumulative) return 0;
    const auto pace = static_cast<std::size_t>(b.pace);
    return day >= pace ? day - pace : 0;
}

}  // namespace

BacktestResult run_strategy(const DatedSeries& sentiment, const DatedSeries& prices, const StrategyConfig& cfg) {
    if (cfg.benchmark.kind == Benchmark::Kind::moving && cfg.benchmark.pace < 1)
        throw ModelError("moving benchmark needs pace >= 1");
    const Joined j = join(sentiment, prices);
    const std::chrono::days one{1};

    BacktestResult out;
    double cum = 0.0, base = 0.0;
    for (std::size_t day = 0; day + 1 < j.dates.size(); ++day) {
        auto next_price = value_at(prices, j.dates[day] + one);
        if (!next_price) continue;

        const std::size_t from = window_start(day, cfg.benchmark);
        bool trade;
        if (from == day) {
            trade = cfg.empty_window == EmptyWindowPolicy::trade;
        } else {
            double excess = 0.0;
            for (std::size_t k = from; k < day; ++k) excess += j.sentiment[day] - j.sentiment[k];
            trade = excess >= 0.0;
        }

        const double move = *next_price - j.price[day];
        const double pnl = trade ? move : 0.0;
        if (trade) out.trades.push_back({j.dates[day], j.price[day], *next_price});
        cum += pnl;
        base += move;
        out.dates.push_back(j.dates[day]);
        out.daily_pnl.push_back(pnl);
        out.cumulative.push_back(cum);
        out.baseline_path.push_back(base);
    }
    out.baseline_cumulative = base;
    return out;
}

double baseline_profit(const DatedSeries& prices) {
    if (prices.size() < 2) throw ModelError("baseline needs at least two prices");
    const std::chrono::days one{1};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < prices.size(); ++i)
        if (prices[i + 1].date == prices[i].date + one) total += prices[i + 1].value - prices[i].value;
    return total;
}

bool verify_against_oracle(const BacktestResult& result, const DatedSeries& sentiment, const DatedSeries& prices,
                           const StrategyConfig& cfg) {
    // Literal day loop over the dates both series share.
    std::vector<Date> days;
    std::vector<double> s, p;
    for (const auto& sv : sentiment) {
        for (const auto& pv : prices) {
            if (pv.date == sv.date) {
                days.push_back(sv.date);
                s.push_back(sv.value);
                p.push_back(pv.value);
                break;
            }
        }
    }
    if (days.size() < 2) return false;

    std::vector<Date> exp_dates;
    std::vector<double> exp_pnl;
    std::vector<Trade> exp_trades;
    for (std::size_t day = 0; day < days.size() - 1; ++day) {
        const DatedValue* next = nullptr;
        for (const auto& pv : prices)
            if (pv.date == days[day] + std::chrono::days{1}) next = &pv;
        if (next == nullptr) continue;

        std::size_t lo = 0;
        if (cfg.benchmark.kind == Benchmark::Kind::moving)
            lo = day >= static_cast<std::size_t>(cfg.benchmark.pace) ? day - static_cast<std::size_t>(cfg.benchmark.pace) : 0;
        bool buy;
        if (lo == day) {
            buy = cfg.empty_window == EmptyWindowPolicy::trade;
        } else {
            long double sum = 0.0L;
            for (std::size_t k = lo; k < day; ++k) sum += s[k];
            const long double avg = sum / static_cast<long double>(day - lo);
            buy = static_cast<long double>(s[day]) >= avg;
        }
        exp_dates.push_back(days[day]);
        if (buy) {
            exp_pnl.push_back(next->value - p[day]);
            exp_trades.push_back({days[day], p[day], next->value});
        } else {
            exp_pnl.push_back(0.0);
        }
    }

    if (result.dates != exp_dates || result.daily_pnl != exp_pnl) return false;
    if (result.cumulative.size() != exp_pnl.size() || result.trades.size() != exp_trades.size()) return false;
    double running = 0.0;
    for (std::size_t i = 0; i < exp_pnl.size(); ++i) {
        running += exp_pnl[i];
        if (result.cumulative[i] != running) return false;
    }
    for (std::size_t i = 0; i < exp_trades.size(); ++i) {
        const auto& a = result.trades[i];
        const auto& b = exp_trades[i];
        if (a.buy_date != b.buy_date || a.buy_price != b.buy_price || a.sell_price != b.sell_price) return false;
    }
    return true;
}

SweepMatrix sweep(const std::map<std::size_t, DatedSeries>& sentiment_by_n, const DatedSeries& prices,
                  const std::vector<int>& paces, const std::vector<std::size_t>& ns, EmptyWindowPolicy empty_window,
                  unsigned threads) {
    for (auto n : ns)
        if (!sentiment_by_n.count(n)) throw ModelError("sweep: no sentiment series for n = " + std::to_string(n));
    for (int pace : paces)
        if (pace < 1) throw ModelError("sweep: pace must be >= 1");

    SweepMatrix m{paces, ns, std::vector<double>(paces.size() * ns.size(), 0.0)};
    const std::size_t cells = m.profit.size();
    if (cells == 0) return m;

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t cell = next++; cell < cells; cell = next++) {
            try {
                const std::size_t pi = cell / ns.size(), ni = cell % ns.size();
                StrategyConfig cfg{ns[ni], Benchmark::moving(paces[pi]), empty_window};
                m.profit[cell] = run_strategy(sentiment_by_n.at(ns[ni]), prices, cfg).total();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return m;
}

std::string trade_log_csv(const BacktestResult& r) {
    std::ostringstream out;
    out << "date,buy_price,sell_price,pnl\n";
    for (const auto& t : r.trades)
        out << format_date(t.buy_date) << ',' << csv::fixed17(t.buy_price) << ',' << csv::fixed17(t.sell_price) << ','
            << csv::fixed17(t.pnl()) << '\n';
    return out.str();
}

std::string cumulative_path_csv(const BacktestResult& r) {
    std::ostringstream out;
    out << "date,strategy_cum,baseline_cum\n";
    for (std::size_t i = 0; i < r.dates.size(); ++i)
        out << format_date(r.dates[i]) << ',' << csv::fixed17(r.cumulative[i]) << ','
            << csv::fixed17(r.baseline_path[i]) << '\n';
    return out.str();
}

std::string sweep_csv(const SweepMatrix& m) {
    std::ostringstream out;
    out << "pace";
    for (auto n : m.ns) out << ",n_" << n;
    out << '\n';
    for (std::size_t i = 0; i < m.paces.size(); ++i) {
        out << m.paces[i];
        for (std::size_t j = 0; j < m.ns.size(); ++j) out << ',' << csv::fixed17(m.at(i, j));
        out << '\n';
    }
    return out.str();
}

}  // namespace emosent
