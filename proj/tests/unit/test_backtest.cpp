#include <doctest.h>

#include "../support/oracles.hpp"
#include "emosent/backtest.hpp"
#include "emosent/error.hpp"

using namespace emosent;
using oracle::day;

namespace {

DatedSeries consecutive(const std::vector<double>& values) {
    DatedSeries s;
    for (std::size_t i = 0; i < values.size(); ++i) s.push_back({day(static_cast<int>(i)), values[i]});
    return s;
}

}  // namespace

TEST_CASE("hand traced example") {
    auto prices = consecutive({100, 110, 105, 120});
    auto sent = consecutive({0.5, 0.5, 0.5, 0.5});
    auto r = run_strategy(sent, prices, {});
    REQUIRE(r.trades.size() == 2);
    CHECK(r.trades[0].buy_date == day(1));
    CHECK(r.trades[1].buy_date == day(2));
    CHECK(r.total() == 10.0);
    CHECK(r.baseline_cumulative == 20.0);
    CHECK(r.dates.size() == 3);

    StrategyConfig eager;
    eager.empty_window = EmptyWindowPolicy::trade;
    CHECK(run_strategy(sent, prices, eager).total() == 20.0);
}

TEST_CASE("constant prices give zero profit") {
    auto prices = consecutive({50, 50, 50, 50, 50});
    auto sent = consecutive({0.1, 0.4, 0.2, 0.9, 0.3});
    CHECK(run_strategy(sent, prices, {}).total() == 0.0);
}

TEST_CASE("pace one compares with the previous day") {
    auto prices = consecutive({1, 2, 4, 8, 16, 32});
    auto sent = consecutive({0.3, 0.2, 0.2, 0.5, 0.1, 0.7});
    StrategyConfig cfg;
    cfg.benchmark = Benchmark::moving(1);
    auto r = run_strategy(sent, prices, cfg);
    std::vector<Date> bought;
    for (const auto& t : r.trades) bought.push_back(t.buy_date);
    CHECK(bought == std::vector<Date>{day(2), day(3)});
}

TEST_CASE("baseline profit") {
    CHECK(baseline_profit(consecutive({100, 110, 105, 120})) == 20.0);
    CHECK(baseline_profit(consecutive({100, 100})) == 0.0);
    CHECK_THROWS_AS(baseline_profit(consecutive({1})), ModelError);
}

TEST_CASE("errors") {
    auto prices = consecutive({1, 2});
    CHECK_THROWS_AS(run_strategy(consecutive({0.1}), prices, {}), ModelError);
    StrategyConfig bad;
    bad.benchmark = Benchmark::moving(0);
    CHECK_THROWS_AS(run_strategy(consecutive({0.1, 0.2}), prices, bad), ModelError);
}

TEST_CASE("gaps skip days without a next-day price") {
    DatedSeries prices{{day(0), 10}, {day(1), 12}, {day(3), 11}, {day(4), 15}};
    DatedSeries sent{{day(0), 1}, {day(1), 2}, {day(3), 3}, {day(4), 4}};
    StrategyConfig cfg;
    cfg.empty_window = EmptyWindowPolicy::trade;
    auto r = run_strategy(sent, prices, cfg);
    CHECK(r.dates == std::vector<Date>{day(0), day(3)});
    CHECK(r.total() == 6.0);
}

TEST_CASE("matches a naive simulation and the oracle check") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto [s, p] = oracle::backtest_fixture(seed);
        const int pace = seed % 3 == 0 ? 0 : static_cast<int>(seed % 11) + 1;
        StrategyConfig cfg;
        cfg.benchmark = pace == 0 ? Benchmark::cumulative() : Benchmark::moving(pace);
        cfg.empty_window = seed % 2 ? EmptyWindowPolicy::trade : EmptyWindowPolicy::no_trade;
        auto r = run_strategy(s, p, cfg);
        auto ref = oracle::naive_backtest(s, p, pace, seed % 2);
        REQUIRE(r.dates.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            CHECK(r.dates[i] == ref[i].date);
            CHECK(r.daily_pnl[i] == ref[i].pnl);
        }
        CHECK(verify_against_oracle(r, s, p, cfg));
        if (!r.daily_pnl.empty()) {
            auto broken = r;
            broken.daily_pnl.back() += 0.5;
            CHECK_FALSE(verify_against_oracle(broken, s, p, cfg));
        }
        CHECK(r.trades.size() <= r.dates.size());
        double skipped_up = 0;
        for (std::size_t i = 0; i < r.dates.size(); ++i) {
            const double move = r.baseline_path[i] - (i ? r.baseline_path[i - 1] : 0.0);
            if (r.daily_pnl[i] == 0.0 && move > 0) skipped_up += move;
        }
        CHECK(r.total() >= r.baseline_cumulative - skipped_up - 1e-6);
    }
}

TEST_CASE("price scaling and sentiment shift") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        auto [s, p] = oracle::backtest_fixture(seed);
        auto r = run_strategy(s, p, {});
        auto p4 = p;
        for (auto& v : p4) v.value *= 4.0;
        auto r4 = run_strategy(s, p4, {});
        for (std::size_t i = 0; i < r.daily_pnl.size(); ++i) CHECK(r4.daily_pnl[i] == 4.0 * r.daily_pnl[i]);
        auto shifted = s;
        for (auto& v : shifted) v.value += 0.25;
        CHECK(run_strategy(shifted, p, {}).daily_pnl == r.daily_pnl);
    }
}

TEST_CASE("sweep") {
    auto [s, p] = oracle::backtest_fixture(7, 40, 40);
    std::map<std::size_t, DatedSeries> by_n{{2, s}, {3, s}};
    for (auto& v : by_n[3]) v.value = -v.value;
    const std::vector<int> paces{1, 2, 5, 40, 100};
    const std::vector<std::size_t> ns{2, 3};
    auto m = sweep(by_n, p, paces, ns, EmptyWindowPolicy::no_trade, 4);
    auto serial = sweep(by_n, p, paces, ns, EmptyWindowPolicy::no_trade, 1);
    CHECK(m.profit == serial.profit);
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        const double cumulative = run_strategy(by_n[ns[ni]], p, {ns[ni], Benchmark::cumulative()}).total();
        CHECK(m.at(3, ni) == cumulative);
        CHECK(m.at(4, ni) == cumulative);
        StrategyConfig two{ns[ni], Benchmark::moving(2)};
        CHECK(m.at(1, ni) == run_strategy(by_n[ns[ni]], p, two).total());
    }
    auto single = sweep(by_n, p, {5}, {2});
    CHECK(single.profit.size() == 1);
    CHECK_THROWS_AS(sweep(by_n, p, {1}, {9}), ModelError);

    const auto csv = sweep_csv(m);
    CHECK(csv.rfind("pace,n_2,n_3\n1,", 0) == 0);
}

TEST_CASE("csv outputs") {
    auto r = run_strategy(consecutive({0.5, 0.5, 0.5, 0.5}), consecutive({100, 110, 105, 120}), {});
    CHECK(trade_log_csv(r) == "date,buy_price,sell_price,pnl\n2019-03-09,110,105,-5\n2019-03-10,105,120,15\n");
    CHECK(cumulative_path_csv(r).rfind("date,strategy_cum,baseline_cum\n2019-03-08,0,10\n", 0) == 0);
}
