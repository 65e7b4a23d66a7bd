#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "emosent/error.hpp"
#include "emosent/volindex.hpp"

using namespace emosent;

TEST_CASE("log returns") {
    const std::vector<double> flat{100, 100}, up{100, 110}, back{100, 110, 100};
    CHECK(log_returns(flat) == std::vector<double>{0.0});
    CHECK(log_returns(up)[0] == doctest::Approx(0.09531017980432486).epsilon(1e-15));
    auto r = log_returns(back);
    REQUIRE(r.size() == 2);
    CHECK(r[0] + r[1] == doctest::Approx(0.0).epsilon(1e-15));
    const std::vector<double> one{1}, bad{100, 0};
    CHECK_THROWS_AS(log_returns(one), ModelError);
    CHECK_THROWS_AS(log_returns(bad), ModelError);
}

TEST_CASE("ewma examples") {
    EwmaConfig cfg;
    const std::vector<double> r1{0.1};
    auto v = ewma_variance(r1, cfg, 0.04);
    CHECK(v[0] == doctest::Approx(0.0346).epsilon(1e-15));

    const std::vector<double> constant(50, 0.03);
    for (double s : ewma_variance(constant, cfg)) CHECK(s == 0.03 * 0.03);
    for (double s : ewma_variance(constant, cfg, 0.03 * 0.03)) CHECK(s == 0.03 * 0.03);

    const std::vector<double> zeros(10, 0.0);
    for (double s : ewma_variance(zeros, cfg, 0.0)) CHECK(s == 0.0);

    EwmaConfig first = cfg;
    first.init = EwmaInit::first_squared;
    const std::vector<double> r{0.1, 0.2, 0.3};
    CHECK(initial_variance(r, first) == 0.1 * 0.1);
    CHECK(initial_variance(r, cfg) == doctest::Approx((0.01 + 0.04 + 0.09) / 3).epsilon(1e-15));

    EwmaConfig bad = cfg;
    bad.lambda = 1.0;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad.lambda = 0.0;
    CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("ewma matches the unrolled sum and stays in bounds") {
    Xoshiro256 rng(17);
    EwmaConfig cfg;
    for (int t = 0; t < 50; ++t) {
        std::vector<double> r(100);
        for (auto& x : r) x = 0.05 * rng.normal();
        const double s0 = 0.01 * rng.uniform();
        auto rec = ewma_variance(r, cfg, s0);
        auto ref = oracle::ewma_unrolled(r, cfg.lambda, s0);
        double lo = s0, hi = s0;
        for (double x : r) lo = std::min(lo, x * x), hi = std::max(hi, x * x);
        for (std::size_t i = 0; i < r.size(); ++i) {
            CHECK(std::fabs(rec[i] - ref[i]) <= 1e-12 * std::max(1.0L, ref[i]));
            CHECK(rec[i] >= lo);
            CHECK(rec[i] <= hi);
        }
    }
}

TEST_CASE("index level") {
    EwmaConfig cfg;
    const std::vector<double> v{0.0, 1.0 / 365.0, 2.0 / 365.0};
    auto lvl = index_level(v, cfg);
    CHECK(lvl[0] == 0.0);
    CHECK(lvl[1] == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(lvl[2] / lvl[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("weekly delta and direction") {
    DatedSeries flat, ramp;
    for (int i = 0; i < 20; ++i) {
        flat.push_back({oracle::day(i), 42.0});
        ramp.push_back({oracle::day(i), 10.0 + i * (5.0 / 7.0)});
    }
    auto f = vol_index_from_levels(flat, 7);
    CHECK(f.delta_week.size() == 13);
    for (const auto& [d, delta] : f.delta_week) {
        CHECK(delta == 0.0);
        CHECK(f.dir_week.at(d) == 0);
    }
    auto g = vol_index_from_levels(ramp, 7);
    CHECK(g.delta_week.at(oracle::day(0)) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(g.dir_week.at(oracle::day(0)) == 1);

    // A gap leaves the matching start date undefined.
    DatedSeries gappy = ramp;
    gappy.erase(gappy.begin() + 9);
    auto h = vol_index_from_levels(gappy, 7);
    CHECK_FALSE(h.delta_week.count(oracle::day(2)));
    CHECK(h.delta_week.count(oracle::day(3)));
}

TEST_CASE("compute_vol_index end to end") {
    std::vector<PricePoint> prices;
    Xoshiro256 rng(4);
    double p = 3900;
    for (int i = 0; i < 40; ++i) {
        prices.push_back({oracle::day(i), p});
        p *= std::exp(0.03 * rng.normal());
    }
    EwmaConfig cfg;
    auto idx = compute_vol_index(prices, cfg);
    REQUIRE(idx.dates.size() == 39);
    CHECK(idx.dates.front() == oracle::day(1));
    auto r = log_returns(prices);
    auto lv = index_level(ewma_variance(r, cfg), cfg);
    CHECK(idx.values == lv);
    for (const auto& [d, delta] : idx.delta_week) CHECK(idx.dir_week.at(d) == (delta > 0 ? 1 : 0));

    const auto csv = vol_index_csv(idx);
    CHECK(csv.rfind("date,value,delta_week,dir_week\n2019-03-09,", 0) == 0);
    CHECK(csv.find(",,\n") != std::string::npos);
}
