#include <cmath>
#include <sstream>

#include "emosent/app.hpp"
#include "emosent/backtest.hpp"
#include "emosent/econometrics.hpp"
#include "emosent/emoji.hpp"
#include "emosent/rng.hpp"
#include "emosent/volindex.hpp"

namespace emosent::app {

namespace {

const Date kStart = std::chrono::sys_days{std::chrono::year{2019} / 3 / 8};

// Prices on most days with occasional gaps; sentiment on most days.
std::pair<DatedSeries, DatedSeries> backtest_fixture(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    DatedSeries s, p;
    const int days = 20 + static_cast<int>(rng.below(80));
    double price = 1000.0 + 100.0 * rng.uniform();
    for (int d = 0; d < days; ++d) {
        const Date date = kStart + std::chrono::days{d};
        price *= std::exp(0.03 * rng.normal());
        if (rng.uniform() > 0.05) p.push_back({date, price});
        if (rng.uniform() > 0.05) s.push_back({date, 2.0 * rng.uniform() - 1.0});
    }
    return {s, p};
}

AlignedSample random_sample(Xoshiro256& rng, std::size_t rows, std::size_t k) {
    AlignedSample a;
    for (std::size_t j = 0; j < k; ++j) a.predictors.push_back("x" + std::to_string(j + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        AlignedRow r;
        r.x_date = kStart + std::chrono::days{static_cast<int>(i)};
        double y = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            r.x.push_back(rng.normal());
            y += (0.5 + j) * r.x.back();
        }
        r.y = y + rng.normal();
        a.rows.push_back(std::move(r));
    }
    return a;
}

// (X'X) b = X'y by Gauss-Jordan with partial pivoting in extended precision.
std::vector<long double> normal_equations(const AlignedSample& a) {
    const std::size_t p = a.predictors.size() + 1;
    std::vector<std::vector<long double>> m(p, std::vector<long double>(p + 1, 0.0L));
    for (const auto& r : a.rows) {
        std::vector<long double> x{1.0L};
        for (double v : r.x) x.push_back(v);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) m[i][j] += x[i] * x[j];
            m[i][p] += x[i] * r.y;
        }
    }
    for (std::size_t c = 0; c < p; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < p; ++r)
            if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
        std::swap(m[c], m[piv]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == c) continue;
            const long double f = m[r][c] / m[c][c];
            for (std::size_t j = c; j <= p; ++j) m[r][j] -= f * m[c][j];
        }
    }
    std::vector<long double> b(p);
    for (std::size_t i = 0; i < p; ++i) b[i] = m[i][p] / m[i][i];
    return b;
}

bool close(double a, long double b, double tol) {
    return std::fabs(static_cast<long double>(a) - b) <= tol * std::max(1.0L, std::fabs(b));
}

OracleCheck check_backtest(bool fault) {
    OracleCheck c{"backtest-oracle", true, {}};
    int failed = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto [s, p] = backtest_fixture(seed);
        StrategyConfig cfg;
        cfg.benchmark = seed % 2 ? Benchmark::cumulative() : Benchmark::moving(1 + static_cast<int>(seed % 13));
        cfg.empty_window = seed % 3 ? EmptyWindowPolicy::no_trade : EmptyWindowPolicy::trade;
        auto result = run_strategy(s, p, cfg);
        if (fault && seed == 1 && !result.daily_pnl.empty()) result.daily_pnl.front() += 1.0;
        if (!verify_against_oracle(result, s, p, cfg)) ++failed;
    }
    c.passed = failed == 0;
    c.detail = std::to_string(100 - failed) + "/100 fixtures match";
    return c;
}

OracleCheck check_ols(bool fault) {
    OracleCheck c{"ols-normal-equations", true, {}};
    Xoshiro256 rng(2024);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        auto sample = random_sample(rng, 20, 1 + t % 3);
        auto fit = ols_fit(sample);
        auto b = normal_equations(sample);
        if (fault && t == 0) fit.coefficients[0].estimate += 1e-6;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const long double err =
                std::fabs(fit.coefficients[i].estimate - b[i]) / std::max(1.0L, std::fabs(b[i]));
            worst = std::max(worst, static_cast<double>(err));
            if (!close(fit.coefficients[i].estimate, b[i], 1e-9)) c.passed = false;
        }
    }
    std::ostringstream d;
    d << "max relative coefficient error " << worst << " over 50 samples";
    c.detail = d.str();
    return c;
}

OracleCheck check_ewma(bool fault) {
    OracleCheck c{"ewma-unroll", true, {}};
    Xoshiro256 rng(7);
    EwmaConfig cfg;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        std::vector<double> r(100);
        for (auto& v : r) v = 0.04 * rng.normal();
        const double s0 = initial_variance(r, cfg);
        auto rec = ewma_variance(r, cfg, s0);
        if (fault && t == 0) rec.back() *= 1.0 + 1e-9;
        for (std::size_t i = 0; i < r.size(); ++i) {
            // lambda^(i+1) s0 + (1 - lambda) sum_k lambda^(i-k) r_k^2
            long double v = std::pow(static_cast<long double>(cfg.lambda), static_cast<long double>(i + 1)) * s0;
            for (std::size_t k = 0; k <= i; ++k)
                v += (1.0L - cfg.lambda) * std::pow(static_cast<long double>(cfg.lambda), static_cast<long double>(i - k)) *
                     static_cast<long double>(r[k]) * r[k];
            const double err = static_cast<double>(std::fabs(rec[i] - v) / v);
            worst = std::max(worst, err);
            if (err > 1e-12) c.passed = false;
        }
    }
    std::ostringstream d;
    d << "max relative error " << worst;
    c.detail = d.str();
    return c;
}

OracleCheck check_logit(bool fault) {
    OracleCheck c{"logit-score", true, {}};
    Xoshiro256 rng(99);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        AlignedSample a;
        a.predictors = {"x"};
        const double b0 = -0.5 + 0.05 * t, b1 = 1.0 + 0.1 * t;
        for (int i = 0; i < 30; ++i) {
            AlignedRow r;
            r.x = {rng.normal()};
            r.y = rng.uniform() < 1.0 / (1.0 + std::exp(-(b0 + b1 * r.x[0]))) ? 1.0 : 0.0;
            a.rows.push_back(r);
        }
        RegressionReport fit;
        try {
            fit = logit_fit(a);
        } catch (const std::exception&) {
            continue;  // single-class draw
        }
        if (fit.separation) continue;
        if (fault && t == 0) fit.coefficients[1].estimate += 1e-3;
        long double g0 = 0.0L, g1 = 0.0L;
        for (const auto& r : a.rows) {
            const long double eta = fit.coefficients[0].estimate + fit.coefficients[1].estimate * r.x[0];
            const long double resid = r.y - 1.0L / (1.0L + std::exp(-eta));
            g0 += resid;
            g1 += resid * r.x[0];
        }
        const double norm = static_cast<double>(std::sqrt(g0 * g0 + g1 * g1));
        worst = std::max(worst, norm);
        if (norm > 1e-6) c.passed = false;
    }
    std::ostringstream d;
    d << "max score norm " << worst;
    c.detail = d.str();
    return c;
}

OracleCheck check_emoji(bool fault) {
    OracleCheck c{"emoji-table", true, {}};
    auto tokens = extract_emojis("#crypto price changes last 4 hours \U0001F680 $BTC "
                                 "\U0001F441\uFE0F\U0001F441\uFE0F\U0001F449");
    if (fault) tokens.pop_back();
    const std::vector<std::u32string> want{U"\U0001F680", U"\U0001F441\uFE0F", U"\U0001F441\uFE0F", U"\U0001F449"};
    c.passed = tokens.size() == want.size();
    for (std::size_t i = 0; c.passed && i < want.size(); ++i) c.passed = tokens[i].codepoints == want[i];
    c.detail = std::to_string(tokens.size()) + " tokens from the reference string";
    return c;
}

}  // namespace

std::vector<OracleCheck> cmd_verify(const std::string& inject_fault) {
    struct Entry {
        const char* name;
        OracleCheck (*run)(bool);
    };
    static constexpr Entry checks[] = {{"backtest-oracle", check_backtest},
                                       {"ols-normal-equations", check_ols},
                                       {"ewma-unroll", check_ewma},
                                       {"logit-score", check_logit},
                                       {"emoji-table", check_emoji}};
    std::vector<OracleCheck> out;
    for (const auto& e : checks) {
        try {
            out.push_back(e.run(inject_fault == e.name));
        } catch (const std::exception& ex) {
            out.push_back({e.name, false, ex.what()});
        }
    }
    return out;
}

}  // namespace emosent::app
