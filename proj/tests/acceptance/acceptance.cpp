// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "../support/oracles.hpp"
#include "emosent/app.hpp"
#include "emosent/backtest.hpp"
#include "emosent/csv.hpp"
#include "emosent/emoji.hpp"
#include "emosent/sentiment.hpp"
#include "emosent/synthetic.hpp"
#include "emosent/volindex.hpp"

#ifndef EMOSENT_FIXTURE
#error "EMOSENT_FIXTURE must point at the extraction fixture"
#endif

using namespace emosent;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("emosent_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_corpus(const SyntheticCorpus& c, const fs::path& dir) {
    std::ostringstream t, p;
    t << "id,timestamp,text\n";
    for (const auto& tw : c.tweets) csv::write_row(t, {tw.id, format_timestamp(tw.timestamp), tw.text});
    p << "date,close\n";
    for (const auto& pp : c.prices) csv::write_row(p, {format_date(pp.date), csv::fixed17(pp.close)});
    csv::write_file((dir / "tweets.csv").string(), t.str());
    csv::write_file((dir / "prices.csv").string(), p.str());
}

// --- criteria ----------------------------------------------------------------

Outcome lexicon_fidelity() {
    Outcome o;
    const std::pair<const char*, double> expected[] = {
        {"\xF0\x9F\x9A\x80", 0.434},          {"\xF0\x9F\x94\xA5", 0.391}, {"\xE2\x9D\xA4\xEF\xB8\x8F", 0.408},
        {"\xF0\x9F\x92\xB0", 0.369},          {"\xF0\x9F\x91\x89", 0.316}, {"\xF0\x9F\xA4\x94", 0.328},
        {"\xE2\x9A\xA0\xEF\xB8\x8F", 0.304}, {"\xF0\x9F\x87\xA8\xF0\x9F\x87\xA6", 0.341}};
    int exact = 0;
    for (auto [emoji, score] : expected) exact += Lexicon::bundled().lookup(emoji) == score;
    o.pass = exact == 8;

    // Ordering as it appears in an emitted scored.csv.
    const auto dir = scratch("lexicon");
    csv::write_file((dir / "t.csv").string(), "id,timestamp,text\n"
                                              "rocket,2019-03-08T01:00:00Z,\xF0\x9F\x9A\x80\n"
                                              "heart,2019-03-08T02:00:00Z,\xE2\x9D\xA4\xEF\xB8\x8F\n"
                                              "fire,2019-03-08T03:00:00Z,\xF0\x9F\x94\xA5\n");
    app::RunConfig cfg;
    cfg.tweets = (dir / "t.csv").string();
    cfg.out_dir = (dir / "out").string();
    app::cmd_score(cfg);
    std::map<std::string, double> emitted;
    auto rows = csv::parse(csv::read_file((dir / "out" / "scored.csv").string()));
    for (std::size_t i = 1; i < rows.size(); ++i) emitted[rows[i].fields[0]] = std::stod(rows[i].fields[2]);
    const bool ordered = emitted.size() == 3 && emitted["rocket"] > emitted["heart"] && emitted["heart"] > emitted["fire"];
    o.pass = o.pass && ordered && emitted["rocket"] == 0.434;
    o.detail = std::to_string(exact) + "/8 exact, emitted order rocket > heart > fire " + (ordered ? "holds" : "broken");
    fs::remove_all(dir);
    return o;
}

Outcome emoji_extraction() {
    Outcome o;
    std::ifstream in(EMOSENT_FIXTURE);
    std::vector<std::pair<std::string, std::vector<std::string>>> cases;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        cases.emplace_back(j["text"].get<std::string>(), j["tokens"].get<std::vector<std::string>>());
    }
    const auto t0 = Clock::now();
    int agree = 0;
    std::string first_bad;
    for (const auto& [text, want] : cases) {
        std::vector<std::string> got;
        for (const auto& t : extract_emojis(text)) got.push_back(t.lexeme);
        if (got == want) ++agree;
        else if (first_bad.empty()) first_bad = text;
    }
    const double secs = seconds_since(t0);
    const auto reference = extract_emojis("#crypto price changes last 4 hours \xF0\x9F\x9A\x80 $BTC "
                                      "\xF0\x9F\x91\x81\xEF\xB8\x8F\xF0\x9F\x91\x81\xEF\xB8\x8F\xF0\x9F\x91\x89");
    o.pass = cases.size() == 200 && agree == 200 && reference.size() == 4 && secs < 1.0;
    o.detail = std::to_string(agree) + "/" + std::to_string(cases.size()) + " agree, reference string -> " +
               std::to_string(reference.size()) + " tokens, " + fmt("%.4f s", secs);
    if (!first_bad.empty()) o.detail += ", first mismatch: " + first_bad;
    return o;
}

Outcome ols_oracle() {
    Outcome o;
    Xoshiro256 rng(1);
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
        std::vector<double> x(20), y(20);
        const double a = rng.normal(), b = 3.0 * rng.normal(), scale = std::exp(3.0 * rng.normal());
        for (int i = 0; i < 20; ++i) {
            x[i] = scale * rng.normal();
            y[i] = a + b * x[i] / scale + rng.normal();
        }
        const auto s = oracle::sample_from({x}, y);
        const auto fit = ols_fit(s);
        const auto ref = oracle::ols(s);
        auto rel = [](double v, long double r) {
            return static_cast<double>(std::fabs(v - r) / std::max(1.0L, std::fabs(r)));
        };
        for (int i = 0; i < 2; ++i) {
            worst = std::max(worst, rel(fit.coefficients[i].estimate, ref.beta[i]));
            worst = std::max(worst, rel(fit.coefficients[i].std_error, ref.se[i]));
        }
        worst = std::max(worst, rel(fit.adj_r_squared, ref.adj_r2));
    }
    const auto line = ols_fit(oracle::sample_from({{0, 1, 2}}, {1, 3, 5}));
    const double eps = std::numeric_limits<double>::epsilon();
    const double line_err = std::max({std::fabs(line.coefficients[0].estimate - 1.0),
                                      std::fabs(line.coefficients[1].estimate - 2.0), std::fabs(line.r_squared - 1.0)});
    o.pass = worst <= 1e-9 && line_err <= 4 * eps;
    o.detail = "max deviation " + fmt("%.3g", worst) + " (tol 1e-9), exact line error " + fmt("%.3g", line_err) +
               " (tol 4 ulp)";
    return o;
}

Outcome logit_oracle() {
    Outcome o;
    Xoshiro256 rng(1);
    int done = 0, coef_ok = 0, score_ok = 0;
    double worst_coef = 0, worst_score = 0;
    while (done < 20) {
        const double b0 = rng.uniform() - 0.5, b1 = 0.5 + 1.5 * rng.uniform();
        std::vector<double> x(30), y(30);
        for (int i = 0; i < 30; ++i) {
            x[i] = rng.normal();
            y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-(b0 + b1 * x[i]))) ? 1 : 0;
        }
        const auto s = oracle::sample_from({x}, y);
        RegressionReport fit;
        try {
            fit = logit_fit(s);
        } catch (const std::exception&) {
            continue;  // single-class draw
        }
        if (fit.separation) continue;
        ++done;
        const auto [g0, g1] = oracle::logit_grid(s, 1e-3);
        const double dc = std::max(std::fabs(fit.coefficients[0].estimate - g0), std::fabs(fit.coefficients[1].estimate - g1));
        const auto g = oracle::logit_score(s, {fit.coefficients[0].estimate, fit.coefficients[1].estimate});
        const double norm = static_cast<double>(std::sqrt(g[0] * g[0] + g[1] * g[1]));
        worst_coef = std::max(worst_coef, dc);
        worst_score = std::max(worst_score, norm);
        coef_ok += dc <= 1e-3;
        score_ok += norm <= 1e-6;
    }
    const auto sep = logit_fit(oracle::sample_from({{-3, -2, -1, 1, 2, 3}}, {0, 0, 0, 1, 1, 1}));
    const auto table = format_table("separation", {{"sep", &sep}});
    const bool flagged = sep.separation && table.find("n/a") != std::string::npos;
    o.pass = coef_ok == 20 && score_ok == 20 && flagged;
    o.detail = std::to_string(coef_ok) + "/20 within grid step (max " + fmt("%.2g", worst_coef) + "), " +
               std::to_string(score_ok) + "/20 score norm <= 1e-6 (max " + fmt("%.2g", worst_score) +
               "), separation " + (flagged ? "flagged" : "NOT flagged");
    return o;
}

Outcome ewma() {
    Outcome o;
    Xoshiro256 rng(1);
    EwmaConfig cfg;
    cfg.lambda = 0.82;
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<double> r(100);
        for (auto& x : r) x = 0.04 * rng.normal();
        const double s0 = initial_variance(r, cfg);
        const auto rec = ewma_variance(r, cfg, s0);
        const auto ref = oracle::ewma_unrolled(r, cfg.lambda, s0);
        for (std::size_t i = 0; i < r.size(); ++i)
            worst = std::max(worst, static_cast<double>(std::fabs(rec[i] - ref[i]) / ref[i]));
    }
    bool fixed = true;
    for (double r : {0.0, 0.01, -0.03, 0.1234567}) {
        const std::vector<double> constant(100, r);
        for (double v : ewma_variance(constant, cfg)) fixed = fixed && v == r * r;
        for (double v : ewma_variance(constant, cfg, r * r)) fixed = fixed && v == r * r;
    }
    o.pass = worst <= 1e-12 && fixed;
    o.detail = "100 series, max relative deviation from unrolled sum " + fmt("%.3g", worst) +
               " (tol 1e-12), constant-return fixed point " + (fixed ? "exact" : "broken");
    return o;
}

Outcome backtest_oracle() {
    Outcome o;
    int oracle_ok = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto [s, p] = oracle::backtest_fixture(seed);
        const int pace = seed % 4 == 0 ? 0 : static_cast<int>(seed % 17) + 1;
        const bool eager = seed % 3 == 0;
        StrategyConfig cfg;
        cfg.benchmark = pace ? Benchmark::moving(pace) : Benchmark::cumulative();
        cfg.empty_window = eager ? EmptyWindowPolicy::trade : EmptyWindowPolicy::no_trade;
        const auto r = run_strategy(s, p, cfg);
        const auto ref = oracle::naive_backtest(s, p, pace, eager);
        bool same = r.dates.size() == ref.size();
        double running = 0;
        for (std::size_t i = 0; same && i < ref.size(); ++i) {
            running += ref[i].pnl;
            same = r.dates[i] == ref[i].date && r.daily_pnl[i] == ref[i].pnl && r.cumulative[i] == running;
        }
        oracle_ok += same && verify_against_oracle(r, s, p, cfg);
    }

    // Always trading: strictly rising sentiment; dyadic prices make every partial sum exact.
    int always_ok = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Xoshiro256 rng(seed);
        DatedSeries s, p;
        const int days = 30 + static_cast<int>(rng.below(200));
        for (int d = 0; d < days; ++d) {
            s.push_back({oracle::day(d), static_cast<double>(d)});
            p.push_back({oracle::day(d), static_cast<double>(200000 + rng.below(100000)) / 64.0});
        }
        StrategyConfig cfg;
        cfg.empty_window = EmptyWindowPolicy::trade;
        const auto r = run_strategy(s, p, cfg);
        always_ok += r.trades.size() == static_cast<std::size_t>(days - 1) && r.total() == p.back().value - p.front().value &&
                     baseline_profit(p) == p.back().value - p.front().value;
    }

    int shift_ok = 0;
    for (std::uint64_t seed = 1001; seed <= 1050; ++seed) {
        auto [s, p] = oracle::backtest_fixture(seed);
        StrategyConfig cfg;
        cfg.benchmark = seed % 2 ? Benchmark::cumulative() : Benchmark::moving(static_cast<int>(seed % 9) + 1);
        const auto base = run_strategy(s, p, cfg);
        Xoshiro256 rng(seed);
        const double c = std::ldexp(static_cast<double>(rng.below(64)) - 32.0, -4);
        auto shifted = s;
        for (auto& v : shifted) v.value += c;
        shift_ok += run_strategy(shifted, p, cfg).daily_pnl == base.daily_pnl;
    }

    auto [s, p] = oracle::backtest_fixture(77, 60, 60);
    std::map<std::size_t, DatedSeries> by_n;
    Xoshiro256 rng(77);
    for (std::size_t n = 2; n <= 10; ++n) {
        by_n[n] = s;
        for (auto& v : by_n[n]) v.value += 0.05 * rng.normal();
    }
    std::vector<std::size_t> ns;
    for (std::size_t n = 2; n <= 10; ++n) ns.push_back(n);
    const int len = static_cast<int>(s.size());
    const std::vector<int> paces{len, len + 1, 2 * len};
    const auto m = sweep(by_n, p, paces, ns);
    int sweep_ok = 0;
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        const double cumulative = run_strategy(by_n[ns[ni]], p, {ns[ni], Benchmark::cumulative()}).total();
        bool all = true;
        for (std::size_t pi = 0; pi < paces.size(); ++pi) all = all && m.at(pi, ni) == cumulative;
        sweep_ok += all;
    }
    o.pass = oracle_ok == 100 && always_ok == 20 && shift_ok == 50 && sweep_ok == 9;
    o.detail = std::to_string(oracle_ok) + "/100 match naive re-simulation, " + std::to_string(always_ok) +
               "/20 always-trade = last - first exactly, " + std::to_string(shift_ok) + "/50 shift-invariant, " +
               std::to_string(sweep_ok) + "/9 n values with sweep(pace >= length) = cumulative";
    return o;
}

Outcome planted_signal() {
    Outcome o;
    const auto t0 = Clock::now();
    int recovered = 0, right_n = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto dir = scratch("planted");
        SyntheticConfig sc;
        sc.seed = seed;
        write_corpus(make_planted_corpus(sc), dir);
        app::RunConfig cfg;
        cfg.seed = seed;
        cfg.tweets = (dir / "tweets.csv").string();
        cfg.prices = (dir / "prices.csv").string();
        cfg.out_dir = (dir / "out").string();
        app::cmd_pipeline(cfg);
        const auto reg = nlohmann::json::parse(csv::read_file((dir / "out" / "regression.json").string()));
        for (const auto& m : reg["price_return"]) {
            if (m["label"] != "top5avg") continue;
            right_n += m["n_obs"] == 217;
            const auto& slope = m["coefficients"][1];
            recovered += slope["estimate"].get<double>() > 0 && slope["p_value"].get<double>() < 0.05;
        }
        fs::remove_all(dir);
    }
    const double secs = seconds_since(t0);
    o.pass = recovered >= 95 && right_n == 100 && secs < 120.0;
    o.detail = std::to_string(recovered) + "/100 runs with positive top5avg slope at p < 0.05 (need 95), " +
               std::to_string(right_n) + "/100 with n_obs = 217, " + fmt("%.1f s", secs) + " (limit 120 s)";
    return o;
}

Outcome fisher() {
    Outcome o;
    const double z = fisher_z(0.288);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const double r = -0.99 + 1.98 * (i + 0.5) / 1000.0;
        worst = std::max(worst, std::fabs(std::tanh(fisher_z(r)) - r));
    }
    o.pass = std::fabs(z - 0.29637) <= 1e-5 && worst <= 1e-12;
    o.detail = "fisher_z(0.288) = " + fmt("%.8f", z) + " (target 0.29637 +/- 1e-5), max |tanh(fisher_z(r)) - r| = " + fmt("%.3g", worst);
    return o;
}

Outcome determinism() {
    Outcome o;
    const auto dir = scratch("determinism");
    SyntheticConfig sc;
    sc.seed = 42;
    write_corpus(make_planted_corpus(sc), dir);
    app::RunConfig cfg;
    cfg.seed = 42;
    cfg.tweets = (dir / "tweets.csv").string();
    cfg.prices = (dir / "prices.csv").string();
    cfg.out_dir = (dir / "first").string();
    const auto out = app::cmd_pipeline(cfg);
    const auto replay = app::replay_manifest((dir / "first" / "manifest.json").string(), (dir / "second").string());
    std::size_t identical = 0;
    for (const auto& f : out.files)
        identical += csv::read_file((dir / "first" / f).string()) == csv::read_file((dir / "second" / f).string());
    o.pass = replay.ok() && identical == out.files.size();
    o.detail = std::to_string(identical) + "/" + std::to_string(out.files.size()) +
               " files byte-identical after manifest replay";
    fs::remove_all(dir);
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"lexicon-fidelity", lexicon_fidelity}, {"emoji-extraction", emoji_extraction},
        {"ols-oracle", ols_oracle},             {"logit-oracle", logit_oracle},
        {"ewma", ewma},                         {"backtest-oracle", backtest_oracle},
        {"planted-signal", planted_signal},     {"fisher-z", fisher},
        {"determinism", determinism}};
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
    return failed ? 1 : 0;
}
