#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "emosent/app.hpp"
#include "emosent/csv.hpp"
#include "emosent/error.hpp"
#include "emosent/synthetic.hpp"

namespace fs = std::filesystem;
using namespace emosent;

namespace {

void report(const app::CommandOutput& out, const std::string& dir) {
    for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : out.files) std::cout << (fs::path(dir) / f).string() << '\n';
}

int write_synthetic(const SyntheticConfig& sc, const std::string& dir) {
    auto corpus = make_planted_corpus(sc);
    fs::create_directories(dir);
    std::ostringstream tweets, prices;
    tweets << "id,timestamp,text\n";
    for (const auto& t : corpus.tweets) csv::write_row(tweets, {t.id, format_timestamp(t.timestamp), t.text});
    prices << "date,close\n";
    for (const auto& p : corpus.prices) csv::write_row(prices, {format_date(p.date), csv::fixed17(p.close)});
    csv::write_file((fs::path(dir) / "tweets.csv").string(), tweets.str());
    csv::write_file((fs::path(dir) / "prices.csv").string(), prices.str());
    std::cout << (fs::path(dir) / "tweets.csv").string() << '\n' << (fs::path(dir) / "prices.csv").string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Emoji sentiment, volatility index, regressions and trading backtest"};
    cli.require_subcommand(1);
    cli.set_config("--config", "", "Key-value config file (TOML/INI); command-line flags take precedence");

    app::RunConfig cfg;
    std::vector<std::size_t> n_values(cfg.n_values.begin(), cfg.n_values.end());
    cli.add_option("--tweets", cfg.tweets, "Tweet file (.csv with id,timestamp,text or .jsonl)");
    cli.add_option("--prices", cfg.prices, "Daily close prices (date,close)");
    cli.add_option("--lexicon", cfg.lexicon, "Emoji lexicon JSON (default: bundled)");
    cli.add_option("--emoji-data", cfg.emoji_data, "Unicode emoji-test.txt (default: bundled 15.1)");
    cli.add_option("--index", cfg.index, "Precomputed volatility index (date,value) instead of computing from prices");
    cli.add_option("--text-sentiment", cfg.text_sentiment, "Daily text sentiment (date,text_sentiment) to compare");
    cli.add_option("--scored", cfg.scored, "scored.csv from `score` (for aggregate)");
    cli.add_option("--daily", cfg.daily, "daily.csv from `aggregate` (for regress/backtest/sweep)");
    cli.add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
    cli.add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
    cli.add_option("--sample-size", cfg.sample_size, "Tweets sampled per day (0 keeps all)")->capture_default_str();
    cli.add_option("--n", n_values, "Tail sizes n for avgtop/avgbottom")->capture_default_str()->expected(1, -1);
    cli.add_flag("!--exclude-short", cfg.include_short, "Drop days with fewer than n scored tweets");
    cli.add_option("--lag", cfg.lag, "Regression lag in days")->capture_default_str();
    cli.add_flag("--robust", cfg.robust, "Heteroskedasticity-robust standard errors");
    cli.add_option("--lambda", cfg.lambda, "EWMA decay")->capture_default_str();
    cli.add_option("--horizon", cfg.horizon, "Index change horizon in days")->capture_default_str();
    cli.add_option("--index-scale", cfg.index_scale, "Index level multiplier")->capture_default_str();
    cli.add_option("--annualization", cfg.annualization, "Days per year in the index level")->capture_default_str();
    cli.add_option("--ewma-init", cfg.ewma_init, "Starting variance")->check(CLI::IsMember({"warmup_mean", "first_squared"}))
        ->capture_default_str();
    cli.add_option("--score-source", cfg.score_source, "lexicon (provider for unknown emoji) or provider only")->check(CLI::IsMember({"lexicon", "provider"}))
        ->capture_default_str();
    cli.add_option("--anchor-context", cfg.anchor_context, "Phrase holding the anchor token")->capture_default_str();
    cli.add_option("--anchor-target", cfg.anchor_target, "Anchor token embedded in context")->capture_default_str();
    cli.add_option("--provider-url", cfg.provider_url, "Embedding service base URL");
    cli.add_option("--provider-timeout", cfg.provider_timeout, "Seconds per request")->capture_default_str();
    cli.add_option("--provider-retries", cfg.provider_retries, "Extra attempts per request")->capture_default_str();
    cli.add_option("--strategy-n", cfg.n, "avgtop(n) series driving the backtest")->capture_default_str();
    cli.add_option("--pace", cfg.pace, "Moving benchmark window; 0 uses the cumulative mean")->capture_default_str();
    cli.add_option("--empty-window", cfg.empty_window, "Decision when the benchmark window is empty")->check(CLI::IsMember({"no_trade", "trade"}))
        ->capture_default_str();
    cli.add_option("--pace-min", cfg.pace_min, "Sweep pace range start")->capture_default_str();
    cli.add_option("--pace-max", cfg.pace_max, "Sweep pace range end")->capture_default_str();
    cli.add_option("--n-min", cfg.n_min, "Sweep n range start")->capture_default_str();
    cli.add_option("--n-max", cfg.n_max, "Sweep n range end")->capture_default_str();
    cli.add_option("--threads", cfg.threads, "Sweep workers (0 = all cores)")->capture_default_str();

    auto* score = cli.add_subcommand("score", "Extract and score emojis per sampled tweet");
    auto* aggregate = cli.add_subcommand("aggregate", "Daily avgtop/avgbottom/median series");
    auto* index = cli.add_subcommand("index", "EWMA volatility index and weekly change");
    auto* regress = cli.add_subcommand("regress", "Price and volatility regressions");
    auto* backtest = cli.add_subcommand("backtest", "Sentiment-gated trading strategy");
    auto* sweep = cli.add_subcommand("sweep", "Profit over pace x n");
    auto* pipeline = cli.add_subcommand("pipeline", "All stages plus a replayable manifest");
    std::string replay;
    pipeline->add_option("--replay", replay, "Re-run a manifest.json and compare output digests");
    auto* verify = cli.add_subcommand("verify", "Run the built-in oracle checks");
    std::string fault;
    verify->add_option("--inject-fault", fault, "Perturb one check's output (harness self-test)");
    auto* synth = cli.add_subcommand("synth", "Write a synthetic corpus with a planted sentiment signal");
    SyntheticConfig sc;
    synth->add_option("--days", sc.days, "Calendar days")->capture_default_str();
    synth->add_option("--tweets-per-day", sc.tweets_per_day, "Tweets generated per day")->capture_default_str();
    synth->add_option("--loading", sc.loading, "Next-day log return per unit of standardized avgtop(n)")->capture_default_str();
    synth->add_option("--noise-sd", sc.noise_sd, "Return noise standard deviation")->capture_default_str();
    for (auto* sub : cli.get_subcommands({})) sub->fallthrough();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : 2;
    }
    cfg.n_values = {n_values.begin(), n_values.end()};

    try {
        if (verify->parsed()) {
            bool ok = true;
            for (const auto& c : app::cmd_verify(fault)) {
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
                ok = ok && c.passed;
            }
            return ok ? 0 : 1;
        }
        if (synth->parsed()) {
            sc.seed = cfg.seed;
            sc.sample_size = cfg.sample_size;
            sc.n = cfg.n;
            return write_synthetic(sc, cfg.out_dir);
        }
        if (pipeline->parsed() && !replay.empty()) {
            auto r = app::replay_manifest(replay, cfg.out_dir);
            for (const auto& f : r.mismatched) std::cout << "MISMATCH " << f << '\n';
            for (const auto& f : r.missing) std::cout << "MISSING " << f << '\n';
            std::cout << (r.ok() ? "replay: all outputs identical\n" : "replay: outputs differ\n");
            return r.ok() ? 0 : 1;
        }
        app::CommandOutput out;
        if (score->parsed()) out = app::cmd_score(cfg);
        else if (aggregate->parsed()) out = app::cmd_aggregate(cfg);
        else if (index->parsed()) out = app::cmd_index(cfg);
        else if (regress->parsed()) out = app::cmd_regress(cfg);
        else if (backtest->parsed()) out = app::cmd_backtest(cfg);
        else if (sweep->parsed()) out = app::cmd_sweep(cfg);
        else out = app::cmd_pipeline(cfg);
        report(out, cfg.out_dir);
        return 0;
    } catch (const app::StageError& e) {
        std::cerr << "error in stage " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
