#include <cmath>
#include <filesystem>
#include <functional>
#include <memory>
#include <sstream>

#include "emosent/aggregate.hpp"
#include "emosent/app.hpp"
#include "emosent/backtest.hpp"
#include "emosent/corpus.hpp"
#include "emosent/csv.hpp"
#include "emosent/econometrics.hpp"
#include "emosent/error.hpp"
#include "emosent/json17.hpp"
#include "emosent/sentiment.hpp"
#include "emosent/volindex.hpp"

namespace emosent::app {

namespace fs = std::filesystem;

namespace {

// Runs `body`, attributing any failure to `stage`.
template <class F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const InputError& e) {
        throw StageError(name, e.what(), 2);
    } catch (const ModelError& e) {
        throw StageError(name, e.what(), 2);
    } catch (const ProviderError& e) {
        throw StageError(name, e.what(), 2);
    } catch (const nlohmann::json::exception& e) {
        throw StageError(name, e.what(), 2);
    }
}

std::string out_path(const RunConfig& cfg, const std::string& file) { return (fs::path(cfg.out_dir) / file).string(); }

void emit(const RunConfig& cfg, CommandOutput& out, const std::string& file, std::string_view content) {
    fs::create_directories(cfg.out_dir);
    csv::write_file(out_path(cfg, file), content);
    out.files.push_back(file);
}

void add_row_errors(CommandOutput& out, const std::string& what, const std::vector<RowError>& errors) {
    for (const auto& e : errors) out.warnings.push_back(what + " line " + std::to_string(e.line) + ": " + e.message);
}

EwmaConfig ewma_config(const RunConfig& cfg) {
    EwmaConfig e;
    e.lambda = cfg.lambda;
    e.horizon_days = cfg.horizon;
    e.scale = cfg.index_scale;
    e.annualization = cfg.annualization;
    e.init = cfg.ewma_init == "first_squared" ? EwmaInit::first_squared : EwmaInit::warmup_mean;
    return e;
}

EmptyWindowPolicy empty_policy(const RunConfig& cfg) {
    return cfg.empty_window == "trade" ? EmptyWindowPolicy::trade : EmptyWindowPolicy::no_trade;
}

std::vector<PricePoint> load_price_file(const RunConfig& cfg, CommandOutput& out) {
    if (cfg.prices.empty()) throw InputError("--prices is required");
    auto prices = load_prices(cfg.prices);
    add_row_errors(out, cfg.prices, prices.errors);
    return std::move(prices.items);
}

// --- score -----------------------------------------------------------------

struct ScoreStage {
    std::string scored_csv;
    std::string counts_json;
    std::vector<std::pair<Date, double>> means;
};

ScoreStage run_score(const RunConfig& cfg, CommandOutput& out) {
    if (cfg.tweets.empty()) throw InputError("--tweets is required");
    std::optional<EmojiTable> custom_table;
    if (!cfg.emoji_data.empty()) custom_table = EmojiTable::load(cfg.emoji_data);
    const EmojiTable& table = custom_table ? *custom_table : EmojiTable::bundled();

    std::optional<Lexicon> custom_lexicon;
    if (!cfg.lexicon.empty()) custom_lexicon = Lexicon::load(cfg.lexicon);
    const Lexicon& lexicon = custom_lexicon ? *custom_lexicon : Lexicon::bundled();

    std::shared_ptr<EmbeddingProvider> provider;
    if (!cfg.provider_url.empty()) {
        ProviderConfig pc;
        pc.url = cfg.provider_url;
        pc.timeout = std::chrono::milliseconds(static_cast<long>(std::llround(cfg.provider_timeout * 1000.0)));
        pc.retries = cfg.provider_retries;
        provider = std::make_shared<HttpEmbeddingProvider>(pc);
    }
    ScorerOptions opts;
    opts.source = cfg.score_source == "provider" ? ScoreSource::provider : ScoreSource::lexicon;
    opts.anchor = {cfg.anchor_context, cfg.anchor_target};
    opts.table = &table;
    EmojiScorer scorer(&lexicon, provider, opts);

    auto loaded = load_tweets(cfg.tweets, tweet_format_for(cfg.tweets));
    add_row_errors(out, cfg.tweets, loaded.errors);
    auto with_emoji = filter_emoji_tweets(loaded.items, table);
    const std::size_t per_day = cfg.sample_size == 0 ? std::numeric_limits<std::size_t>::max() : cfg.sample_size;
    auto samples = sample_daily(with_emoji, per_day, cfg.seed);

    ScoreStage result;
    std::ostringstream csv_out;
    csv_out << "tweet_id,date,mean_score,emoji_count\n";
    std::vector<EmojiToken> all_tokens;
    std::size_t sampled = 0;
    for (const auto& day : samples) {
        for (const auto& tweet : day.tweets) {
            ++sampled;
            auto s = scorer.score_tweet(tweet);
            for (const auto& e : s.emoji_scores) all_tokens.push_back(e.token);
            if (!s.mean_score) continue;
            csv::write_row(csv_out, {tweet.id, format_date(day.date), csv::fixed17(*s.mean_score),
                                     std::to_string(s.emoji_scores.size())});
            result.means.emplace_back(day.date, *s.mean_score);
        }
    }
    for (auto& w : scorer.warnings()) out.warnings.push_back(std::move(w));
    if (result.means.empty()) throw InputError("no scorable tweets");

    const auto inv = count_distinct(all_tokens);
    nlohmann::ordered_json counts;
    counts["tweets_loaded"] = loaded.items.size();
    counts["tweets_rejected"] = loaded.errors.size();
    counts["tweets_with_emoji"] = with_emoji.size();
    counts["tweets_sampled"] = sampled;
    counts["tweets_scored"] = result.means.size();
    counts["days"] = samples.size();
    counts["distinct_emoji_raw"] = inv.raw_distinct;
    counts["distinct_emoji_normalized"] = inv.normalized_distinct;
    counts["emoji_table_version"] = table.version();
    result.scored_csv = csv_out.str();
    result.counts_json = dump_json17(counts);
    return result;
}

std::vector<std::pair<Date, double>> read_scored(const std::string& path) {
    std::vector<std::pair<Date, double>> means;
    auto records = csv::parse(csv::read_file(path));
    if (records.empty() || records.front().fields.size() < 3 || records.front().fields[1] != "date" ||
        records.front().fields[2] != "mean_score")
        throw InputError(path + ": expected header tweet_id,date,mean_score,emoji_count");
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& f = records[r].fields;
        auto d = f.size() >= 3 ? parse_date(f[1]) : std::nullopt;
        if (!d) throw InputError(path + " line " + std::to_string(records[r].line) + ": bad row");
        try {
            means.emplace_back(*d, std::stod(f[2]));
        } catch (const std::exception&) {
            throw InputError(path + " line " + std::to_string(records[r].line) + ": bad mean_score");
        }
    }
    if (means.empty()) throw InputError(path + ": no scored tweets");
    return means;
}

// --- aggregate -------------------------------------------------------------

std::set<std::size_t> pipeline_n_values(const RunConfig& cfg) {
    auto ns = cfg.n_values;
    ns.insert(cfg.n);
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) ns.insert(n);
    return ns;
}

std::vector<DailySentiment> load_daily(const RunConfig& cfg, std::set<std::size_t>* ns) {
    if (cfg.daily.empty()) throw InputError("--daily is required");
    return parse_daily_series_csv(csv::read_file(cfg.daily), ns);
}

// --- index -----------------------------------------------------------------

VolIndexSeries build_index(const RunConfig& cfg, CommandOutput& out) {
    if (!cfg.index.empty()) {
        auto levels = load_dated_series(cfg.index, "value");
        add_row_errors(out, cfg.index, levels.errors);
        return vol_index_from_levels(levels.items, cfg.horizon);
    }
    return compute_vol_index(load_price_file(cfg, out), ewma_config(cfg));
}

// --- regress ---------------------------------------------------------------

DatedSeries next_day_log_returns(const std::vector<PricePoint>& prices) {
    DatedSeries out;
    for (std::size_t i = 1; i < prices.size(); ++i)
        if (prices[i].date == prices[i - 1].date + std::chrono::days{1})
            out.push_back({prices[i].date, std::log(prices[i].close / prices[i - 1].close)});
    return out;
}

struct Fitted {
    std::string label;
    std::optional<RegressionReport> report;
    std::string error;
};

nlohmann::ordered_json fitted_json(const Fitted& f) {
    nlohmann::ordered_json j;
    j["label"] = f.label;
    if (f.report) {
        const auto body = report_json(*f.report);
        for (const auto& [k, v] : body.items()) j[k] = v;
    } else {
        j["error"] = f.error;
    }
    return j;
}

template <class Fit>
Fitted try_fit(const std::string& label, CommandOutput& out, Fit&& fit) {
    Fitted f{label, std::nullopt, {}};
    try {
        f.report = fit();
    } catch (const ModelError& e) {
        f.error = e.what();
        out.warnings.push_back("model " + label + ": " + e.what());
    }
    return f;
}

std::string table_for(const std::string& title, const std::vector<Fitted>& fits) {
    std::vector<TableColumn> cols;
    std::string failed;
    for (const auto& f : fits) {
        if (f.report) cols.push_back({f.label, &*f.report});
        else failed += "not estimated (" + f.label + "): " + f.error + "\n";
    }
    return (cols.empty() ? title + "\n" : format_table(title, cols)) + failed;
}

void run_regress(const RunConfig& cfg, const std::vector<DailySentiment>& daily, const std::set<std::size_t>& ns,
                 const std::vector<PricePoint>& prices, const VolIndexSeries& index, CommandOutput& out,
                 std::string& json_text, std::string& table_text) {
    const FitOptions fit_opts{cfg.robust};
    const DatedSeries price_series = to_series(prices);
    const DatedSeries returns = next_day_log_returns(prices);

    std::vector<Fitted> level_fits, return_fits;
    for (auto n : cfg.n_values) {
        if (!ns.count(n)) throw InputError("daily series lacks avgtop/avgbottom for n = " + std::to_string(n));
        auto top = daily_measure(daily, DailyMeasure::avgtop, n, cfg.include_short);
        auto label = "top" + std::to_string(n) + "avg";
        level_fits.push_back(try_fit(label, out, [&] {
            return ols_fit(align(top, price_series, cfg.lag, "Sentiment", "Price"), fit_opts);
        }));
        return_fits.push_back(try_fit(label, out, [&] {
            return ols_fit(align(top, returns, cfg.lag, "Sentiment", "LogReturn"), fit_opts);
        }));
    }
    for (auto n : cfg.n_values) {
        auto bottom = daily_measure(daily, DailyMeasure::avgbottom, n, cfg.include_short);
        level_fits.push_back(try_fit("bottom" + std::to_string(n) + "avg", out, [&] {
            return ols_fit(align(bottom, price_series, cfg.lag, "Sentiment", "Price"), fit_opts);
        }));
    }

    const auto median = daily_measure(daily, DailyMeasure::median, 0, cfg.include_short);
    std::vector<Fitted> vol_fits;
    vol_fits.push_back(try_fit("dir_week", out, [&] {
        LogitOptions lo;
        lo.fit = fit_opts;
        return logit_fit(align(median, index.directions(), 0, "Sentiment_Median", "dirVCRIX_week"), lo);
    }));
    vol_fits.push_back(try_fit("delta_week", out, [&] {
        return ols_fit(align(median, index.deltas(), 0, "Sentiment_Median", "dVCRIX_week"), fit_opts);
    }));

    nlohmann::ordered_json j;
    j["lag_days"] = cfg.lag;
    j["include_short_days"] = cfg.include_short;
    auto arr = [](const std::vector<Fitted>& fits) {
        auto a = nlohmann::ordered_json::array();
        for (const auto& f : fits) a.push_back(fitted_json(f));
        return a;
    };
    j["price_level"] = arr(level_fits);
    j["price_return"] = arr(return_fits);
    j["volatility"] = arr(vol_fits);

    std::ostringstream tables;
    tables << table_for("Next-day price on daily sentiment", level_fits) << '\n';
    tables << table_for("Next-day log return on daily sentiment", return_fits) << '\n';
    tables << table_for("Weekly volatility-index change on median sentiment", vol_fits);

    if (!cfg.text_sentiment.empty()) {
        auto text = load_dated_series(cfg.text_sentiment, "text_sentiment");
        add_row_errors(out, cfg.text_sentiment, text.errors);
        const std::size_t n = cfg.n_values.count(5) ? 5 : *cfg.n_values.begin();
        auto emoji = daily_measure(daily, DailyMeasure::avgtop, n, cfg.include_short);

        nlohmann::ordered_json cmp;
        try {
            auto sample = align(std::vector<DatedSeries>{text.items, emoji}, price_series, cfg.lag,
                                {"Text Sentiment", "Emoji Sentiment"}, "Price");
            auto result = compare_predictors(sample, true, fit_opts);
            cmp["rescaled"] = true;
            cmp["text_only"] = report_json(result.first_only);
            cmp["emoji_only"] = report_json(result.second_only);
            cmp["joint"] = report_json(result.joint);
            tables << '\n'
                   << format_table("Text vs emoji sentiment (rescaled to [-1, 1])",
                                   {{"text", &result.first_only},
                                    {"emoji", &result.second_only},
                                    {"joint", &result.joint}});

            const auto xs = sample.column(0), ys = sample.column(1);
            const double r = pearson_correlation(xs, ys);
            nlohmann::ordered_json corr;
            corr["n"] = xs.size();
            corr["pearson_r"] = r;
            corr["fisher_z"] = fisher_z(r);
            corr["fisher_z_se"] = xs.size() > 3 ? 1.0 / std::sqrt(static_cast<double>(xs.size()) - 3.0) : NAN;
            cmp["correlation"] = corr;
        } catch (const ModelError& e) {
            cmp["error"] = e.what();
            out.warnings.push_back(std::string("text vs emoji comparison: ") + e.what());
        }
        j["text_vs_emoji"] = cmp;
    }
    json_text = dump_json17(j);
    table_text = tables.str();
}

// --- backtest / sweep ------------------------------------------------------

StrategyConfig strategy_config(const RunConfig& cfg) {
    StrategyConfig s;
    s.n = cfg.n;
    s.benchmark = cfg.pace > 0 ? Benchmark::moving(cfg.pace) : Benchmark::cumulative();
    s.empty_window = empty_policy(cfg);
    return s;
}

void run_backtest(const RunConfig& cfg, const std::vector<DailySentiment>& daily, const std::set<std::size_t>& ns,
                  const std::vector<PricePoint>& prices, CommandOutput& out) {
    if (!ns.count(cfg.n)) throw InputError("daily series lacks avgtop for strategy n = " + std::to_string(cfg.n));
    const auto sentiment = daily_measure(daily, DailyMeasure::avgtop, cfg.n, cfg.include_short);
    const auto price_series = to_series(prices);
    const auto s = strategy_config(cfg);
    auto result = run_strategy(sentiment, price_series, s);

    nlohmann::ordered_json j;
    j["n"] = cfg.n;
    j["benchmark"] = cfg.pace > 0 ? "moving" : "cumulative";
    j["pace"] = cfg.pace;
    j["empty_window"] = cfg.empty_window;
    j["eligible_days"] = result.dates.size();
    j["trades"] = result.trades.size();
    j["strategy_profit"] = result.total();
    j["baseline_profit"] = result.baseline_cumulative;
    j["oracle_verified"] = verify_against_oracle(result, sentiment, price_series, s);

    emit(cfg, out, "trades.csv", trade_log_csv(result));
    emit(cfg, out, "cumulative.csv", cumulative_path_csv(result));
    emit(cfg, out, "backtest.json", dump_json17(j));
}

void run_sweep(const RunConfig& cfg, const std::vector<DailySentiment>& daily, const std::set<std::size_t>& ns,
               const std::vector<PricePoint>& prices, CommandOutput& out) {
    std::map<std::size_t, DatedSeries> by_n;
    std::vector<std::size_t> n_range;
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
        if (!ns.count(n)) throw InputError("daily series lacks avgtop for n = " + std::to_string(n));
        by_n[n] = daily_measure(daily, DailyMeasure::avgtop, n, cfg.include_short);
        n_range.push_back(n);
    }
    std::vector<int> paces;
    for (int p = cfg.pace_min; p <= cfg.pace_max; ++p) paces.push_back(p);
    auto m = sweep(by_n, to_series(prices), paces, n_range, empty_policy(cfg), cfg.threads);
    emit(cfg, out, "sweep.csv", sweep_csv(m));
}

}  // namespace

// --- commands --------------------------------------------------------------

CommandOutput cmd_score(const RunConfig& cfg) {
    CommandOutput out;
    stage("score", [&] {
        cfg.validate();
        auto s = run_score(cfg, out);
        emit(cfg, out, "scored.csv", s.scored_csv);
        emit(cfg, out, "emoji_counts.json", s.counts_json);
    });
    return out;
}

CommandOutput cmd_aggregate(const RunConfig& cfg) {
    CommandOutput out;
    stage("aggregate", [&] {
        cfg.validate();
        std::vector<std::pair<Date, double>> means;
        if (!cfg.scored.empty()) {
            means = read_scored(cfg.scored);
        } else {
            auto s = stage("score", [&] { return run_score(cfg, out); });
            emit(cfg, out, "scored.csv", s.scored_csv);
            emit(cfg, out, "emoji_counts.json", s.counts_json);
            means = std::move(s.means);
        }
        emit(cfg, out, "daily.csv", daily_series_csv(build_daily_series(means, cfg.n_values), cfg.n_values));
    });
    return out;
}

CommandOutput cmd_index(const RunConfig& cfg) {
    CommandOutput out;
    stage("index", [&] {
        cfg.validate();
        emit(cfg, out, "index.csv", vol_index_csv(build_index(cfg, out)));
    });
    return out;
}

CommandOutput cmd_regress(const RunConfig& cfg) {
    CommandOutput out;
    stage("regress", [&] {
        cfg.validate();
        std::set<std::size_t> ns;
        auto daily = load_daily(cfg, &ns);
        auto prices = load_price_file(cfg, out);
        auto index = build_index(cfg, out);
        std::string json_text, table_text;
        run_regress(cfg, daily, ns, prices, index, out, json_text, table_text);
        emit(cfg, out, "regression.json", json_text);
        emit(cfg, out, "regression.txt", table_text);
    });
    return out;
}

CommandOutput cmd_backtest(const RunConfig& cfg) {
    CommandOutput out;
    stage("backtest", [&] {
        cfg.validate();
        std::set<std::size_t> ns;
        auto daily = load_daily(cfg, &ns);
        run_backtest(cfg, daily, ns, load_price_file(cfg, out), out);
    });
    return out;
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
    CommandOutput out;
    stage("sweep", [&] {
        cfg.validate();
        std::set<std::size_t> ns;
        auto daily = load_daily(cfg, &ns);
        run_sweep(cfg, daily, ns, load_price_file(cfg, out), out);
    });
    return out;
}

CommandOutput cmd_pipeline(const RunConfig& cfg_in) {
    CommandOutput out;
    RunConfig cfg = cfg_in;
    stage("config", [&] {
        cfg.validate();
        if (cfg.tweets.empty() || cfg.prices.empty()) throw InputError("pipeline needs --tweets and --prices");
    });

    auto scored = stage("score", [&] { return run_score(cfg, out); });
    emit(cfg, out, "scored.csv", scored.scored_csv);
    emit(cfg, out, "emoji_counts.json", scored.counts_json);

    const auto ns = pipeline_n_values(cfg);
    auto daily = stage("aggregate", [&] { return build_daily_series(scored.means, ns); });
    emit(cfg, out, "daily.csv", daily_series_csv(daily, ns));

    auto prices = stage("prices", [&] { return load_price_file(cfg, out); });
    auto index = stage("index", [&] { return build_index(cfg, out); });
    emit(cfg, out, "index.csv", vol_index_csv(index));

    stage("regress", [&] {
        std::string json_text, table_text;
        run_regress(cfg, daily, ns, prices, index, out, json_text, table_text);
        emit(cfg, out, "regression.json", json_text);
        emit(cfg, out, "regression.txt", table_text);
    });
    stage("backtest", [&] { run_backtest(cfg, daily, ns, prices, out); });
    stage("sweep", [&] { run_sweep(cfg, daily, ns, prices, out); });

    stage("manifest", [&] {
        RunConfig recorded = cfg;
        nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
        auto record = [&](const char* key, std::string& path) {
            if (path.empty()) return;
            path = fs::absolute(path).lexically_normal().string();
            nlohmann::ordered_json e;
            e["path"] = path;
            e["sha256"] = sha256_file(path);
            inputs[key] = e;
        };
        record("tweets", recorded.tweets);
        record("prices", recorded.prices);
        record("lexicon", recorded.lexicon);
        record("emoji_data", recorded.emoji_data);
        record("index", recorded.index);
        record("text_sentiment", recorded.text_sentiment);

        nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
        for (const auto& f : out.files) outputs[f] = sha256_file(out_path(cfg, f));

        nlohmann::ordered_json m;
        m["manifest_version"] = 1;
        m["config"] = recorded.to_json();
        m["inputs"] = inputs;
        m["outputs"] = outputs;
        emit(cfg, out, "manifest.json", dump_json17(m));
    });
    return out;
}

ReplayResult replay_manifest(const std::string& manifest_path, const std::string& out_dir) {
    nlohmann::json m;
    try {
        m = nlohmann::json::parse(csv::read_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(manifest_path + ": " + e.what());
    }
    if (!m.contains("config") || !m.contains("outputs")) throw InputError(manifest_path + ": not a run manifest");
    RunConfig cfg = RunConfig::from_json(m["config"]);
    cfg.out_dir = out_dir;
    if (m.contains("inputs")) {
        for (auto& [key, entry] : m["inputs"].items()) {
            const auto path = entry.at("path").get<std::string>();
            if (sha256_file(path) != entry.at("sha256").get<std::string>())
                throw InputError("input '" + key + "' changed since the manifest was written: " + path);
        }
    }
    cmd_pipeline(cfg);

    ReplayResult r;
    for (auto& [file, digest] : m["outputs"].items()) {
        const auto path = (fs::path(out_dir) / file).string();
        if (!fs::exists(path)) r.missing.push_back(file);
        else if (sha256_file(path) != digest.get<std::string>()) r.mismatched.push_back(file);
    }
    return r;
}

}  // namespace emosent::app
