#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace emosent::app {

/// Every knob of a run. Defaults reproduce the reference settings: 50
/// tweets per day, n in {5, 10}, lambda 0.82, a 7-day horizon, lag 1.
struct RunConfig {
    // inputs
    std::string tweets;
    std::string prices;
    std::string lexicon;         ///< empty: bundled lexicon
    std::string emoji_data;      ///< empty: bundled Unicode emoji-test table
    std::string index;           ///< precomputed `date,value` index; empty: compute from prices
    std::string text_sentiment;  ///< optional `date,text_sentiment` daily series
    std::string scored;          ///< stage input for `aggregate`
    std::string daily;           ///< stage input for `regress`, `backtest`, `sweep`
    std::string out_dir = "out";

    std::uint64_t seed = 1;
    std::size_t sample_size = 50;  ///< 0 keeps every tweet
    std::set<std::size_t> n_values{5, 10};
    bool include_short = true;

    int lag = 1;
    bool robust = false;

    double lambda = 0.82;
    int horizon = 7;
    double index_scale = 100.0;
    double annualization = 365.0;
    std::string ewma_init = "warmup_mean";  ///< or first_squared

    std::string score_source = "lexicon";  ///< or provider
    std::string anchor_context = "financially positive and optimistic";
    std::string anchor_target = "positive";
    std::string provider_url;
    double provider_timeout = 10.0;  ///< seconds
    int provider_retries = 2;

    std::size_t n = 5;  ///< strategy's avgtop(n)
    int pace = 0;       ///< 0: cumulative benchmark, otherwise moving window
    std::string empty_window = "no_trade";
    int pace_min = 1, pace_max = 60;
    std::size_t n_min = 2, n_max = 10;
    unsigned threads = 0;

    /// Fields that determine outputs (paths included, out_dir excluded).
    nlohmann::ordered_json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);

    /// Throws InputError on out-of-range settings.
    void validate() const;
};

/// A failure attributed to one pipeline stage.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message, int exit_code)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), exit_code_(exit_code) {}
    const std::string& stage() const { return stage_; }
    int exit_code() const { return exit_code_; }

private:
    std::string stage_;
    int exit_code_;
};

/// Files written by a command, relative to out_dir, in write order.
struct CommandOutput {
    std::vector<std::string> files;
    std::vector<std::string> warnings;
};

CommandOutput cmd_score(const RunConfig& cfg);
CommandOutput cmd_aggregate(const RunConfig& cfg);
CommandOutput cmd_index(const RunConfig& cfg);
CommandOutput cmd_regress(const RunConfig& cfg);
CommandOutput cmd_backtest(const RunConfig& cfg);
CommandOutput cmd_sweep(const RunConfig& cfg);

/// All stages into out_dir plus `manifest.json` (config, input and output
/// SHA-256 digests).
CommandOutput cmd_pipeline(const RunConfig& cfg);

struct ReplayResult {
    std::vector<std::string> mismatched;  ///< output files whose digest differs
    std::vector<std::string> missing;
    bool ok() const { return mismatched.empty() && missing.empty(); }
};

/// Re-runs the pipeline recorded in `manifest_path` into `out_dir` and
/// compares every output digest. Throws InputError when an input file no
/// longer matches its recorded digest.
ReplayResult replay_manifest(const std::string& manifest_path, const std::string& out_dir);

struct OracleCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Independent re-computation of the backtest, OLS and EWMA results on
/// seeded built-in fixtures. `inject_fault` names a check whose
/// implementation output is perturbed before comparison (for testing the
/// harness itself).
std::vector<OracleCheck> cmd_verify(const std::string& inject_fault = "");

std::string sha256_file(const std::string& path);

}  // namespace emosent::app
