#include "emosent/synthetic.hpp"

#include <cmath>
#include <string>

#include "emosent/aggregate.hpp"
#include "emosent/rng.hpp"
#include "emosent/sentiment.hpp"

namespace emosent {

namespace {

struct PoolEntry {
    const char* emoji;
    double weight_score;  // drives mood tilt; unknown emoji sit at the pool mean
};

// Lexicon emoji plus a few the lexicon does not know (skipped when scoring).
constexpr PoolEntry kPool[] = {
    {"🚀", 0.434}, {"❤️", 0.408}, {"🔥", 0.391}, {"💰", 0.369}, {"🇨🇦", 0.341}, {"🤔", 0.328},
    {"👉", 0.316}, {"⚠️", 0.304}, {"👁️", 0.36},  {"😂", 0.36},   {"📉", 0.36},
};

constexpr const char* kWords[] = {"btc",  "hodl", "moon", "dip",    "pump",   "dump", "chart",
                                  "gm",   "wagmi", "sats", "whales", "volume", "bears", "bulls"};

}  // namespace

SyntheticCorpus make_planted_corpus(const SyntheticConfig& cfg) {
    Xoshiro256 rng(cfg.seed ^ 0x5EED5EED5EED5EEDULL);
    SyntheticCorpus out;

    constexpr std::size_t pool_size = std::size(kPool);
    double mean = 0.0;
    for (const auto& e : kPool) mean += e.weight_score;
    mean /= static_cast<double>(pool_size);

    for (int d = 0; d < cfg.days; ++d) {
        const Date day = cfg.start + std::chrono::days{d};
        const double mood = rng.normal();
        double weights[pool_size];
        double total = 0.0;
        for (std::size_t k = 0; k < pool_size; ++k) {
            weights[k] = std::exp(25.0 * mood * (kPool[k].weight_score - mean));
            total += weights[k];
        }
        for (std::size_t t = 0; t < cfg.tweets_per_day; ++t) {
            std::string text = kWords[rng.below(std::size(kWords))];
            text += ' ';
            text += kWords[rng.below(std::size(kWords))];
            if (rng.uniform() >= 0.1) {
                const auto count = 1 + rng.below(3);
                for (std::uint64_t c = 0; c < count; ++c) {
                    double u = rng.uniform() * total;
                    std::size_t k = 0;
                    while (k + 1 < pool_size && u >= weights[k]) u -= weights[k++];
                    text += ' ';
                    text += kPool[k].emoji;
                }
            }
            const auto secs = std::chrono::seconds{static_cast<long>(rng.below(86400))};
            out.tweets.push_back({"d" + std::to_string(d) + "-" + std::to_string(t), Instant{day} + secs, text});
        }
    }

    // Reproduce the pipeline's view of daily sentiment.
    EmojiScorer scorer(&Lexicon::bundled(), nullptr);
    std::vector<ScoredTweet> scored;
    for (const auto& sample : sample_daily(filter_emoji_tweets(out.tweets), cfg.sample_size, cfg.seed))
        for (const auto& t : sample.tweets) scored.push_back(scorer.score_tweet(t));
    const auto daily = build_daily_series(scored, {cfg.n});

    std::vector<double> level(static_cast<std::size_t>(cfg.days), NAN);
    for (const auto& d : daily) {
        const auto idx = (d.date - cfg.start).count();
        if (idx >= 0 && idx < cfg.days) level[static_cast<std::size_t>(idx)] = d.avgtop.at(cfg.n);
    }
    double s = 0.0, ss = 0.0;
    std::size_t cnt = 0;
    for (double v : level)
        if (!std::isnan(v)) {
            s += v;
            ss += v * v;
            ++cnt;
        }
    const double mu = cnt ? s / static_cast<double>(cnt) : 0.0;
    const double sd = cnt > 1 ? std::sqrt(std::max(ss / static_cast<double>(cnt) - mu * mu, 0.0)) : 1.0;

    Xoshiro256 noise(cfg.seed ^ 0xA11CE5EEDULL);
    double price = cfg.start_price;
    for (int d = 0; d < cfg.days; ++d) {
        out.prices.push_back({cfg.start + std::chrono::days{d}, price});
        const double v = level[static_cast<std::size_t>(d)];
        const double z = std::isnan(v) || sd == 0.0 ? 0.0 : (v - mu) / sd;
        price *= std::exp(cfg.loading * z + cfg.noise_sd * noise.normal());
    }
    out.planted_sentiment = std::move(level);
    return out;
}

}  // namespace emosent
