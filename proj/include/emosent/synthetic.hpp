#pragma once

#include <cstdint>
#include <vector>

#include "emosent/corpus.hpp"

namespace emosent {

/// Corpus with a planted link from daily sentiment to next-day returns.
///
/// Each day gets a latent mood that tilts which emoji its tweets use.
/// After generation the corpus is sampled (sample_size, seed) and scored
/// with the bundled lexicon exactly as the pipeline does; next-day log
/// returns are then
///
///     r_{t+1} = loading * z_t + noise_sd * e_t,   e_t ~ N(0, 1)
///
/// where z_t is the standardized avgtop(n) of day t.
struct SyntheticConfig {
    Date start = Date{std::chrono::year{2019} / 3 / 8};
    int days = 218;  ///< 217 lag-1 observations
    std::size_t tweets_per_day = 70;
    std::size_t sample_size = 50;
    std::size_t n = 5;
    double loading = 0.01;
    double noise_sd = 0.02;
    double start_price = 3900.0;
    std::uint64_t seed = 1;
};

struct SyntheticCorpus {
    std::vector<Tweet> tweets;
    std::vector<PricePoint> prices;
    std::vector<double> planted_sentiment;  ///< avgtop(n) per day, as the pipeline will see it
};

SyntheticCorpus make_planted_corpus(const SyntheticConfig& cfg);

}  // namespace emosent
