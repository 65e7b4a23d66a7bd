#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emosent/corpus.hpp"
#include "emosent/series.hpp"

namespace emosent {

/// How the recursion is seeded before the first return.
enum class EwmaInit {
    warmup_mean,    ///< mean of the first min(warmup, n) squared returns
    first_squared,  ///< the first squared return
};

struct EwmaConfig {
    double lambda = 0.82;
    int horizon_days = 7;
    double scale = 100.0;
    double annualization = 365.0;
    EwmaInit init = EwmaInit::warmup_mean;
    int warmup = 7;

    /// Throws InputError unless 0 < lambda < 1 and the other fields are positive.
    void validate() const;
};

/// r_t = ln(p_t / p_{t-1}); length n-1. Throws on fewer than two points or a
/// non-positive price.
std::vector<double> log_returns(std::span<const double> prices);
std::vector<double> log_returns(const std::vector<PricePoint>& prices);

/// Starting variance chosen by cfg.init.
double initial_variance(std::span<const double> returns, const EwmaConfig& cfg);

/// sigma2_t = lambda * sigma2_{t-1} + (1 - lambda) * r_t^2 for t = 1..n,
/// starting from `sigma2_0` (initial_variance() when omitted). Output has one
/// entry per return.
std::vector<double> ewma_variance(std::span<const double> returns, const EwmaConfig& cfg,
                                  std::optional<double> sigma2_0 = std::nullopt);

/// scale * sqrt(annualization * sigma2).
std::vector<double> index_level(std::span<const double> variances, const EwmaConfig& cfg);

struct VolIndexSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    std::map<Date, double> delta_week;  ///< value(d + horizon) - value(d)
    std::map<Date, int> dir_week;       ///< 1 iff delta_week > 0

    DatedSeries levels() const;
    DatedSeries deltas() const;
    DatedSeries directions() const;
};

/// Fills delta_week/dir_week for every date d whose calendar day
/// d + horizon_days is also in the series.
void weekly_delta_and_direction(VolIndexSeries& series, int horizon_days);

/// Full chain: prices -> log returns -> EWMA variance -> index level ->
/// weekly change. The first price date has no return and carries no value.
VolIndexSeries compute_vol_index(const std::vector<PricePoint>& prices, const EwmaConfig& cfg);

/// Wraps precomputed index levels (e.g. published VCRIX data).
VolIndexSeries vol_index_from_levels(const DatedSeries& levels, int horizon_days);

/// `date,value,delta_week,dir_week`; the last two are empty where undefined.
std::string vol_index_csv(const VolIndexSeries& series);

}  // namespace emosent
