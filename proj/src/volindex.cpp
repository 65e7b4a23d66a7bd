#include "emosent/volindex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "emosent/csv.hpp"
#include "emosent/error.hpp"

namespace emosent {

void EwmaConfig::validate() const {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("lambda must lie in (0, 1)");
    if (horizon_days < 1) throw InputError("horizon must be at least 1 day");
    if (!(scale > 0.0) || !(annualization > 0.0)) throw InputError("scale and annualization must be positive");
    if (warmup < 1) throw InputError("warmup must be at least 1");
}

std::vector<double> log_returns(std::span<const double> prices) {
    if (prices.size() < 2) throw ModelError("log returns need at least two prices");
    std::vector<double> out;
    out.reserve(prices.size() - 1);
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0)) throw ModelError("non-positive price");
        if (i > 0) out.push_back(std::log(prices[i] / prices[i - 1]));
    }
    return out;
}

std::vector<double> log_returns(const std::vector<PricePoint>& prices) {
    std::vector<double> closes;
    closes.reserve(prices.size());
    for (const auto& p : prices) closes.push_back(p.close);
    return log_returns(closes);
}

double initial_variance(std::span<const double> returns, const EwmaConfig& cfg) {
    if (returns.empty()) throw ModelError("EWMA needs at least one return");
    if (cfg.init == EwmaInit::first_squared) return returns[0] * returns[0];
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.warmup), returns.size());
    std::vector<double> squares(k);
    for (std::size_t i = 0; i < k; ++i) squares[i] = returns[i] * returns[i];
    return bounded_mean(squares);
}

std::vector<double> ewma_variance(std::span<const double> returns, const EwmaConfig& cfg,
                                  std::optional<double> sigma2_0) {
    if (returns.empty()) throw ModelError("EWMA needs at least one return");
    double var = sigma2_0 ? *sigma2_0 : initial_variance(returns, cfg);
    if (!(var >= 0.0)) throw ModelError("initial variance must be non-negative");
    const double lambda = cfg.lambda;
    std::vector<double> out;
    out.reserve(returns.size());
    for (double r : returns) {
        // Same as lambda * var + (1 - lambda) * r^2, written as a step towards
        // r^2 so a constant return is an exact fixed point and every value
        // stays between its two inputs.
        var += (1.0 - lambda) * (r * r - var);
        out.push_back(var);
    }
    return out;
}

std::vector<double> index_level(std::span<const double> variances, const EwmaConfig& cfg) {
    std::vector<double> out;
    out.reserve(variances.size());
    for (double v : variances) out.push_back(cfg.scale * std::sqrt(cfg.annualization * std::max(v, 0.0)));
    return out;
}

void weekly_delta_and_direction(VolIndexSeries& series, int horizon_days) {
    series.delta_week.clear();
    series.dir_week.clear();
    const std::chrono::days horizon{horizon_days};
    for (std::size_t i = 0; i < series.dates.size(); ++i) {
        auto target = series.dates[i] + horizon;
        auto it = std::lower_bound(series.dates.begin() + static_cast<std::ptrdiff_t>(i), series.dates.end(), target);
        if (it == series.dates.end() || *it != target) continue;
        const double delta = series.values[static_cast<std::size_t>(it - series.dates.begin())] - series.values[i];
        series.delta_week[series.dates[i]] = delta;
        series.dir_week[series.dates[i]] = delta > 0.0 ? 1 : 0;
    }
}

VolIndexSeries compute_vol_index(const std::vector<PricePoint>& prices, const EwmaConfig& cfg) {
    cfg.validate();
    auto returns = log_returns(prices);
    auto levels = index_level(ewma_variance(returns, cfg), cfg);
    VolIndexSeries out;
    for (std::size_t i = 1; i < prices.size(); ++i) out.dates.push_back(prices[i].date);
    out.values = std::move(levels);
    weekly_delta_and_direction(out, cfg.horizon_days);
    return out;
}

VolIndexSeries vol_index_from_levels(const DatedSeries& levels, int horizon_days) {
    VolIndexSeries out;
    for (const auto& v : levels) {
        if (v.value < 0.0) throw InputError("negative index level on " + format_date(v.date));
        out.dates.push_back(v.date);
        out.values.push_back(v.value);
    }
    weekly_delta_and_direction(out, horizon_days);
    return out;
}

DatedSeries VolIndexSeries::levels() const {
    DatedSeries out;
    for (std::size_t i = 0; i < dates.size(); ++i) out.push_back({dates[i], values[i]});
    return out;
}

DatedSeries VolIndexSeries::deltas() const {
    DatedSeries out;
    for (const auto& [d, v] : delta_week) out.push_back({d, v});
    return out;
}

DatedSeries VolIndexSeries::directions() const {
    DatedSeries out;
    for (const auto& [d, v] : dir_week) out.push_back({d, static_cast<double>(v)});
    return out;
}

std::string vol_index_csv(const VolIndexSeries& series) {
    std::ostringstream out;
    out << "date,value,delta_week,dir_week\n";
    for (std::size_t i = 0; i < series.dates.size(); ++i) {
        const auto d = series.dates[i];
        out << format_date(d) << ',' << csv::fixed17(series.values[i]) << ',';
        if (auto it = series.delta_week.find(d); it != series.delta_week.end())
            out << csv::fixed17(it->second) << ',' << series.dir_week.at(d);
        else
            out << ',';
        out << '\n';
    }
    return out.str();
}

}  // namespace emosent
