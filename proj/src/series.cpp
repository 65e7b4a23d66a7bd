#include "emosent/series.hpp"

#include <algorithm>
#include <cmath>

#include "emosent/error.hpp"

namespace emosent {

std::optional<double> value_at(const DatedSeries& series, Date d) {
    auto it = std::lower_bound(series.begin(), series.end(), d,
                               [](const DatedValue& v, Date x) { return v.date < x; });
    if (it == series.end() || it->date != d) return std::nullopt;
    return it->value;
}

namespace {

// Positives and negatives are summed apart, each from the smallest
// magnitude up, then subtracted. The result ignores input order and flips
// sign exactly when every input does.
double symmetric_sum(std::vector<double>& values) {
    std::sort(values.begin(), values.end(), [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    double pos = 0.0, neg = 0.0;
    for (double v : values) {
        if (v > 0.0) pos += v;
        else neg -= v;
    }
    return pos - neg;
}

}  // namespace

double bounded_mean(std::span<const double> values) {
    if (values.empty()) throw ModelError("mean of empty sample");
    std::vector<double> work(values.begin(), values.end());
    const auto [lo, hi] = std::minmax_element(work.begin(), work.end());
    const double min = *lo, max = *hi;
    const auto n = static_cast<double>(work.size());
    double mean = symmetric_sum(work) / n;
    for (double& v : work) v -= mean;
    mean += symmetric_sum(work) / n;
    return std::clamp(mean, min, max);
}

}  // namespace emosent
