#pragma once

#include <optional>
#include <span>
#include <vector>

#include "emosent/date.hpp"

namespace emosent {

struct DatedValue {
    Date date;
    double value = 0.0;
};

/// Observations sorted by strictly increasing date.
using DatedSeries = std::vector<DatedValue>;

/// Binary search by date; nullopt when the date is absent.
std::optional<double> value_at(const DatedSeries& series, Date d);

/// Arithmetic mean that is independent of input order, odd under negation
/// of every input, and always inside [min, max] of its inputs. The sum is
/// refined once and clamped against rounding. Empty input is a ModelError.
double bounded_mean(std::span<const double> values);

}  // namespace emosent
