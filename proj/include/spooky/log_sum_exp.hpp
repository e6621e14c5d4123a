#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace spooky {

/// log(sum_i exp(args[i])) with max-shift; -inf for an empty range.
inline double log_sum_exp(std::span<const double> args) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double a : args) hi = std::max(hi, a);
    if (!std::isfinite(hi)) return hi;
    double sum = 0.0;
    for (double a : args) sum += std::exp(a - hi);
    return hi + std::log(sum);
}

inline double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (!std::isfinite(a)) return a;
    return a + std::log1p(std::exp(b - a));
}

}  // namespace spooky
