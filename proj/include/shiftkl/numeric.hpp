#pragma once

#include <vector>

namespace shiftkl {

// sum_{k<n} r^k, accurate for r near 1.
double geometric_sum(double r, long n);

// x - log(1 + x), accurate for small |x|.
double x_minus_log1p(double x);

// expm1(z) / z with the value 1 at z = 0.
double expm1_ratio(double z);

// sqrt(1 + x) - 1 without cancellation.
double sqrt1p_minus_one(double x);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace shiftkl
