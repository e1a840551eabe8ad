#include "shiftkl/numeric.hpp"

#include <cmath>
#include <limits>

#include "shiftkl/errors.hpp"

namespace shiftkl {

double geometric_sum(double r, long n) {
  if (n < 0 || !(r >= 0.0)) throw DomainError("geometric_sum: need r >= 0 and n >= 0");
  if (n == 0) return 0.0;
  if (r == 1.0) return static_cast<double>(n);
  if (r == 0.0) return 1.0;
  const double lr = std::log1p(r - 1.0);
  return std::expm1(static_cast<double>(n) * lr) / std::expm1(lr);
}

double x_minus_log1p(double x) {
  if (!(x > -1.0)) throw DomainError("x_minus_log1p: need x > -1");
  if (std::fabs(x) < 1e-3) {
    // alternating series x^2/2 - x^3/3 + ...
    double term = x * x;
    double sum = 0.0;
    for (int k = 2; k < 14; ++k) {
      sum += ((k % 2 == 0) ? 1.0 : -1.0) * term / k;
      term *= x;
    }
    return sum;
  }
  return x - std::log1p(x);
}

double expm1_ratio(double z) {
  if (z == 0.0) return 1.0;
  return std::expm1(z) / z;
}

double sqrt1p_minus_one(double x) { return x / (std::sqrt(1.0 + x) + 1.0); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("loglog_slope: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) return std::numeric_limits<double>::quiet_NaN();
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace shiftkl
