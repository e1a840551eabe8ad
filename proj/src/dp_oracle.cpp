// Backward-induction oracle for the shift problem. Simple mode carries the value
// function exactly as a convex C^1 piecewise quadratic; WeakAware mode uses value
// iteration on a logarithmic distance grid.
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shiftkl/errors.hpp"
#include "shiftkl/shifts.hpp"

namespace shiftkl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// V(y) = p y^2 + q y + r on [lo, hi]
struct Piece {
  double lo, hi, p, q, r;
  double value(double y) const { return (p * y + q) * y + r; }
  double slope(double y) const { return 2.0 * p * y + q; }
};

using PiecewiseQuadratic = std::vector<Piece>;

const Piece& piece_at(const PiecewiseQuadratic& v, double y) {
  for (const Piece& pc : v) {
    if (y <= pc.hi) return pc;
  }
  return v.back();
}

// Minimizer y of (c/L^2)(L d + a - y)^2 + V(y) over y >= a, with kappa = 2c/L^2.
double best_next(const PiecewiseQuadratic& v, double kappa, double L, double a, double d) {
  const Piece& at_a = piece_at(v, a);
  const double target = kappa * (L * d + a);
  if (target <= at_a.slope(a) + kappa * a) return a;
  for (const Piece& pc : v) {
    if (pc.hi < a) continue;
    const double top = pc.hi;
    if (std::isinf(top) || target <= pc.slope(top) + kappa * top) {
      return std::max(a, (target - pc.q) / (2.0 * pc.p + kappa));
    }
  }
  return a;
}

PiecewiseQuadratic backward_step(const PiecewiseQuadratic& v, double c, double L, double a) {
  const Piece& at_a = piece_at(v, a);
  const double va = at_a.value(a);
  if (c == 0.0) return {{0.0, kInf, 0.0, 0.0, va}};
  const double kappa = 2.0 * c / (L * L);
  const double da = at_a.slope(a) * L / (2.0 * c);

  PiecewiseQuadratic out;
  double start = 0.0;
  if (da > 0.0) {
    out.push_back({0.0, da, c, 0.0, va});
    start = da;
  }
  for (const Piece& pc : v) {
    if (pc.hi < a) continue;
    const double denom = 2.0 * pc.p + kappa;
    double end = kInf;
    if (!std::isinf(pc.hi)) end = ((pc.slope(pc.hi) + kappa * pc.hi) / kappa - a) / L;
    if (end <= start) continue;
    // y*(d) = alpha d + beta
    const double alpha = kappa * L / denom;
    const double beta = (kappa * a - pc.q) / denom;
    const double u = L - alpha, w = a - beta, k2 = c / (L * L);
    Piece np;
    np.lo = start;
    np.hi = end;
    np.p = k2 * u * u + pc.p * alpha * alpha;
    np.q = 2.0 * k2 * u * w + 2.0 * pc.p * alpha * beta + pc.q * alpha;
    np.r = k2 * w * w + pc.p * beta * beta + pc.q * beta + pc.r;
    out.push_back(np);
    start = end;
  }
  if (out.empty()) out.push_back({0.0, kInf, c, 0.0, va});
  out.back().hi = kInf;
  return out;
}

OracleResult simple_oracle(const ShiftProblem& pb) {
  const double a = std::get<SimpleError>(pb.error).a;
  std::vector<PiecewiseQuadratic> value(pb.N);
  value[0] = {{0.0, kInf, pb.c_prime, 0.0, pb.b * pb.b}};
  for (long k = 1; k < pb.N; ++k) value[k] = backward_step(value[k - 1], pb.c, pb.L, a);

  OracleResult res;
  res.schedule.eta.assign(pb.N, 1.0);
  double d = pb.d0;
  for (long n = 0; n + 1 < pb.N; ++n) {
    const long remaining = pb.N - 1 - n;
    double eta = 1.0;
    if (pb.c > 0.0 && d > 0.0) {
      const double y = best_next(value[remaining - 1], 2.0 * pb.c / (pb.L * pb.L), pb.L, a, d);
      eta = std::clamp(1.0 - (y - a) / (pb.L * d), 0.0, 1.0);
    }
    res.schedule.eta[n] = eta;
    d = next_distance(pb, d, eta);
  }
  res.value = evaluate_schedule(pb, res.schedule).total;
  return res;
}

struct GridValue {
  std::vector<double> x;
  std::vector<double> v;

  double operator()(double d) const {
    if (d >= x.back()) return v.back() * (d / x.back()) * (d / x.back());
    const auto it = std::upper_bound(x.begin(), x.end(), d);
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const double t = (d - x[j - 1]) / (x[j] - x[j - 1]);
    return v[j - 1] + t * (v[j] - v[j - 1]);
  }
};

// Minimize c eta^2 d^2 + V(next(d, eta)) over eta in [0,1].
double best_eta(const ShiftProblem& pb, const GridValue& v, double d, std::size_t eta_points) {
  auto cost = [&](double eta) { return pb.c * eta * eta * d * d + v(next_distance(pb, d, eta)); };
  double best = 1.0, best_cost = cost(1.0);
  const double step = 1.0 / static_cast<double>(eta_points - 1);
  for (std::size_t i = 0; i + 1 < eta_points; ++i) {
    const double e = i * step;
    const double f = cost(e);
    if (f < best_cost) {
      best_cost = f;
      best = e;
    }
  }
  // golden-section polish inside the neighbouring cells
  double lo = std::max(0.0, best - step), hi = std::min(1.0, best + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = cost(x1), f2 = cost(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = cost(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = cost(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  return cost(mid) < best_cost ? mid : best;
}

OracleResult weak_aware_oracle(const ShiftProblem& pb, const OracleGrid& grid) {
  const auto& err = std::get<WeakAwareError>(pb.error);
  OracleResult res;
  res.schedule.eta.assign(pb.N, 1.0);
  const double dmax = pb.d0 + static_cast<double>(pb.N) * (err.a0 + err.a1);
  if (!(dmax > 0.0)) {
    res.value = evaluate_schedule(pb, res.schedule).total;
    return res;
  }
  GridValue base;
  const std::size_t P = grid.distance_points;
  base.x.resize(P);
  base.x[0] = 0.0;
  const double lmin = std::log(1e-6 * dmax), lmax = std::log(dmax);
  for (std::size_t i = 1; i < P; ++i) {
    base.x[i] = std::exp(lmin + (lmax - lmin) * static_cast<double>(i - 1) / static_cast<double>(P - 2));
  }
  base.x[P - 1] = dmax;

  std::vector<GridValue> value(pb.N, base);
  for (std::size_t i = 0; i < P; ++i) value[0].v.push_back(pb.c_prime * base.x[i] * base.x[i] + pb.b * pb.b);
  for (long k = 1; k < pb.N; ++k) {
    value[k].v.resize(P);
    for (std::size_t i = 0; i < P; ++i) {
      const double d = base.x[i];
      const double e = best_eta(pb, value[k - 1], d, grid.eta_points);
      value[k].v[i] = pb.c * e * e * d * d + value[k - 1](next_distance(pb, d, e));
    }
  }
  double d = pb.d0;
  for (long n = 0; n + 1 < pb.N; ++n) {
    const double e = (d > 0.0) ? best_eta(pb, value[pb.N - 2 - n], d, grid.eta_points) : 1.0;
    res.schedule.eta[n] = e;
    d = next_distance(pb, d, e);
  }
  res.value = evaluate_schedule(pb, res.schedule).total;
  return res;
}

}  // namespace

OracleResult dp_oracle(const ShiftProblem& problem, const OracleGrid& grid) {
  problem.validate();
  if (problem.N > 30) throw OracleScaleError("dp_oracle: N = " + std::to_string(problem.N) + " exceeds 30");
  if (grid.eta_points < 100) throw OracleScaleError("dp_oracle: need at least 100 shift points per step");
  if (problem.weak_aware()) {
    if (grid.distance_points < 100) throw OracleScaleError("dp_oracle: need at least 100 distance points");
    const double work = static_cast<double>(problem.N) * static_cast<double>(grid.distance_points) *
                        static_cast<double>(grid.eta_points);
    if (work > static_cast<double>(grid.max_work)) {
      throw OracleScaleError("dp_oracle: grid work " + std::to_string(work) + " exceeds the configured cap");
    }
    return weak_aware_oracle(problem, grid);
  }
  return simple_oracle(problem);
}

}  // namespace shiftkl
