#include "shiftkl/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shiftkl/errors.hpp"
#include "shiftkl/numeric.hpp"

namespace shiftkl {

namespace {

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be finite and >= 0");
}

void require_steps(long N) {
  if (N < 1) throw DomainError("N must be >= 1");
}

}  // namespace

void ShiftProblem::validate() const {
  require_steps(N);
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("L must be finite and > 0");
  require_nonneg(d0, "d0");
  require_nonneg(c, "c");
  require_nonneg(c_prime, "c_prime");
  require_nonneg(b, "b");
  if (const auto* s = std::get_if<SimpleError>(&error)) {
    require_nonneg(s->a, "a");
  } else {
    const auto& w = std::get<WeakAwareError>(error);
    require_nonneg(w.a0, "a0");
    require_nonneg(w.a1, "a1");
  }
}

void ShiftSchedule::check_feasible() const {
  if (eta.empty()) throw FeasibilityError("schedule is empty");
  for (std::size_t n = 0; n < eta.size(); ++n) {
    if (!(eta[n] >= 0.0 && eta[n] <= 1.0)) {
      throw FeasibilityError("shift " + std::to_string(n) + " outside [0,1]");
    }
  }
  if (eta.back() != 1.0) throw FeasibilityError("final shift must equal 1");
}

double next_distance(const ShiftProblem& problem, double d, double eta) {
  const double keep = 1.0 - eta;
  if (const auto* s = std::get_if<SimpleError>(&problem.error)) {
    return problem.L * keep * d + s->a;
  }
  const auto& w = std::get<WeakAwareError>(problem.error);
  const double ld = problem.L * keep * d;
  return std::sqrt(ld * ld + 2.0 * w.a1 * keep * d + w.a0 * w.a0);
}

ObjectiveTrace evaluate_schedule(const ShiftProblem& problem, const ShiftSchedule& schedule) {
  problem.validate();
  if (static_cast<long>(schedule.size()) != problem.N) {
    throw FeasibilityError("schedule length " + std::to_string(schedule.size()) + " differs from N = " +
                           std::to_string(problem.N));
  }
  schedule.check_feasible();
  ObjectiveTrace tr;
  tr.distances.reserve(schedule.size());
  double d = problem.d0;
  tr.distances.push_back(d);
  for (long n = 0; n + 1 < problem.N; ++n) {
    const double e = schedule.eta[n];
    tr.main_term += problem.c * e * e * d * d;
    d = next_distance(problem, d, e);
    tr.distances.push_back(d);
  }
  tr.final_term = problem.c_prime * d * d + problem.b * problem.b;
  tr.total = tr.main_term + tr.final_term;
  return tr;
}

double optimal_value_L1(long N, double a, double d0) {
  require_steps(N);
  require_nonneg(a, "a");
  require_nonneg(d0, "d0");
  const double m = static_cast<double>(N - 1);
  if (d0 >= a) return (d0 + m * a) * (d0 + m * a) / static_cast<double>(N);
  return d0 * d0 + m * a * a;
}

ShiftSolution optimal_shifts_L1(long N, double a, double d0) {
  require_steps(N);
  require_nonneg(a, "a");
  require_nonneg(d0, "d0");
  ShiftSolution out;
  out.schedule.eta.assign(N, 0.0);
  out.distances.assign(N, 0.0);
  out.distances[0] = d0;
  out.schedule.eta[N - 1] = 1.0;
  if (a == 0.0 && d0 == 0.0) return out;
  const double m = static_cast<double>(N - 1);
  const double top = m * a + d0;
  for (long n = 0; n + 1 < N; ++n) {
    const double den = n * a + static_cast<double>(N - n) * d0;
    out.schedule.eta[n] = (den > 0.0) ? std::min(1.0, top / den) : 1.0;
  }
  for (long n = 1; n < N; ++n) {
    out.distances[n] = std::max(a, (n * a + static_cast<double>(N - n) * d0) / static_cast<double>(N));
  }
  return out;
}

StepChoice single_step_opt(double d, double a, long M) {
  require_nonneg(d, "d");
  require_nonneg(a, "a");
  if (M < 1) throw DomainError("M must be >= 1");
  const double m = static_cast<double>(M);
  if (d == 0.0) return {1.0, m * a * a};
  const double eta = std::min(1.0, (d + m * a) / ((m + 1.0) * d));
  const double value = (d >= a) ? (d + m * a) * (d + m * a) / (m + 1.0) : d * d + m * a * a;
  return {eta, value};
}

namespace {

void require_contractive(double L) {
  if (!(L > 0.0 && L < 1.0)) throw DomainError("L must lie in (0,1); use the L = 1 forms otherwise");
}

}  // namespace

double optimal_value_Lgeneral(long N, double a, double d0, double L) {
  require_steps(N);
  require_contractive(L);
  require_nonneg(a, "a");
  require_nonneg(d0, "d0");
  d0 = std::max(d0, a);
  const double num = a * geometric_sum(L, N - 1) + d0 * std::pow(L, static_cast<double>(N - 1));
  return num * num / geometric_sum(L * L, N);
}

ShiftSolution optimal_shifts_Lgeneral(long N, double a, double d0, double L) {
  require_steps(N);
  require_contractive(L);
  require_nonneg(a, "a");
  require_nonneg(d0, "d0");
  d0 = std::max(d0, a);
  const long M = N - 1;
  ShiftSolution out;
  out.schedule.eta.assign(N, 0.0);
  out.distances.assign(N, 0.0);
  out.schedule.eta[M] = 1.0;
  out.distances[0] = d0;
  if (d0 == 0.0) return out;  // then a = 0 as well

  const double L2 = L * L;
  const double lead = a * geometric_sum(L, M) + d0 * std::pow(L, static_cast<double>(M));
  const double norm = geometric_sum(L2, M + 1);
  const double tail = std::pow(L, static_cast<double>(M + 2));
  for (long n = 0; n <= M; ++n) {
    const double spread = geometric_sum(L, M + 2 - n) - tail * geometric_sum(L, M - n);
    const double bn = d0 * std::pow(L, static_cast<double>(n)) * geometric_sum(L2, M + 1 - n) +
                      a * geometric_sum(L, n) * spread / (1.0 + L);
    if (n > 0) out.distances[n] = bn / norm;
    if (n < M) out.schedule.eta[n] = std::min(1.0, std::pow(L, static_cast<double>(M - n)) * lead / bn);
  }
  return out;
}

double final_bound_with_cross_reg(long N, double a, double d0, double L, double c, double c_prime, double b) {
  require_steps(N);
  if (!(L > 0.0 && L <= 1.0)) throw DomainError("L must lie in (0,1]");
  require_nonneg(a, "a");
  require_nonneg(d0, "d0");
  require_nonneg(c, "c");
  require_nonneg(c_prime, "c_prime");
  require_nonneg(b, "b");
  const double spread = geometric_sum(L * L, N);
  const double num = a * geometric_sum(L, N - 1) + d0 * std::pow(L, static_cast<double>(N - 1));
  return (c + (c_prime - c) / spread) * num * num / spread + b * b;
}

long three_phase_boundary(long N, double L) {
  if (!(L < 1.0)) return -1;
  long last = -1;
  for (long n = 0; n < N; ++n) {
    if (std::pow(L, -static_cast<double>(N - n)) >= 2.0) last = n;
  }
  return last;
}

ShiftSchedule three_phase_schedule(long N, double L, double a0, double a1) {
  require_steps(N);
  if (!(L >= 0.5 && L <= 2.0)) throw DomainError("three_phase_schedule: L must lie in [1/2, 2]");
  require_nonneg(a0, "a0");
  require_nonneg(a1, "a1");
  ShiftSchedule s;
  s.eta.assign(N, 1.0);
  if (L <= 1.0) {
    const long nstar = three_phase_boundary(N, L);
    for (long n = 0; n + 1 < N; ++n) {
      const long k = N - n;
      s.eta[n] = (n <= nstar) ? 1.0 / geometric_sum(1.0 / L, k) : 1.0 / static_cast<double>(k);
    }
  } else {
    const double switch_at = 2.0 * L / (L - 1.0);
    for (long n = 0; n + 1 < N; ++n) {
      const double k = static_cast<double>(N - n);
      if (k <= switch_at) {
        const double r = (k - 1.0) / k;
        s.eta[n] = 1.0 - r * r / L;
      } else {
        s.eta[n] = 1.0 - 1.0 / (L * L);
      }
    }
  }
  for (double& e : s.eta) e = std::clamp(e, 0.0, 1.0);
  s.eta[N - 1] = 1.0;
  return s;
}

}  // namespace shiftkl
