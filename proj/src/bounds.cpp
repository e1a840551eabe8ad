#include "shiftkl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shiftkl/errors.hpp"
#include "shiftkl/numeric.hpp"

namespace shiftkl {

namespace {

void require_level(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be finite and >= 0");
}

}  // namespace

void KernelAssumptions::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("L must be finite and > 0");
  require_level(gamma, "gamma");
  require_level(c, "c");
  require_level(c_prime, "c_prime");
  require_level(b_bar, "b_bar");
  require_level(e_weak, "e_weak");
  require_level(e_strong, "e_strong");
  require_level(a, "a");
  require_level(implied_constant, "implied_constant");
}

double KernelAssumptions::effective_horizon(long N) const {
  const double n = static_cast<double>(N);
  if (L >= 1.0) return n;
  return std::min(n, 1.0 / (1.0 - L));
}

const char* to_string(BoundMode mode) { return mode == BoundMode::Certified ? "certified" : "closed_form"; }

BoundReport w2_framework_bound(const KernelAssumptions& k, long N, double w2_init) {
  k.validate();
  if (N < 1) throw DomainError("N must be >= 1");
  require_level(w2_init, "w2_init");
  const double n = static_cast<double>(N);
  const double drift = k.e_weak + k.gamma * k.e_strong;
  const double w2 = w2_init * w2_init;
  double v;
  if (k.L <= 1.0) {
    const double nb = k.effective_horizon(N);
    v = std::pow(k.L, n) * w2 + nb * nb * drift * drift + nb * k.e_strong * k.e_strong;
  } else {
    const double gap = k.L - 1.0;
    v = std::pow(k.L, 3.0 * n) * (w2 + drift * drift / (gap * gap) + k.e_strong * k.e_strong / gap);
  }
  BoundReport r;
  r.value = k.implied_constant * v;
  r.constant_used = k.implied_constant;
  return r;
}

BoundReport kl_simple_bound(const KernelAssumptions& k, long N, double w2_init) {
  k.validate();
  if (!(k.L <= 1.0)) throw DomainError("kl_simple_bound requires L <= 1");
  require_level(w2_init, "w2_init");
  BoundReport r;
  r.value = final_bound_with_cross_reg(N, k.a, w2_init, k.L, k.c, k.c_prime, k.b_bar);
  r.constant_used = 1.0;
  return r;
}

BoundReport kl_framework_bound(const KernelAssumptions& k, long N, double w2_init, BoundMode mode) {
  k.validate();
  if (N < 1) throw DomainError("N must be >= 1");
  require_level(w2_init, "w2_init");
  const double a1 = k.e_weak + k.gamma * k.e_strong;
  const double a0 = k.e_strong;
  BoundReport r;
  r.mode = mode;
  if (mode == BoundMode::ClosedForm) {
    const double n = static_cast<double>(N);
    const double nb = k.effective_horizon(N);
    // (L^{-1} - 1) / (L^{-N} - 1), equal to 1/N at L = 1
    const double contraction = 1.0 / geometric_sum(1.0 / k.L, N);
    const double log_term = std::max((k.L - 1.0) * n, std::log(nb));
    const double bracket = contraction * w2_init * w2_init + log_term * a0 * a0 + nb * a1 * a1;
    r.value = k.implied_constant * ((k.c + k.c_prime) * bracket + k.b_bar * k.b_bar);
    r.constant_used = k.implied_constant;
    return r;
  }
  if (!(k.L >= 0.5 && k.L <= 2.0)) throw DomainError("certified mode requires 1/2 <= L <= 2");
  ShiftProblem pb;
  pb.N = N;
  pb.L = k.L;
  pb.d0 = w2_init;
  pb.error = WeakAwareError{a0, a1};
  pb.c = k.c;
  pb.c_prime = k.c_prime;
  pb.b = 0.0;
  ShiftSchedule s = three_phase_schedule(N, k.L, a0, a1);
  ObjectiveTrace tr = evaluate_schedule(pb, s);
  r.value = tr.total + k.b_bar * k.b_bar;
  r.schedule = std::move(s);
  r.trace = std::move(tr);
  r.constant_used = 1.0;
  return r;
}

BoundReport renyi_simple_bound(double order, const KernelAssumptions& k, long N, double winf_init) {
  if (!(order >= 1.0)) throw InputError("renyi_simple_bound: order must be >= 1");
  return kl_simple_bound(k, N, winf_init);
}

KernelAssumptions last_step_substitution(const KernelAssumptions& k, const LastStepKernel& last) {
  KernelAssumptions out = k;
  out.c_prime = last.c_prime;
  out.b_bar = last.b_bar;
  return out;
}

}  // namespace shiftkl
