#include "shiftkl/schemes.hpp"

#include <cmath>
#include <string>

#include "shiftkl/errors.hpp"
#include "shiftkl/numeric.hpp"

namespace shiftkl {

namespace {

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be finite and >= 0");
}

void check_common(double beta, double d, double h, double grad_norm, double constant) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and > 0");
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("h must be finite and > 0");
  require_nonneg(d, "d");
  require_nonneg(grad_norm, "grad_norm");
  require_nonneg(constant, "constant");
}

void require_small_step(double beta, double h, const char* who) {
  if (h * beta > 1.0) {
    throw PreconditionError(std::string(who) + ": needs h <= 1/beta, got h*beta = " + std::to_string(h * beta));
  }
}

double cross_b(double beta, double d, double h, double grad_norm, double constant) {
  const double bh = beta * h;
  return std::sqrt(constant * (bh * bh * h * grad_norm * grad_norm + bh * bh * d));
}

}  // namespace

KernelParams langevin_kernel_params(double alpha, double beta, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("langevin_kernel_params: h must be finite and > 0");
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha > beta) {
    throw DomainError("langevin_kernel_params: need finite alpha <= beta");
  }
  KernelParams p;
  p.L = std::exp(-alpha * h);
  p.gamma = beta * h * expm1_ratio(-alpha * h);
  p.c = 1.0 / (4.0 * h * expm1_ratio(2.0 * alpha * h));
  return p;
}

LocalErrorLevels lmc_local_errors(double beta, double d, double h, double grad_norm, double constant) {
  check_common(beta, d, h, grad_norm, constant);
  require_small_step(beta, h, "lmc_local_errors");
  LocalErrorLevels e;
  e.e_strong = constant * (beta * h * h * grad_norm + beta * std::sqrt(d) * std::pow(h, 1.5));
  e.e_weak = e.e_strong;
  return e;
}

CrossRegularity lmc_cross_reg(double beta, double d, double h, double grad_norm, double constant) {
  check_common(beta, d, h, grad_norm, constant);
  require_small_step(beta, h, "lmc_cross_reg");
  return {constant / h, cross_b(beta, d, h, grad_norm, constant)};
}

double lmc_smooth_weak_error(double beta, double zeta0, double zeta1, double d, double h, double grad_norm,
                             double constant) {
  check_common(beta, d, h, grad_norm, constant);
  require_nonneg(zeta0, "zeta0");
  require_nonneg(zeta1, "zeta1");
  require_small_step(beta, h, "lmc_smooth_weak_error");
  const double b1 = beta + zeta1;
  return constant * (b1 * h * h * grad_norm + b1 * beta * std::sqrt(d) * std::pow(h, 2.5) + zeta0 * h * h);
}

LocalErrorLevels rmlmc_local_errors(double beta, double d, double h, double grad_norm, double constant) {
  check_common(beta, d, h, grad_norm, constant);
  require_small_step(beta, h, "rmlmc_local_errors");
  LocalErrorLevels e;
  e.e_weak = constant * (beta * beta * std::pow(h, 3) * grad_norm + beta * beta * std::sqrt(d) * std::pow(h, 2.5));
  e.e_strong = constant * (beta * h * h * grad_norm + beta * std::sqrt(d) * std::pow(h, 1.5));
  return e;
}

CrossRegularity rmlmc_cross_reg(double beta, double d, double h, double grad_norm, double constant) {
  check_common(beta, d, h, grad_norm, constant);
  if (!(h * beta < 1.0)) throw DomainError("rmlmc_cross_reg: needs h < 1/beta strictly");
  return {constant * std::log(1.0 / (beta * h)) / h, cross_b(beta, d, h, grad_norm, constant)};
}

const char* to_string(PlanScheme s) {
  switch (s) {
    case PlanScheme::LMC: return "lmc";
    case PlanScheme::LMC_SMOOTH: return "lmc-smooth";
    case PlanScheme::RMLMC: return "rmlmc";
  }
  return "?";
}

const char* to_string(Setting s) {
  switch (s) {
    case Setting::SLC: return "slc";
    case Setting::WLC: return "wlc";
    case Setting::LSI: return "lsi";
  }
  return "?";
}

PlanScheme plan_scheme_from_string(const std::string& name) {
  if (name == "lmc") return PlanScheme::LMC;
  if (name == "lmc-smooth" || name == "lmc_smooth") return PlanScheme::LMC_SMOOTH;
  if (name == "rmlmc") return PlanScheme::RMLMC;
  throw InputError("unknown scheme '" + name + "' (expected lmc, lmc-smooth or rmlmc)");
}

Setting setting_from_string(const std::string& name) {
  if (name == "slc") return Setting::SLC;
  if (name == "wlc") return Setting::WLC;
  if (name == "lsi") return Setting::LSI;
  throw InputError("unknown setting '" + name + "' (expected slc, wlc or lsi)");
}

KernelAssumptions SchemeCoefficients::assumptions(double h, double grad_norm, double d) const {
  KernelAssumptions k;
  k.L = L;
  k.gamma = gamma;
  k.c = c;
  k.c_prime = c_prime_fn(h);
  k.b_bar = b_fn(h, grad_norm, d);
  k.e_weak = e_weak_fn(h, grad_norm, d);
  k.e_strong = e_strong_fn(h, grad_norm, d);
  k.a = k.e_strong;
  k.implied_constant = constant;
  return k;
}

SchemeCoefficients scheme_coefficients(PlanScheme scheme, double alpha, double beta, double h, double constant,
                                       double zeta0, double zeta1) {
  const KernelParams kp = langevin_kernel_params(alpha, beta, h);
  SchemeCoefficients sc;
  sc.L = kp.L;
  sc.gamma = kp.gamma;
  sc.c = kp.c;
  sc.constant = constant;
  sc.b_fn = [beta, constant](double step, double g, double d) { return lmc_cross_reg(beta, d, step, g, constant).b; };
  sc.e_strong_fn = [beta, constant](double step, double g, double d) {
    return lmc_local_errors(beta, d, step, g, constant).e_strong;
  };
  switch (scheme) {
    case PlanScheme::LMC:
      sc.c_prime_fn = [constant](double step) { return constant / step; };
      sc.e_weak_fn = sc.e_strong_fn;
      break;
    case PlanScheme::LMC_SMOOTH:
      sc.c_prime_fn = [constant](double step) { return constant / step; };
      sc.e_weak_fn = [=](double step, double g, double d) {
        return lmc_smooth_weak_error(beta, zeta0, zeta1, d, step, g, constant);
      };
      break;
    case PlanScheme::RMLMC:
      sc.c_prime_fn = [beta, constant](double step) { return rmlmc_cross_reg(beta, 0.0, step, 0.0, constant).c_prime; };
      sc.e_weak_fn = [beta, constant](double step, double g, double d) {
        return rmlmc_local_errors(beta, d, step, g, constant).e_weak;
      };
      break;
  }
  return sc;
}

double gradient_bound(double beta, double d, double w2_to_pi, double kl_to_pi, double constant) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("gradient_bound: beta must be finite and > 0");
  require_nonneg(d, "d");
  require_nonneg(constant, "constant");
  if (!(w2_to_pi >= 0.0) || !(kl_to_pi >= 0.0)) throw DomainError("gradient_bound: distances must be >= 0");
  const double via_w2 = beta * beta * w2_to_pi * w2_to_pi;
  const double via_kl = beta * kl_to_pi;
  return constant * (beta * d + std::min(via_w2, via_kl));
}

double recursive_gradient_control(double A2, double B2, double C2, double D2, long n0, double beta, double d, long N) {
  require_nonneg(A2, "A2");
  require_nonneg(B2, "B2");
  require_nonneg(C2, "C2");
  require_nonneg(D2, "D2");
  require_nonneg(d, "d");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("recursive_gradient_control: beta must be > 0");
  if (n0 < 0 || N < 0) throw DomainError("recursive_gradient_control: n0 and N must be >= 0");
  // G^2 <= 2 (beta d + distance term); the feedback part is moved to the left side.
  double phase1 = 0.0;
  if (n0 > 0) {
    const double a_beta = std::sqrt(A2) * beta;
    if (!(a_beta < 0.5)) throw DomainError("absorption fails: A*beta = " + std::to_string(a_beta) + " >= 1/2");
    phase1 = 2.0 * (beta * d + beta * beta * B2) / (1.0 - 2.0 * a_beta * a_beta);
    if (N <= n0) return phase1;
  }
  const double c_beta = C2 * beta;
  if (!(c_beta < 0.5)) throw DomainError("absorption fails: C^2*beta = " + std::to_string(c_beta) + " >= 1/2");
  return 2.0 * (phase1 + beta * d + beta * D2) / (1.0 - 2.0 * c_beta);
}

}  // namespace shiftkl
