#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "shiftkl/bounds.hpp"

namespace shiftkl {

struct KernelParams {
  double L = 1.0;
  double gamma = 0.0;
  double c = 0.0;
};

// Exact contraction, gradient-coupling and reverse-transport constants of the
// diffusion over time h under alpha I <= Hessian <= beta I.
KernelParams langevin_kernel_params(double alpha, double beta, double h);

struct LocalErrorLevels {
  double e_weak = 0.0;
  double e_strong = 0.0;
};

struct CrossRegularity {
  double c_prime = 0.0;
  double b = 0.0;
};

LocalErrorLevels lmc_local_errors(double beta, double d, double h, double grad_norm, double constant = 1.0);
CrossRegularity lmc_cross_reg(double beta, double d, double h, double grad_norm, double constant = 1.0);
double lmc_smooth_weak_error(double beta, double zeta0, double zeta1, double d, double h, double grad_norm,
                             double constant = 1.0);
LocalErrorLevels rmlmc_local_errors(double beta, double d, double h, double grad_norm, double constant = 1.0);
CrossRegularity rmlmc_cross_reg(double beta, double d, double h, double grad_norm, double constant = 1.0);

enum class PlanScheme { LMC, LMC_SMOOTH, RMLMC };
enum class Setting { SLC, WLC, LSI };

const char* to_string(PlanScheme s);
const char* to_string(Setting s);
PlanScheme plan_scheme_from_string(const std::string& name);
Setting setting_from_string(const std::string& name);

// Per-scheme coefficient bundle. Level maps take (h, grad_norm, d).
struct SchemeCoefficients {
  double L = 1.0;
  double gamma = 0.0;
  double c = 0.0;
  std::function<double(double)> c_prime_fn;
  std::function<double(double, double, double)> b_fn;
  std::function<double(double, double, double)> e_weak_fn;
  std::function<double(double, double, double)> e_strong_fn;
  double constant = 1.0;

  // Plugs one (grad_norm, d) surrogate into the bundle at step h.
  KernelAssumptions assumptions(double h, double grad_norm, double d) const;
};

SchemeCoefficients scheme_coefficients(PlanScheme scheme, double alpha, double beta, double h, double constant = 1.0,
                                       double zeta0 = 0.0, double zeta1 = 0.0);

// constant * (beta d + min(beta^2 w2^2, beta kl)); pass +inf for a distance that is not known.
double gradient_bound(double beta, double d, double w2_to_pi, double kl_to_pi, double constant = 1.0);

// Fixed-point bound on G_N^2. A2, B2 feed the W2 phase (n <= n0), C2, D2 the KL phase.
double recursive_gradient_control(double A2, double B2, double C2, double D2, long n0, double beta, double d, long N);

struct PlanParams {
  double alpha = 0.0;
  double beta = 1.0;
  double zeta0 = 0.0;
  double zeta1 = 0.0;
  double d = 1.0;
  double eps = 0.1;
  std::optional<double> W;          // W2 distance of the start to the target
  std::optional<double> chi2_init;  // log chi^2 of the start, echoed only
};

struct PlanResult {
  double h = 0.0;
  long N = 1;
  Setting setting = Setting::SLC;
  PlanScheme scheme = PlanScheme::LMC;
  double rate_term = 0.0;  // N before the log factor and rounding
  double polylog = 1.0;
  double constant = 1.0;
  std::string assumptions_echo;
};

PlanResult plan_iterations(Setting setting, PlanScheme scheme, const PlanParams& params, double constant = 1.0);

}  // namespace shiftkl
