#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shiftkl/errors.hpp"
#include "shiftkl/schemes.hpp"

namespace shiftkl {

namespace {

void check_params(Setting setting, const PlanParams& p, double constant) {
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) throw DomainError("plan: beta must be finite and > 0");
  if (!(p.d >= 1.0) || !std::isfinite(p.d)) throw DomainError("plan: d must be >= 1");
  if (!(p.eps > 0.0) || !std::isfinite(p.eps)) throw DomainError("plan: eps must be finite and > 0");
  if (!(p.zeta0 >= 0.0) || !(p.zeta1 >= 0.0)) throw DomainError("plan: zeta0 and zeta1 must be >= 0");
  if (!(constant > 0.0) || !std::isfinite(constant)) throw DomainError("plan: constant must be finite and > 0");
  if (setting != Setting::WLC && !(p.alpha > 0.0)) {
    throw DomainError(std::string("plan: setting ") + to_string(setting) + " needs alpha > 0");
  }
  if (p.alpha > p.beta) throw DomainError("plan: alpha must not exceed beta");
}

void require_eps_at_most(double eps, double limit, const char* text) {
  if (eps > limit) {
    std::ostringstream os;
    os << "plan: eps = " << eps << " outside the admissible range eps <= " << text << " = " << limit;
    throw DomainError(os.str());
  }
}

double start_distance(const PlanParams& p) {
  if (p.W) {
    if (!(*p.W >= 0.0) || !std::isfinite(*p.W)) throw DomainError("plan: W must be finite and >= 0");
    return *p.W;
  }
  if (p.alpha > 0.0) return std::sqrt(p.d / p.alpha);
  throw DomainError("plan: W is required when alpha = 0");
}

double ceil_log(double x) { return std::max(1.0, std::ceil(std::log(x))); }

}  // namespace

PlanResult plan_iterations(Setting setting, PlanScheme scheme, const PlanParams& p, double constant) {
  check_params(setting, p, constant);
  const double a = p.alpha, b = p.beta, d = p.d, e = p.eps;
  const double z0 = p.zeta0, z1 = p.zeta1;
  const double k = (a > 0.0) ? b / a : std::numeric_limits<double>::infinity();
  const double sd = std::sqrt(d);
  const double dlog = std::log(d / (e * e));
  PlanResult r;
  r.setting = setting;
  r.scheme = scheme;
  r.constant = constant;
  double h = 0.0;
  double rate = 0.0;
  double polylog = ceil_log(d / (e * e));

  if (setting == Setting::WLC) {
    const double W = start_distance(p);
    std::ostringstream os;
    os << "W2(mu0, pi) = " << W;
    r.assumptions_echo = os.str();
    switch (scheme) {
      case PlanScheme::LMC:
        h = e * e * e * e / (b * b * d * W * W);
        rate = b * b * d * std::pow(W, 4) / std::pow(e, 6);
        break;
      case PlanScheme::LMC_SMOOTH: {
        const double b1 = b + z1;
        h = e * e / std::max({z0 * W, b1 * b * W * W, b1 * std::sqrt(b * d * W * W)});
        rate = (z0 + b1 * (b * W + std::sqrt(b * d))) * std::pow(W, 3) / std::pow(e, 4);
        break;
      }
      case PlanScheme::RMLMC:
        h = std::pow(e, 4.0 / 3.0) / (std::pow(b, 4.0 / 3.0) * std::cbrt(d) * std::pow(W, 2.0 / 3.0));
        rate = std::pow(b, 4.0 / 3.0) * std::cbrt(d) * std::pow(W, 8.0 / 3.0) / std::pow(e, 10.0 / 3.0);
        break;
    }
  } else if (setting == Setting::SLC) {
    r.assumptions_echo = "W2(mu0, pi) <= sqrt(d/alpha)";
    const double kb0 = z0 / std::pow(a, 1.5);
    const double kb1 = z1 / a;
    switch (scheme) {
      case PlanScheme::LMC:
        require_eps_at_most(e, sd, "sqrt(d)");
        h = e * e / (b * k * d);
        rate = k * k * d / (e * e);
        polylog = dlog;
        break;
      case PlanScheme::LMC_SMOOTH: {
        require_eps_at_most(e, std::sqrt(d / k), "sqrt(d/kappa)");
        const double first = (kb0 > 0.0) ? k / kb0 : std::numeric_limits<double>::infinity();
        // log factor floored at 1 so the root stays real
        const double lg = std::max(1.0, std::log((k + kb1) * d / (e * e)));
        const double second = 1.0 / std::sqrt((1.0 + z1 / b) * (k + kb1) * k * d * lg);
        h = (e / b) * std::min(first, second);
        rate = (kb0 + (k * k + k * kb1) * sd) / e;
        break;
      }
      case PlanScheme::RMLMC:
        require_eps_at_most(e, sd / k, "sqrt(d)/kappa");
        h = e / (b * sd);
        rate = k * sd / e;
        break;
    }
  } else {
    r.assumptions_echo = p.chi2_init ? "log chi2(mu0 || pi) = " + std::to_string(*p.chi2_init) + ", O~(d) required"
                                     : "log chi2(mu0 || pi) = O~(d)";
    const double kb0 = z0 / std::pow(a, 1.5);
    const double kb1 = z1 / a;
    switch (scheme) {
      case PlanScheme::LMC:
        require_eps_at_most(e, sd, "sqrt(d)");
        h = e * e / (b * k * d);
        rate = k * k * d / (e * e);
        polylog = dlog;
        break;
      case PlanScheme::LMC_SMOOTH:
        require_eps_at_most(e, sd, "sqrt(d)");
        h = e / std::max((b + z1) * std::sqrt(k * d), z0 / std::sqrt(a));
        rate = (kb0 + (std::pow(k, 1.5) + std::sqrt(k) * kb1) * sd) / e;
        break;
      case PlanScheme::RMLMC:
        require_eps_at_most(e, sd, "sqrt(d)");
        h = e / (b * std::sqrt(k) * sd);
        rate = std::pow(k, 1.5) * sd / e;
        break;
    }
  }
  polylog = std::max(polylog, 1.0);
  if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(rate)) throw DomainError("plan: parameters give no finite step");
  r.h = constant * h;
  r.rate_term = rate;
  r.polylog = polylog;
  r.N = std::max<long>(1, static_cast<long>(std::ceil(constant * rate * polylog - 1e-9)));
  return r;
}

}  // namespace shiftkl
