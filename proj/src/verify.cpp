#include "shiftkl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "shiftkl/chains.hpp"
#include "shiftkl/errors.hpp"
#include "shiftkl/gauss.hpp"
#include "shiftkl/numeric.hpp"

namespace shiftkl {

namespace {

std::string label(std::initializer_list<std::pair<const char*, double>> parts, const char* head) {
  std::ostringstream os;
  os << head;
  for (const auto& [k, v] : parts) os << ' ' << k << '=' << v;
  return os.str();
}

Check upper_bound_check(std::string name, double bound, double exact) {
  // bound must dominate exact up to rounding
  const double slack = 1e-12 * std::max(1.0, std::abs(exact));
  return {std::move(name), bound, exact, slack, bound + slack >= exact};
}

Check close_check(std::string name, double observed, double reference, double rel_tol) {
  const double tol = rel_tol * std::max(1.0, std::abs(reference));
  return {std::move(name), observed, reference, tol, std::abs(observed - reference) <= tol};
}

Check abs_check(std::string name, double observed, double reference, double tol) {
  return {std::move(name), observed, reference, tol, std::abs(observed - reference) <= tol};
}

PotentialSpec unit_quadratic() {
  return PotentialSpec::quadratic_potential(Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1));
}

void toy_suite(SuiteReport& r) {
  for (double w : {0.0, 0.1, 1.0}) {
    for (double sigma : {0.5, 1.0, 2.0}) {
      const KernelAssumptions simple = toy_simple_assumptions(w, sigma);
      const KernelAssumptions cert = toy_certified_assumptions(w, sigma);
      for (long N = 1; N <= 100; ++N) {
        const double exact = toy_exact_kl(N, w, sigma);
        r.checks.push_back(upper_bound_check(label({{"N", double(N)}, {"w", w}, {"sigma", sigma}}, "simple"),
                                             kl_simple_bound(simple, N, 0.0).value, exact));
        r.checks.push_back(upper_bound_check(label({{"N", double(N)}, {"w", w}, {"sigma", sigma}}, "certified"),
                                             kl_framework_bound(cert, N, 0.0, BoundMode::Certified).value, exact));
      }
    }
  }
  r.checks.push_back(abs_check("spot exact N=4 w=0.1 sigma=1", toy_exact_kl(4, 0.1, 1.0), 0.173426, 5e-7));
  r.checks.push_back(abs_check("spot simple N=4 w=0.1 sigma=1",
                               kl_simple_bound(toy_simple_assumptions(0.1, 1.0), 4, 0.0).value, 0.571979, 1e-4));
}

void shifts_suite(SuiteReport& r, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<long> pick_n(1, 20);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const long N = pick_n(gen);
    const bool contractive = unit(gen) < 0.5;
    const double L = contractive ? 0.5 + 0.49 * unit(gen) : 1.0;
    const double a = 10.0 * unit(gen);
    double d0 = 10.0 * unit(gen);
    if (contractive) d0 = std::max(d0, a);  // the L < 1 closed form is stated for d0 >= a
    ShiftProblem pb;
    pb.N = N;
    pb.L = L;
    pb.d0 = d0;
    pb.error = SimpleError{a};
    const double closed = contractive ? optimal_value_Lgeneral(N, a, d0, L) : optimal_value_L1(N, a, d0);
    const OracleResult oracle = dp_oracle(pb);
    const std::string tag = label({{"N", double(N)}, {"L", L}, {"a", a}, {"d0", d0}}, "");
    const double rel = std::abs(closed - oracle.value) / std::max(std::abs(oracle.value), 1e-300);
    r.checks.push_back({"oracle" + tag, closed, oracle.value, 1e-6, rel <= 1e-6 || closed == oracle.value});
    const ShiftSolution sol = contractive ? optimal_shifts_Lgeneral(N, a, d0, L) : optimal_shifts_L1(N, a, d0);
    r.checks.push_back(close_check("schedule" + tag, evaluate_schedule(pb, sol.schedule).total, closed, 1e-10));
  }
  r.checks.push_back(close_check("golden L1 N=2 a=1 d0=2", optimal_value_L1(2, 1.0, 2.0), 4.5, 1e-12));
  r.checks.push_back(close_check("golden L1 N=3 a=1 d0=0.5", optimal_value_L1(3, 1.0, 0.5), 2.25, 1e-12));
  r.checks.push_back(close_check("golden L=0.5 N=2 a=0 d0=1", optimal_value_Lgeneral(2, 0.0, 1.0, 0.5), 0.2, 1e-12));
  r.checks.push_back(close_check("golden L=0.5 N=2 a=1 d0=1", optimal_value_Lgeneral(2, 1.0, 1.0, 0.5), 1.8, 1e-12));
}

void gaussian_lmc_suite(SuiteReport& r) {
  for (double h : {0.2, 0.1, 0.05}) {
    for (long N : {10L, 100L}) {
      for (double x0 : {0.0, 1.0, 4.0}) {
        const GaussianLmcCertificate cert = gaussian_lmc_certificate(h, N, x0);
        r.checks.push_back(upper_bound_check(label({{"h", h}, {"N", double(N)}, {"x0", x0}}, "certified"),
                                             cert.bound.value, cert.exact_kl));
      }
    }
  }
}

void local_error_suite(SuiteReport& r, std::uint64_t seed) {
  const PotentialSpec pot = unit_quadratic();
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    for (double x : {0.0, 1.0, 4.0}) {
      const Eigen::VectorXd v = Eigen::VectorXd::Constant(1, x);
      const LocalErrorEstimate e = estimate_local_errors(pot, Scheme::LMC, v, h, 0, seed);
      const double ref = std::abs(std::exp(-h) - (1.0 - h)) * std::abs(x);
      r.checks.push_back(abs_check(label({{"h", h}, {"x", x}}, "lmc weak exact"), e.weak, ref, 1e-12));
      for (Scheme s : {Scheme::LMC, Scheme::RMLMC}) {
        const LocalErrorEstimate f = estimate_local_errors(pot, s, v, h, 0, seed);
        r.checks.push_back({label({{"h", h}, {"x", x}}, (std::string(to_string(s)) + " weak<=strong").c_str()),
                            f.weak, f.strong, 0.0, f.weak <= f.strong});
      }
    }
  }
  r.checks.push_back(abs_check("lmc weak spot h=0.1 x=1",
                               estimate_local_errors(pot, Scheme::LMC, Eigen::VectorXd::Ones(1), 0.1, 0, seed).weak,
                               0.004837, 5e-7));
  // Monte Carlo path against the exact values
  LocalErrorOptions mc;
  mc.force_monte_carlo = true;
  mc.inner_steps = 256;
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 4.0);
  for (Scheme s : {Scheme::LMC, Scheme::RMLMC}) {
    const LocalErrorEstimate ex = estimate_local_errors(pot, s, x, 0.2, 0, seed);
    const LocalErrorEstimate est = estimate_local_errors(pot, s, x, 0.2, 20000, seed, mc);
    const std::string name = std::string(to_string(s)) + " mc h=0.2 x=4";
    // inner Euler grid adds an O(h/K) bias on top of sampling noise
    const double weak_tol = 4.0 * est.weak_stderr + 2e-3 * ex.strong;
    const double strong_tol = 4.0 * est.strong_stderr + 2e-2 * ex.strong;
    r.checks.push_back(abs_check(name + " weak", est.weak, ex.weak, weak_tol));
    r.checks.push_back(abs_check(name + " strong", est.strong, ex.strong, strong_tol));
  }
}

void slopes_suite(SuiteReport& r, std::uint64_t seed) {
  const PotentialSpec pot = unit_quadratic();
  const std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  for (Scheme s : {Scheme::LMC, Scheme::RMLMC}) {
    std::vector<double> weak, strong;
    for (double h : hs) {
      const LocalErrorEstimate e = estimate_local_errors(pot, s, x, h, 0, seed);
      weak.push_back(e.weak);
      strong.push_back(e.strong);
    }
    const std::string name = to_string(s);
    r.checks.push_back(abs_check(name + " weak slope", loglog_slope(hs, weak), s == Scheme::LMC ? 2.0 : 3.0, 0.3));
    r.checks.push_back(abs_check(name + " strong slope", loglog_slope(hs, strong), 2.0, 0.3));
  }
}

}  // namespace

bool SuiteReport::all_passed() const { return failures() == 0; }

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"toy", "shifts", "gaussian-lmc", "local-errors", "slopes"};
  return names;
}

SuiteReport run_verify_suite(const std::string& suite, std::uint64_t seed) {
  SuiteReport r;
  r.suite = suite;
  if (suite == "toy") {
    toy_suite(r);
  } else if (suite == "shifts") {
    shifts_suite(r, seed);
  } else if (suite == "gaussian-lmc") {
    gaussian_lmc_suite(r);
  } else if (suite == "local-errors") {
    local_error_suite(r, seed);
  } else if (suite == "slopes") {
    slopes_suite(r, seed);
  } else {
    throw InputError("unknown suite '" + suite + "'");
  }
  return r;
}

KernelAssumptions toy_simple_assumptions(double w, double sigma) {
  if (!std::isfinite(w) || !(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("toy constants need finite w and sigma > 0");
  }
  const double spread = sqrt1p_minus_one(sigma * sigma);
  KernelAssumptions k;
  k.L = 1.0;
  k.c = 1.0;
  k.c_prime = 1.0;
  k.a = std::hypot(w, spread);
  k.b_bar = std::sqrt(w * w + 0.5 * x_minus_log1p(sigma * sigma));
  k.e_weak = std::abs(w);
  k.e_strong = k.a;
  return k;
}

KernelAssumptions toy_certified_assumptions(double w, double sigma) {
  KernelAssumptions k = toy_simple_assumptions(w, sigma);
  k.gamma = 0.0;
  return k;
}

GaussianLmcCertificate gaussian_lmc_certificate(double h, long N, double x0) {
  if (!(h > 0.0) || !(h < 1.0)) throw DomainError("gaussian_lmc_certificate: need 0 < h < 1");
  if (N < 1) throw DomainError("gaussian_lmc_certificate: N must be >= 1");
  const PotentialSpec pot = unit_quadratic();
  const Gaussian start = Gaussian::point_mass(Eigen::VectorXd::Constant(1, x0));
  const Gaussian target = Gaussian::scalar(0.0, 1.0);

  // largest second moment along the chain before the last step
  double m2 = 0.0;
  Gaussian law = start;
  for (long n = 0; n < N; ++n) {
    m2 = std::max(m2, law.mean()(0) * law.mean()(0) + law.cov()(0, 0));
    law = propagate_law(pot, law, Scheme::LMC, h, 1);
  }

  const double gap = -(std::expm1(-h) + h);  // 1 - h - e^{-h}
  const double var2 = -std::expm1(-2.0 * h);
  const double ratio = 2.0 * h / var2;
  const double noise2 = 2.0 * (h + 2.0 * std::expm1(-h) - 0.5 * std::expm1(-2.0 * h));

  GaussianLmcCertificate out;
  KernelAssumptions& k = out.assumptions;
  k.L = std::exp(-h);
  k.gamma = -std::expm1(-h);
  k.c = 0.5 / std::expm1(2.0 * h);
  k.c_prime = 2.0 * k.c;
  k.b_bar = std::sqrt(0.5 * x_minus_log1p(ratio - 1.0) + gap * gap * m2 / var2);
  k.e_weak = std::abs(gap) * std::sqrt(m2);
  k.e_strong = std::sqrt(gap * gap * m2 + std::max(noise2, 0.0));
  k.a = k.e_strong;
  out.w2_init = std::sqrt(x0 * x0 + 1.0);
  out.bound = kl_framework_bound(k, N, out.w2_init, BoundMode::Certified);
  out.exact_kl = kl_gaussian(law, target);
  return out;
}

}  // namespace shiftkl
