#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "shiftkl/chains.hpp"
#include "shiftkl/errors.hpp"

namespace shiftkl {

namespace {

using Quad = boost::math::quadrature::gauss<double, 30>;

// Mean-gap coefficient per eigenvalue, s = h * lambda.
double lmc_mean_gap(double s) { return -(std::expm1(-s) + s); }
double rmlmc_mean_gap(double s) { return -(std::expm1(-s) + s - 0.5 * s * s); }

// Per-eigenvalue second moment of the stochastic part of (scheme - diffusion).
double lmc_noise_moment(double lambda, double h) {
  auto g2 = [&](double t) {
    const double g = -std::expm1(-(h - t) * lambda);
    return g * g;
  };
  return 2.0 * Quad::integrate(g2, 0.0, h);
}

double rmlmc_noise_moment(double lambda, double h) {
  const double s = h * lambda;
  // E_u int_0^h (g(t) - s 1{t < uh})^2 dt with g(t) = 1 - e^{-(h-t) lambda}
  auto g2 = [&](double t) {
    const double g = -std::expm1(-(h - t) * lambda);
    return g * g;
  };
  auto g_weighted = [&](double t) { return -std::expm1(-(h - t) * lambda) * (1.0 - t / h); };
  const double v = Quad::integrate(g2, 0.0, h) - 2.0 * s * Quad::integrate(g_weighted, 0.0, h) + 0.5 * s * s * h;
  return 2.0 * std::max(v, 0.0);
}

LocalErrorEstimate exact_quadratic(const QuadraticTag& q, Scheme scheme, const Eigen::VectorXd& x, double h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (q.precision + q.precision.transpose()));
  const Eigen::VectorXd z = es.eigenvectors().transpose() * (x - q.mode);
  double weak2 = 0.0, strong2 = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double lam = es.eigenvalues()(i);
    const double s = h * lam;
    if (scheme == Scheme::LMC) {
      const double m = lmc_mean_gap(s) * z(i);
      weak2 += m * m;
      strong2 += m * m + lmc_noise_moment(lam, h);
    } else {
      const double m = rmlmc_mean_gap(s) * z(i);
      weak2 += m * m;
      // E_u (c0 + u c1)^2 z^2 with c0 = 1 - s - e^{-s}, c1 = s^2
      const double c0 = lmc_mean_gap(s), c1 = s * s;
      strong2 += (c0 * c0 + c0 * c1 + c1 * c1 / 3.0) * z(i) * z(i) + rmlmc_noise_moment(lam, h);
    }
  }
  LocalErrorEstimate est;
  est.weak = std::sqrt(weak2);
  est.strong = std::sqrt(strong2);
  est.exact = true;
  return est;
}

LocalErrorEstimate monte_carlo(const PotentialSpec& pot, Scheme scheme, const Eigen::VectorXd& x, double h,
                               long samples, std::uint64_t seed, long inner) {
  const Eigen::Index d = pot.dimension;
  const double dt = h / static_cast<double>(inner);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(d);
  double sum_n2 = 0.0, sum_n4 = 0.0;
  const Eigen::VectorXd gx = pot.grad(x);
  for (long i = 0; i < samples; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i), 0);
    const double u = (scheme == Scheme::RMLMC) ? rng.uniform() : 0.0;
    const double tu = u * h;
    Eigen::VectorXd diffusion = x;
    Eigen::VectorXd path = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd at_uh = Eigen::VectorXd::Zero(d);
    for (long j = 0; j < inner; ++j) {
      const Eigen::VectorXd dw = std::sqrt(dt) * rng.normal_vector(d);
      const double t0 = j * dt;
      if (scheme == Scheme::RMLMC && tu >= t0 && tu < t0 + dt) {
        // Brownian bridge value at tu inside this substep
        const double f = (tu - t0) / dt;
        at_uh = path + f * dw + std::sqrt(f * (1.0 - f) * dt) * rng.normal_vector(d);
      }
      diffusion += -dt * pot.grad(diffusion) + std::sqrt(2.0) * dw;
      path += dw;
    }
    if (scheme == Scheme::RMLMC && tu >= h) at_uh = path;
    Eigen::VectorXd approx;
    if (scheme == Scheme::LMC) {
      approx = x - h * gx + std::sqrt(2.0) * path;
    } else {
      const Eigen::VectorXd mid = x - tu * gx + std::sqrt(2.0) * at_uh;
      approx = x - h * pot.grad(mid) + std::sqrt(2.0) * path;
    }
    const Eigen::VectorXd diff = approx - diffusion;
    if (!diff.allFinite()) throw NumericError("estimate_local_errors: non-finite sample");
    sum += diff;
    sum_sq += diff.cwiseProduct(diff);
    const double n2 = diff.squaredNorm();
    sum_n2 += n2;
    sum_n4 += n2 * n2;
  }
  const double R = static_cast<double>(samples);
  LocalErrorEstimate est;
  const Eigen::VectorXd mean = sum / R;
  const Eigen::VectorXd var = (sum_sq / R - mean.cwiseProduct(mean)).cwiseMax(0.0) * (R / std::max(R - 1.0, 1.0));
  est.weak = mean.norm();
  if (est.weak > 0.0) {
    est.weak_stderr = std::sqrt((mean.cwiseProduct(mean).cwiseProduct(var)).sum() / R) / est.weak;
  } else {
    est.weak_stderr = std::sqrt(var.sum() / R);
  }
  const double m2 = sum_n2 / R;
  const double v2 = std::max(sum_n4 / R - m2 * m2, 0.0) * (R / std::max(R - 1.0, 1.0));
  est.strong = std::sqrt(m2);
  est.strong_stderr = (est.strong > 0.0) ? std::sqrt(v2 / R) / (2.0 * est.strong) : 0.0;
  est.exact = false;
  est.low_power = samples < 1000 || est.weak < 2.0 * est.weak_stderr;
  return est;
}

}  // namespace

LocalErrorEstimate estimate_local_errors(const PotentialSpec& pot, Scheme scheme, const Eigen::VectorXd& x,
                                         double h, long samples, std::uint64_t seed, const LocalErrorOptions& opts) {
  pot.validate();
  if (x.size() != pot.dimension) throw InputError("estimate_local_errors: state dimension mismatch");
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("estimate_local_errors: h must be > 0");
  if (scheme == Scheme::ExactDiffusion) {
    LocalErrorEstimate zero;
    zero.exact = true;
    return zero;
  }
  if (pot.quadratic && !opts.force_monte_carlo) {
    LocalErrorEstimate est = exact_quadratic(*pot.quadratic, scheme, x, h);
    est.samples = 0;
    return est;
  }
  if (opts.inner_steps < 64) throw DomainError("estimate_local_errors: need at least 64 inner steps");
  if (samples < 2) throw DomainError("estimate_local_errors: need at least 2 samples");
  LocalErrorEstimate est = monte_carlo(pot, scheme, x, h, samples, seed, opts.inner_steps);
  est.samples = samples;
  return est;
}

}  // namespace shiftkl
