#include "shiftkl/chains.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "shiftkl/errors.hpp"

namespace shiftkl {

namespace {

struct Spectral {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd basis;
};

Spectral spectral(const QuadraticTag& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (q.precision + q.precision.transpose()));
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::MatrixXd from_spectrum(const Spectral& s, const Eigen::VectorXd& f) {
  return s.basis * f.asDiagonal() * s.basis.transpose();
}

const QuadraticTag& require_quadratic(const PotentialSpec& pot, const char* who) {
  if (!pot.quadratic) throw DomainError(std::string(who) + ": potential has no quadratic tag");
  return *pot.quadratic;
}

// e^{-hP} and P^{-1}(I - e^{-2hP}); the latter needs P positive definite.
struct OuTransition {
  Eigen::MatrixXd decay;
  Eigen::MatrixXd noise_cov;
};

OuTransition ou_transition(const QuadraticTag& q, double h) {
  const Spectral s = spectral(q);
  const double lmax = s.lambda.cwiseAbs().maxCoeff();
  if (!(s.lambda.minCoeff() > 1e-14 * std::max(lmax, 1e-300))) {
    throw DomainError("exact diffusion kernel needs a positive-definite precision");
  }
  Eigen::VectorXd decay(s.lambda.size()), var(s.lambda.size());
  for (Eigen::Index i = 0; i < s.lambda.size(); ++i) {
    decay(i) = std::exp(-h * s.lambda(i));
    var(i) = -std::expm1(-2.0 * h * s.lambda(i)) / s.lambda(i);
  }
  return {from_spectrum(s, decay), from_spectrum(s, var)};
}

// Runs body(begin, end) over [0, count) split across hardware threads.
template <class Body>
void parallel_ranges(long count, Body body) {
  const long workers = std::max<long>(1, std::min<long>(std::thread::hardware_concurrency(), count / 256));
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (count + workers - 1) / workers;
  for (long w = 0; w < workers; ++w) {
    const long lo = w * chunk, hi = std::min(count, lo + chunk);
    if (lo < hi) pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

PotentialSpec PotentialSpec::quadratic_potential(const Eigen::MatrixXd& precision, const Eigen::VectorXd& mode) {
  if (precision.rows() != mode.size() || precision.cols() != mode.size()) {
    throw InputError("quadratic_potential: precision/mode shape mismatch");
  }
  if ((precision - precision.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, precision.norm())) {
    throw InputError("quadratic_potential: precision must be symmetric");
  }
  PotentialSpec pot;
  pot.dimension = mode.size();
  pot.quadratic = QuadraticTag{precision, mode};
  const Eigen::MatrixXd P = precision;
  const Eigen::VectorXd m = mode;
  pot.gradient = [P, m](const Eigen::VectorXd& x) -> Eigen::VectorXd { return P * (x - m); };
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(precision, Eigen::EigenvaluesOnly);
  pot.alpha = es.eigenvalues().minCoeff();
  pot.beta = es.eigenvalues().maxCoeff();
  pot.zeta0 = 0.0;
  pot.zeta1 = 0.0;
  return pot;
}

PotentialSpec PotentialSpec::zero_potential(Eigen::Index d) {
  return quadratic_potential(Eigen::MatrixXd::Zero(d, d), Eigen::VectorXd::Zero(d));
}

void PotentialSpec::validate() const {
  if (dimension < 1) throw InputError("potential dimension must be >= 1");
  if (!gradient) throw InputError("potential has no gradient oracle");
  if (!(alpha <= beta)) throw DomainError("potential requires alpha <= beta");
  if (zeta0 && !(*zeta0 >= 0.0)) throw DomainError("zeta0 must be >= 0");
  if (zeta1 && !(*zeta1 >= 0.0)) throw DomainError("zeta1 must be >= 0");
  if (quadratic && (quadratic->mode.size() != dimension || quadratic->precision.rows() != dimension)) {
    throw InputError("quadratic tag does not match the potential dimension");
  }
}

Eigen::VectorXd PotentialSpec::grad(const Eigen::VectorXd& x) const {
  if (x.size() != dimension) throw InputError("state dimension does not match the potential");
  Eigen::VectorXd g = gradient(x);
  if (g.size() != dimension || !g.allFinite()) throw NumericError("non-finite gradient");
  return g;
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::LMC:
      return "lmc";
    case Scheme::RMLMC:
      return "rmlmc";
    case Scheme::ExactDiffusion:
      return "exact";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "lmc") return Scheme::LMC;
  if (name == "rmlmc") return Scheme::RMLMC;
  if (name == "exact") return Scheme::ExactDiffusion;
  throw InputError("unknown scheme '" + name + "' (expected lmc, rmlmc or exact)");
}

void SamplerConfig::validate(const PotentialSpec& pot) const {
  pot.validate();
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("h must be finite and > 0");
  if (N < 0) throw DomainError("N must be >= 0");
  if (samples < 1) throw DomainError("samples must be >= 1");
  if (scheme == Scheme::ExactDiffusion && !pot.quadratic) {
    throw DomainError("the exact diffusion scheme needs a quadratic potential");
  }
}

Eigen::VectorXd lmc_step(const PotentialSpec& pot, const Eigen::VectorXd& x, double h, const Eigen::VectorXd& noise) {
  if (noise.size() != pot.dimension) throw InputError("lmc_step: noise dimension mismatch");
  return x - h * pot.grad(x) + std::sqrt(2.0 * h) * noise;
}

BrownianPair BrownianPair::from_normals(double u, double h, const Eigen::VectorXd& xi1, const Eigen::VectorXd& xi2) {
  if (xi1.size() != xi2.size()) throw InputError("BrownianPair: normal vectors differ in size");
  BrownianPair bp;
  bp.u = u;
  bp.h = h;
  bp.at_uh = std::sqrt(u * h) * xi1;
  bp.at_h = bp.at_uh + std::sqrt((1.0 - u) * h) * xi2;
  return bp;
}

Eigen::VectorXd rmlmc_step(const PotentialSpec& pot, const Eigen::VectorXd& x, double h, double u,
                           const BrownianPair& noise) {
  if (!(u >= 0.0 && u <= 1.0)) throw InputError("rmlmc_step: u must lie in [0,1]");
  if (noise.at_uh.size() != pot.dimension || noise.at_h.size() != pot.dimension) {
    throw InputError("rmlmc_step: increment dimension mismatch");
  }
  if (noise.u != u || noise.h != h) throw InputError("rmlmc_step: increments were drawn for a different (u, h)");
  // A zero-variance component must be exactly zero, and the full increment must
  // equal the partial one when u = 1.
  if (u == 0.0 && noise.at_uh.cwiseAbs().maxCoeff() != 0.0) {
    throw InputError("rmlmc_step: B_uh must vanish when u = 0");
  }
  if (u == 1.0 && noise.at_h != noise.at_uh) throw InputError("rmlmc_step: B_h must equal B_uh when u = 1");
  const Eigen::VectorXd mid = x - u * h * pot.grad(x) + std::sqrt(2.0) * noise.at_uh;
  return x - h * pot.grad(mid) + std::sqrt(2.0) * noise.at_h;
}

Gaussian exact_diffusion_kernel(const PotentialSpec& pot, const Eigen::VectorXd& x, double h) {
  const QuadraticTag& q = require_quadratic(pot, "exact_diffusion_kernel");
  if (x.size() != pot.dimension) throw InputError("exact_diffusion_kernel: state dimension mismatch");
  if (!(h >= 0.0)) throw DomainError("exact_diffusion_kernel: h must be >= 0");
  const OuTransition t = ou_transition(q, h);
  return Gaussian(q.mode + t.decay * (x - q.mode), t.noise_cov);
}

Gaussian propagate_law(const PotentialSpec& pot, const Gaussian& init, Scheme scheme, double h, long N) {
  const QuadraticTag& q = require_quadratic(pot, "propagate_law");
  if (init.dim() != pot.dimension) throw InputError("propagate_law: init dimension mismatch");
  if (N < 0) throw DomainError("propagate_law: N must be >= 0");
  const Eigen::Index d = pot.dimension;
  Eigen::MatrixXd A;
  Eigen::VectorXd shift;
  Eigen::MatrixXd noise;
  if (scheme == Scheme::LMC) {
    A = Eigen::MatrixXd::Identity(d, d) - h * q.precision;
    shift = h * q.precision * q.mode;
    noise = 2.0 * h * Eigen::MatrixXd::Identity(d, d);
  } else if (scheme == Scheme::ExactDiffusion) {
    const OuTransition t = ou_transition(q, h);
    A = t.decay;
    shift = q.mode - t.decay * q.mode;
    noise = t.noise_cov;
  } else {
    throw DomainError("propagate_law supports the lmc and exact schemes only");
  }
  const Gaussian step_noise(Eigen::VectorXd::Zero(d), noise);
  Gaussian g = init;
  for (long n = 0; n < N; ++n) g = convolve(affine_pushforward(g, A, shift), step_noise);
  return g;
}

ChainRun simulate_chain(const PotentialSpec& pot, const SamplerConfig& config, const Gaussian& init,
                        bool record_path) {
  config.validate(pot);
  if (init.dim() != pot.dimension) throw InputError("simulate_chain: init dimension mismatch");
  const Eigen::Index d = pot.dimension;
  const long R = config.samples;
  const Eigen::MatrixXd init_root = sqrtm_psd(init.cov());
  std::optional<OuTransition> ou;
  Eigen::MatrixXd ou_root;
  if (config.scheme == Scheme::ExactDiffusion) {
    ou = ou_transition(*pot.quadratic, config.h);
    ou_root = sqrtm_psd(ou->noise_cov);
  }

  ChainRun run;
  run.final_states.resize(R, d);
  if (record_path) run.path.assign(config.N + 1, Eigen::MatrixXd(R, d));
  std::vector<long> failed_step(R, -1);

  parallel_ranges(R, [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      CounterRng init_rng(config.seed, static_cast<std::uint64_t>(i), 0);
      Eigen::VectorXd x = init.mean() + init_root * init_rng.normal_vector(d);
      if (record_path) run.path[0].row(i) = x.transpose();
      for (long n = 0; n < config.N; ++n) {
        CounterRng rng(config.seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(n + 1));
        try {
          switch (config.scheme) {
            case Scheme::LMC:
              x = lmc_step(pot, x, config.h, rng.normal_vector(d));
              break;
            case Scheme::RMLMC: {
              const double u = rng.uniform();
              const Eigen::VectorXd xi1 = rng.normal_vector(d);
              const Eigen::VectorXd xi2 = rng.normal_vector(d);
              x = rmlmc_step(pot, x, config.h, u, BrownianPair::from_normals(u, config.h, xi1, xi2));
              break;
            }
            case Scheme::ExactDiffusion:
              x = pot.quadratic->mode + ou->decay * (x - pot.quadratic->mode) + ou_root * rng.normal_vector(d);
              break;
          }
        } catch (const NumericError&) {
          failed_step[i] = n + 1;
          break;
        }
        if (!x.allFinite()) {
          failed_step[i] = n + 1;
          break;
        }
        if (record_path) run.path[n + 1].row(i) = x.transpose();
      }
      run.final_states.row(i) = x.transpose();
    }
  });
  long first_fail = -1;
  for (long s : failed_step) {
    if (s >= 0 && (first_fail < 0 || s < first_fail)) first_fail = s;
  }
  if (first_fail >= 0) {
    throw NumericError("simulate_chain: non-finite iterate at step " + std::to_string(first_fail), first_fail);
  }

  run.mean = run.final_states.colwise().mean().transpose();
  const Eigen::MatrixXd centered = run.final_states.rowwise() - run.mean.transpose();
  run.cov = (R > 1) ? Eigen::MatrixXd(centered.transpose() * centered / static_cast<double>(R - 1))
                    : Eigen::MatrixXd::Zero(d, d);
  if (pot.quadratic && config.scheme != Scheme::RMLMC) {
    run.exact_law = propagate_law(pot, init, config.scheme, config.h, config.N);
    run.mean_residual = (run.mean - run.exact_law->mean()).cwiseAbs().maxCoeff();
    run.cov_residual = (run.cov - run.exact_law->cov()).cwiseAbs().maxCoeff();
  }
  return run;
}

}  // namespace shiftkl
