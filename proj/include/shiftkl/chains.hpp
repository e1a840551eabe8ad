#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "shiftkl/gauss.hpp"
#include "shiftkl/rng.hpp"
#include "shiftkl/shifts.hpp"

namespace shiftkl {

struct QuadraticTag {
  Eigen::MatrixXd precision;
  Eigen::VectorXd mode;
};

struct PotentialSpec {
  Eigen::Index dimension = 1;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  double alpha = 0.0;
  double beta = 1.0;
  std::optional<double> zeta0;
  std::optional<double> zeta1;
  std::optional<QuadraticTag> quadratic;

  // V(x) = (x - mode)^T P (x - mode) / 2 with alpha, beta the extreme eigenvalues of P.
  static PotentialSpec quadratic_potential(const Eigen::MatrixXd& precision, const Eigen::VectorXd& mode);
  static PotentialSpec zero_potential(Eigen::Index d);

  void validate() const;
  // Gradient with a finiteness check.
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const;
};

enum class Scheme { LMC, RMLMC, ExactDiffusion };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

struct SamplerConfig {
  Scheme scheme = Scheme::LMC;
  double h = 0.1;
  long N = 1;
  std::uint64_t seed = 0;
  long samples = 1000;

  void validate(const PotentialSpec& pot) const;
};

Eigen::VectorXd lmc_step(const PotentialSpec& pot, const Eigen::VectorXd& x, double h, const Eigen::VectorXd& noise);

// Brownian values (B_{uh}, B_h) of one path, per coordinate Cov = [[uh, uh], [uh, h]].
struct BrownianPair {
  double u = 0.0;
  double h = 0.0;
  Eigen::VectorXd at_uh;
  Eigen::VectorXd at_h;

  static BrownianPair from_normals(double u, double h, const Eigen::VectorXd& xi1, const Eigen::VectorXd& xi2);
};

Eigen::VectorXd rmlmc_step(const PotentialSpec& pot, const Eigen::VectorXd& x, double h, double u,
                           const BrownianPair& noise);

Gaussian exact_diffusion_kernel(const PotentialSpec& pot, const Eigen::VectorXd& x, double h);

Gaussian propagate_law(const PotentialSpec& pot, const Gaussian& init, Scheme scheme, double h, long N);

struct LocalErrorEstimate {
  double weak = 0.0;
  double strong = 0.0;
  double weak_stderr = 0.0;
  double strong_stderr = 0.0;
  bool exact = false;
  bool low_power = false;
  long samples = 0;
};

struct LocalErrorOptions {
  long inner_steps = 64;  // Euler substeps for the reference diffusion path
  bool force_monte_carlo = false;
};

// Weak and strong one-step errors of `scheme` against the diffusion, both started
// at x and driven by one Brownian path. Exact for quadratic potentials.
LocalErrorEstimate estimate_local_errors(const PotentialSpec& pot, Scheme scheme, const Eigen::VectorXd& x,
                                         double h, long samples, std::uint64_t seed,
                                         const LocalErrorOptions& opts = {});

struct ChainRun {
  Eigen::MatrixXd final_states;       // samples x d
  std::vector<Eigen::MatrixXd> path;  // per step 0..N when recorded
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::optional<Gaussian> exact_law;
  double mean_residual = 0.0;  // max |empirical - exact| over entries
  double cov_residual = 0.0;
};

ChainRun simulate_chain(const PotentialSpec& pot, const SamplerConfig& config, const Gaussian& init,
                        bool record_path = false);

// One-dimensional transition x -> x' drawing noise from the given stream.
using Kernel1D = std::function<double(double, CounterRng&)>;

Kernel1D toy_approx_kernel(double w, double sigma);  // x + N(w, 1 + sigma^2)
Kernel1D toy_exact_kernel();                         // x + N(0, 1)
Kernel1D scheme_kernel_1d(const PotentialSpec& pot, Scheme scheme, double h);

struct AuxConfig {
  long replicas = 100000;
  long batches = 20;
  std::uint64_t seed = 0;
  double x0 = 0.0;  // start of the approximate chain
  double y0 = 0.0;  // start of the reference chain
};

struct AuxTrace {
  std::vector<double> distance;  // d_0 .. d_N
  std::vector<double> std_error;
};

AuxTrace auxiliary_process_sim(const Kernel1D& approx, const Kernel1D& exact, const ShiftSchedule& schedule,
                               const AuxConfig& config);
AuxTrace auxiliary_process_sim(const PotentialSpec& pot, const ShiftSchedule& schedule,
                               const SamplerConfig& config, double x0, double y0, long batches = 20);

}  // namespace shiftkl
