#pragma once

#include <Eigen/Dense>

namespace shiftkl {

// Gaussian law N(mean, cov). The covariance may be singular (point masses are
// allowed), but must be symmetric and PSD up to roundoff.
class Gaussian {
 public:
  Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  static Gaussian scalar(double mean, double variance);
  static Gaussian point_mass(const Eigen::VectorXd& x);
  static Gaussian isotropic(const Eigen::VectorXd& mean, double variance);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  Eigen::Index dim() const { return mean_.size(); }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

double kl_gaussian(const Gaussian& p, const Gaussian& q);
double w2_gaussian(const Gaussian& p, const Gaussian& q);
// Returns +infinity when the order-dependent mixture covariance is not PD.
double renyi_gaussian(double order, const Gaussian& p, const Gaussian& q);

Gaussian affine_pushforward(const Gaussian& g, const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
Gaussian convolve(const Gaussian& g1, const Gaussian& g2);

// Exact KL and W2 between N steps of the shifted/inflated toy kernel and the
// unit random walk, from a common Dirac start.
double toy_exact_kl(long N, double w, double sigma);
double toy_exact_w2(long N, double w, double sigma);

// Symmetric square root, inverse square root and eigen-clamping helpers.
Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& S);

}  // namespace shiftkl
