#include "shiftkl/gauss.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "shiftkl/errors.hpp"
#include "shiftkl/numeric.hpp"

namespace shiftkl {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kPsdTol = 1e-12;
constexpr double kClamp = 1e-14;

void require_same_dim(const Gaussian& p, const Gaussian& q, const char* who) {
  if (p.dim() != q.dim()) {
    throw InputError(std::string(who) + ": dimension mismatch (" + std::to_string(p.dim()) + " vs " +
                     std::to_string(q.dim()) + ")");
  }
}

struct Whitened {
  Eigen::VectorXd eig;  // eigenvalues of Sq^{-1/2} Sp Sq^{-1/2}
  Eigen::VectorXd z;    // whitened mean difference in that eigenbasis
};

// Express p relative to a strictly positive-definite q.
Whitened whiten(const Gaussian& p, const Gaussian& q, const char* who) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eq(q.cov());
  const Eigen::VectorXd& lq = eq.eigenvalues();
  const double lmax = lq.size() ? lq.maxCoeff() : 0.0;
  if (lq.size() && (!(lmax > 0.0) || lq.minCoeff() <= kClamp * lmax)) {
    throw DivergenceUndefined(std::string(who) + ": reference covariance is singular");
  }
  const Eigen::MatrixXd W = eq.eigenvectors() * lq.cwiseInverse().cwiseSqrt().asDiagonal() *
                            eq.eigenvectors().transpose();
  Eigen::MatrixXd M = W * p.cov() * W;
  M = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(M);
  Whitened out;
  out.eig = em.eigenvalues();
  out.z = em.eigenvectors().transpose() * (W * (p.mean() - q.mean()));
  return out;
}

}  // namespace

Gaussian::Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  const Eigen::Index d = mean_.size();
  if (cov_.rows() != d || cov_.cols() != d) throw InputError("Gaussian: covariance shape does not match mean");
  if (!mean_.allFinite() || !cov_.allFinite()) throw InputError("Gaussian: non-finite entries");
  if (d == 0) return;
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymTol * scale) {
    throw InputError("Gaussian: covariance is not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_, Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff();
  if (es.eigenvalues().minCoeff() < -kPsdTol * std::max(lmax, 0.0)) {
    throw InputError("Gaussian: covariance is not positive semidefinite");
  }
}

Gaussian Gaussian::scalar(double mean, double variance) {
  return Gaussian(Eigen::VectorXd::Constant(1, mean), Eigen::MatrixXd::Constant(1, 1, variance));
}

Gaussian Gaussian::point_mass(const Eigen::VectorXd& x) {
  return Gaussian(x, Eigen::MatrixXd::Zero(x.size(), x.size()));
}

Gaussian Gaussian::isotropic(const Eigen::VectorXd& mean, double variance) {
  return Gaussian(mean, variance * Eigen::MatrixXd::Identity(mean.size(), mean.size()));
}

Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  Eigen::VectorXd l = es.eigenvalues();
  const double lmax = l.size() ? std::max(l.maxCoeff(), 0.0) : 0.0;
  for (Eigen::Index i = 0; i < l.size(); ++i) l(i) = (l(i) <= kClamp * lmax) ? 0.0 : std::sqrt(l(i));
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
}

double kl_gaussian(const Gaussian& p, const Gaussian& q) {
  require_same_dim(p, q, "kl_gaussian");
  if (p.cov() == q.cov()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eq(q.cov());
    const Eigen::VectorXd& lq = eq.eigenvalues();
    if (lq.size() && (!(lq.maxCoeff() > 0.0) || lq.minCoeff() <= kClamp * lq.maxCoeff())) {
      throw DivergenceUndefined("kl_gaussian: reference covariance is singular");
    }
    const Eigen::VectorXd z = eq.eigenvectors().transpose() * (p.mean() - q.mean());
    return 0.5 * (z.array().square() / lq.array()).sum();
  }
  const Whitened w = whiten(p, q, "kl_gaussian");
  const double lmax = w.eig.maxCoeff();
  double acc = w.z.squaredNorm();
  for (Eigen::Index i = 0; i < w.eig.size(); ++i) {
    if (w.eig(i) <= kClamp * lmax) return std::numeric_limits<double>::infinity();
    acc += x_minus_log1p(w.eig(i) - 1.0);
  }
  return 0.5 * acc;
}

double w2_gaussian(const Gaussian& p, const Gaussian& q) {
  require_same_dim(p, q, "w2_gaussian");
  const double mean_part = (p.mean() - q.mean()).squaredNorm();
  const Eigen::MatrixXd& A = p.cov();
  const Eigen::MatrixXd& B = q.cov();
  const double na = A.norm(), nb = B.norm();
  double cov_part;
  if ((A * B - B * A).norm() <= 1e-12 * na * nb) {
    cov_part = (sqrtm_psd(A) - sqrtm_psd(B)).squaredNorm();
  } else {
    const Eigen::MatrixXd sb = sqrtm_psd(B);
    cov_part = A.trace() + B.trace() - 2.0 * sqrtm_psd(sb * A * sb).trace();
  }
  return std::sqrt(mean_part + std::max(cov_part, 0.0));
}

double renyi_gaussian(double order, const Gaussian& p, const Gaussian& q) {
  if (!(order > 1.0) || !std::isfinite(order)) throw InputError("renyi_gaussian: order must be finite and exceed 1");
  require_same_dim(p, q, "renyi_gaussian");
  const Whitened w = whiten(p, q, "renyi_gaussian");
  const double inf = std::numeric_limits<double>::infinity();
  const double lmax = w.eig.maxCoeff();
  const double am1 = order - 1.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.eig.size(); ++i) {
    const double lam = w.eig(i);
    if (lam <= kClamp * lmax) return inf;
    const double mix = 1.0 - am1 * (lam - 1.0);
    if (mix <= kClamp * order) return inf;
    acc += 0.5 * order * w.z(i) * w.z(i) / mix - std::log1p(-am1 * (lam - 1.0)) / (2.0 * am1) -
           0.5 * std::log(lam);
  }
  return std::max(acc, 0.0);
}

Gaussian affine_pushforward(const Gaussian& g, const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.cols() != g.dim() || A.rows() != b.size()) throw InputError("affine_pushforward: shape mismatch");
  Eigen::MatrixXd S = A * g.cov() * A.transpose();
  return Gaussian(A * g.mean() + b, 0.5 * (S + S.transpose()));
}

Gaussian convolve(const Gaussian& g1, const Gaussian& g2) {
  require_same_dim(g1, g2, "convolve");
  return Gaussian(g1.mean() + g2.mean(), g1.cov() + g2.cov());
}

double toy_exact_kl(long N, double w, double sigma) {
  if (N < 1 || !(sigma > 0.0)) throw DomainError("toy_exact_kl: need N >= 1 and sigma > 0");
  return 0.5 * (static_cast<double>(N) * w * w + x_minus_log1p(sigma * sigma));
}

double toy_exact_w2(long N, double w, double sigma) {
  if (N < 1 || !(sigma > 0.0)) throw DomainError("toy_exact_w2: need N >= 1 and sigma > 0");
  const double n = static_cast<double>(N);
  const double s = sqrt1p_minus_one(sigma * sigma);
  return std::sqrt(n * n * w * w + n * s * s);
}

}  // namespace shiftkl
