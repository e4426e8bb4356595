#include "salmix/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include "salmix/rng.hpp"

namespace salmix {

GaussianComponent::GaussianComponent(Eigen::VectorXd mu, Eigen::MatrixXd sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  if (sigma_.rows() != mu_.size() || sigma_.cols() != mu_.size())
    throw std::invalid_argument("GaussianComponent: inconsistent dimensions");
  llt_.compute(sigma_);
  if (llt_.info() != Eigen::Success)
    throw std::invalid_argument("GaussianComponent: sigma is not positive definite");
  log_det_sigma_ = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double gaussian_log_density(const Eigen::VectorXd& x, const GaussianComponent& c) {
  const int p = c.dim();
  const Eigen::VectorXd d = x - c.mu();
  const double q = d.dot(c.chol().solve(d));
  return -0.5 * (p * std::log(2.0 * M_PI) + c.log_det_sigma() + q);
}

double gaussian_mixture_log_density(const Eigen::VectorXd& x, const GaussianMixture& m) {
  Eigen::VectorXd lp(m.g());
  for (int g = 0; g < m.g(); ++g)
    lp(g) = std::log(m.weights(g)) + gaussian_log_density(x, m.components[g]);
  const double mx = lp.maxCoeff();
  return mx + std::log((lp.array() - mx).exp().sum());
}

Eigen::MatrixXd sample_gaussian(const GaussianComponent& c, int n, std::uint64_t seed) {
  const int p = c.dim();
  Rng rng(seed);
  const Eigen::MatrixXd L = c.chol().matrixL();
  Eigen::MatrixXd out(n, p);
  Eigen::VectorXd z(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z(j) = rng.normal();
    out.row(i) = (c.mu() + L * z).transpose();
  }
  return out;
}

}  // namespace salmix
