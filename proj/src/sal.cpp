#include "salmix/sal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "salmix/errors.hpp"
#include "salmix/rng.hpp"

namespace salmix {

namespace {
constexpr double kShiftTol = 1e-300;  // absolute delta below which the density blows up
}

SalComponent::SalComponent(Eigen::VectorXd mu, Eigen::VectorXd alpha, Eigen::MatrixXd sigma)
    : mu_(std::move(mu)), alpha_(std::move(alpha)), sigma_(std::move(sigma)) {
  if (mu_.size() != alpha_.size() || sigma_.rows() != mu_.size() || sigma_.cols() != mu_.size())
    throw std::invalid_argument("SalComponent: inconsistent dimensions");
  llt_.compute(sigma_);
  if (llt_.info() != Eigen::Success)
    throw std::invalid_argument("SalComponent: sigma is not positive definite");
  log_det_sigma_ = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
  sigma_inv_alpha_ = llt_.solve(alpha_);
  quad_alpha_ = alpha_.dot(sigma_inv_alpha_);
}

double SalComponent::delta(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd d = x - mu_;
  return d.dot(llt_.solve(d));
}

EvaluationTerms evaluate_terms(const Eigen::VectorXd& x, const SalComponent& c) {
  EvaluationTerms t;
  const Eigen::VectorXd d = x - c.mu();
  t.delta = d.dot(c.chol().solve(d));
  if (t.delta < 0.0) t.delta = 0.0;  // roundoff
  t.quad_alpha = c.quad_alpha();
  t.dot_term = d.dot(c.sigma_inv_alpha());
  t.u = std::sqrt((2.0 + t.quad_alpha) * t.delta);
  t.nu = c.nu();
  return t;
}

double sal_log_density(const Eigen::VectorXd& x, const SalComponent& c) {
  const int p = c.dim();
  if (x.size() != p) throw std::invalid_argument("sal_log_density: dimension mismatch");
  const EvaluationTerms t = evaluate_terms(x, c);
  if (t.delta < kShiftTol) throw AtShiftPoint();
  return M_LN2 + t.dot_term - 0.5 * p * std::log(2.0 * M_PI) - 0.5 * c.log_det_sigma() +
         0.5 * t.nu * std::log(t.delta / (2.0 + t.quad_alpha)) + log_bessel_k(t.nu, t.u);
}

double sal_mixture_log_density(const Eigen::VectorXd& x, const SalMixture& m) {
  const int G = m.g();
  Eigen::VectorXd lp(G);
  for (int g = 0; g < G; ++g)
    lp(g) = std::log(m.weights(g)) + sal_log_density(x, m.components[g]);
  const double mx = lp.maxCoeff();
  return mx + std::log((lp.array() - mx).exp().sum());
}

GigParams posterior_w_params(const Eigen::VectorXd& x, const SalComponent& c) {
  const EvaluationTerms t = evaluate_terms(x, c);
  if (t.delta < kShiftTol) throw AtShiftPoint();
  return GigParams{2.0 + t.quad_alpha, t.delta, t.nu};
}

Eigen::MatrixXd sample_sal(const SalComponent& c, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_sal: n must be >= 1");
  const int p = c.dim();
  Rng rng(seed);
  const Eigen::MatrixXd L = c.chol().matrixL();
  Eigen::MatrixXd out(n, p);
  Eigen::VectorXd z(p);
  for (int i = 0; i < n; ++i) {
    const double w = rng.exponential();
    for (int j = 0; j < p; ++j) z(j) = rng.normal();
    out.row(i) = (c.mu() + w * c.alpha() + std::sqrt(w) * (L * z)).transpose();
  }
  return out;
}

}  // namespace salmix
