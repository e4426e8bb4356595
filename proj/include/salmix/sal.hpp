#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "salmix/special_math.hpp"

namespace salmix {

// One shifted asymmetric Laplace component: shift mu, skewness alpha, scale
// Sigma, with the Cholesky factor and alpha-dependent quadratics cached.
// Immutable after construction.
class SalComponent {
 public:
  SalComponent(Eigen::VectorXd mu, Eigen::VectorXd alpha, Eigen::MatrixXd sigma);

  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::LLT<Eigen::MatrixXd>& chol() const { return llt_; }
  double log_det_sigma() const { return log_det_sigma_; }
  double quad_alpha() const { return quad_alpha_; }            // alpha' Sigma^-1 alpha
  const Eigen::VectorXd& sigma_inv_alpha() const { return sigma_inv_alpha_; }
  int dim() const { return static_cast<int>(mu_.size()); }
  double nu() const { return (2.0 - dim()) / 2.0; }

  // Squared Mahalanobis distance (x - mu)' Sigma^-1 (x - mu).
  double delta(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd mu_, alpha_;
  Eigen::MatrixXd sigma_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd sigma_inv_alpha_;
  double log_det_sigma_;
  double quad_alpha_;
};

// Quadratic forms entering one density evaluation.
struct EvaluationTerms {
  double delta;       // (x-mu)' Sigma^-1 (x-mu)
  double quad_alpha;  // alpha' Sigma^-1 alpha
  double dot_term;    // (x-mu)' Sigma^-1 alpha
  double u;           // sqrt((2 + quad_alpha) delta)
  double nu;          // (2 - p) / 2
};

EvaluationTerms evaluate_terms(const Eigen::VectorXd& x, const SalComponent& c);

struct SalMixture {
  Eigen::VectorXd weights;
  std::vector<SalComponent> components;

  int g() const { return static_cast<int>(components.size()); }
  int p() const { return components.empty() ? 0 : components.front().dim(); }
};

// ln xi(x | alpha, Sigma, mu). Throws AtShiftPoint when x is numerically at
// the shift point (delta below 1e-300), where the density is unbounded for
// p >= 2.
double sal_log_density(const Eigen::VectorXd& x, const SalComponent& c);

// log-sum-exp of ln pi_g + ln xi_g.
double sal_mixture_log_density(const Eigen::VectorXd& x, const SalMixture& m);

// GIG parameters of W | X = x: a = 2 + alpha' Sigma^-1 alpha,
// b = delta(x, mu | Sigma), nu = (2 - p)/2.
GigParams posterior_w_params(const Eigen::VectorXd& x, const SalComponent& c);

// n draws of X = mu + W alpha + sqrt(W) Y, W ~ Exp(1), Y ~ N(0, Sigma).
// Stream order per row: W first, then the p components of Y.
Eigen::MatrixXd sample_sal(const SalComponent& c, int n, std::uint64_t seed);

}  // namespace salmix
