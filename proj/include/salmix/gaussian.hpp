#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace salmix {

class GaussianComponent {
 public:
  GaussianComponent(Eigen::VectorXd mu, Eigen::MatrixXd sigma);

  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::LLT<Eigen::MatrixXd>& chol() const { return llt_; }
  double log_det_sigma() const { return log_det_sigma_; }
  int dim() const { return static_cast<int>(mu_.size()); }

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd sigma_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_sigma_;
};

struct GaussianMixture {
  Eigen::VectorXd weights;
  std::vector<GaussianComponent> components;

  int g() const { return static_cast<int>(components.size()); }
  int p() const { return components.empty() ? 0 : components.front().dim(); }
};

double gaussian_log_density(const Eigen::VectorXd& x, const GaussianComponent& c);
double gaussian_mixture_log_density(const Eigen::VectorXd& x, const GaussianMixture& m);

// Stream order per row: the p components of Y.
Eigen::MatrixXd sample_gaussian(const GaussianComponent& c, int n, std::uint64_t seed);

}  // namespace salmix
