#include "salmix/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "salmix/rng.hpp"

namespace salmix {

SimulationSpec paper_sim_spec(std::uint64_t seed) {
  Eigen::VectorXd mu1(2), mu2(2), a1(2), a2(2);
  mu1 << 0, -2;
  mu2 << 0, 5;
  a1 << 2, 1;
  a2 << 2, 2;
  Eigen::MatrixXd s1(2, 2), s2(2, 2);
  s1 << 1, 0.5, 0.5, 1;
  s2 << 1, 0, 0, 1;

  SalMixture m;
  m.weights.resize(2);
  m.weights << 0.5, 0.5;
  m.components.emplace_back(mu1, a1, s1);
  m.components.emplace_back(mu2, a2, s2);

  SimulationSpec spec;
  spec.mixture = std::move(m);
  spec.n = 500;
  spec.datasets = 25;
  spec.seed = seed;
  return spec;
}

namespace {

template <class Mixture, class DrawRow>
LabeledData generate_one(const Mixture& m, int n, std::uint64_t seed, DrawRow draw_row) {
  const int p = m.p();
  const int G = m.g();
  Eigen::VectorXd cdf(G);
  double acc = 0.0;
  for (int g = 0; g < G; ++g) {
    acc += m.weights(g);
    cdf(g) = acc;
  }

  Rng rng(seed);
  LabeledData out;
  out.data.rows.resize(n, p);
  out.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    int g = 0;
    while (g < G - 1 && u > cdf(g)) ++g;
    out.labels[i] = g + 1;
    out.data.rows.row(i) = draw_row(m.components[g], rng).transpose();
  }
  for (int j = 0; j < p; ++j) out.data.column_names.push_back("x" + std::to_string(j + 1));
  out.data.labels = out.labels;
  return out;
}

Eigen::VectorXd draw_sal_row(const SalComponent& c, Rng& rng) {
  const int p = c.dim();
  const double w = rng.exponential();
  Eigen::VectorXd z(p);
  for (int j = 0; j < p; ++j) z(j) = rng.normal();
  const Eigen::MatrixXd L = c.chol().matrixL();
  return c.mu() + w * c.alpha() + std::sqrt(w) * (L * z);
}

Eigen::VectorXd draw_gaussian_row(const GaussianComponent& c, Rng& rng) {
  const int p = c.dim();
  Eigen::VectorXd z(p);
  for (int j = 0; j < p; ++j) z(j) = rng.normal();
  const Eigen::MatrixXd L = c.chol().matrixL();
  return c.mu() + L * z;
}

}  // namespace

std::vector<LabeledData> generate(const SimulationSpec& spec) {
  if (spec.n < 1 || spec.datasets < 1)
    throw std::invalid_argument("generate: n and datasets must be >= 1");
  std::vector<LabeledData> out;
  out.reserve(spec.datasets);
  for (int d = 0; d < spec.datasets; ++d) {
    const std::uint64_t seed = derive_seed(spec.seed, d);
    if (std::holds_alternative<SalMixture>(spec.mixture)) {
      out.push_back(generate_one(std::get<SalMixture>(spec.mixture), spec.n, seed, draw_sal_row));
    } else {
      out.push_back(
          generate_one(std::get<GaussianMixture>(spec.mixture), spec.n, seed, draw_gaussian_row));
    }
  }
  return out;
}

}  // namespace salmix
