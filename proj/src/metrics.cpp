#include "salmix/metrics.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace salmix {

int count_free_params(ModelKind kind, int g, int p) {
  const int cov = g * p * (p + 1) / 2;
  const int base = (g - 1) + g * p + cov;
  return kind == ModelKind::sal ? base + g * p : base;
}

std::vector<int> map_labels(const Eigen::MatrixXd& tau) {
  std::vector<int> out(tau.rows());
  for (int i = 0; i < tau.rows(); ++i) {
    int best = 0;
    for (int g = 1; g < tau.cols(); ++g)
      if (tau(i, g) > tau(i, best)) best = g;
    out[i] = best + 1;
  }
  return out;
}

ModelScore score_model(double log_lik, int free_params, int n, const Eigen::MatrixXd& tau,
                       const std::vector<char>* known_mask) {
  ModelScore s;
  s.log_lik = log_lik;
  s.free_params = free_params;
  s.bic = 2.0 * log_lik - free_params * std::log(static_cast<double>(n));
  s.entropy_term = 0.0;
  for (int i = 0; i < tau.rows(); ++i) {
    if (known_mask && !known_mask->empty() && (*known_mask)[i]) continue;
    int best = 0;
    for (int g = 1; g < tau.cols(); ++g)
      if (tau(i, g) > tau(i, best)) best = g;
    s.entropy_term += std::log(tau(i, best));
  }
  s.icl = s.bic + s.entropy_term;
  return s;
}

PartitionAgreement rand_and_ari(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
  const size_t n = labels_a.size();
  if (n != labels_b.size() || n < 2)
    throw std::invalid_argument("rand_and_ari: partitions must have equal length >= 2");

  std::map<std::pair<int, int>, long long> cell;
  std::map<int, long long> row, col;
  for (size_t i = 0; i < n; ++i) {
    ++cell[{labels_a[i], labels_b[i]}];
    ++row[labels_a[i]];
    ++col[labels_b[i]];
  }
  auto c2 = [](long long m) { return 0.5 * static_cast<double>(m) * (m - 1); };
  double s = 0.0, sa = 0.0, sb = 0.0;
  for (const auto& [k, v] : cell) s += c2(v);
  for (const auto& [k, v] : row) sa += c2(v);
  for (const auto& [k, v] : col) sb += c2(v);
  const double total = c2(static_cast<long long>(n));

  PartitionAgreement out;
  out.rand = (total + 2.0 * s - sa - sb) / total;
  const double expected = sa * sb / total;
  const double max_index = 0.5 * (sa + sb);
  if (max_index == expected) {
    // Both partitions trivial (single block each): identical.
    out.ari = 1.0;
  } else {
    out.ari = (s - expected) / (max_index - expected);
  }
  return out;
}

}  // namespace salmix
