#pragma once

#include <Eigen/Dense>
#include <vector>

namespace salmix {

enum class ModelKind { sal, gaussian };

struct ModelScore {
  double log_lik = 0.0;
  int free_params = 0;   // the criterion's parameter count
  double bic = 0.0;      // 2 l - free_params ln n
  double icl = 0.0;      // bic + entropy_term
  double entropy_term = 0.0;  // sum over unlabeled rows of ln tau at the MAP component; <= 0
};

// Free parameters: weights (g-1), shifts (g p), skewness (g p, SAL only),
// covariances (g p(p+1)/2).
int count_free_params(ModelKind kind, int g, int p);

// MAP labels, 1-based; exact ties go to the lowest component index.
std::vector<int> map_labels(const Eigen::MatrixXd& tau);

// BIC and ICL from a fitted model's log-likelihood and responsibilities.
// known_mask (optional, size n) marks labeled rows, which are excluded from
// the entropy term.
ModelScore score_model(double log_lik, int free_params, int n, const Eigen::MatrixXd& tau,
                       const std::vector<char>* known_mask = nullptr);

struct PartitionAgreement {
  double rand;  // in [0, 1]
  double ari;   // <= 1; negative means worse than chance
};

// Pair-counting Rand index and Hubert-Arabie adjusted Rand index. Labels are
// arbitrary integers; both partitions must have the same length >= 2. When
// both partitions are a single block the ARI is 1 (identical partitions).
PartitionAgreement rand_and_ari(const std::vector<int>& labels_a, const std::vector<int>& labels_b);

}  // namespace salmix
