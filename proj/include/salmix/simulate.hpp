#pragma once

#include <variant>

#include "salmix/dataset.hpp"
#include "salmix/gaussian.hpp"
#include "salmix/sal.hpp"

namespace salmix {

struct SimulationSpec {
  std::variant<SalMixture, GaussianMixture> mixture;
  int n = 500;
  int datasets = 1;
  std::uint64_t seed = 0;
};

// The two-component bivariate SAL design used by the simulation study:
// n = 500, 25 datasets, equal weights, alpha_1 = (2,1), alpha_2 = (2,2),
// mu_1 = (0,-2), mu_2 = (0,5), Sigma_1 = [[1,.5],[.5,1]], Sigma_2 = I.
SimulationSpec paper_sim_spec(std::uint64_t seed = 0);

struct LabeledData {
  DataSet data;            // labels field filled with the true components
  std::vector<int> labels; // same values, 1-based
};

// One dataset per spec.datasets, each deterministic under the derived
// per-dataset seed. Stream order per row: one uniform for the component
// label, then the component's draw (W, then Y for SAL; Y for Gaussian).
std::vector<LabeledData> generate(const SimulationSpec& spec);

}  // namespace salmix
