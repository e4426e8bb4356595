#pragma once

#include <functional>
#include <vector>

#include "salmix/dataset.hpp"
#include "salmix/em.hpp"

namespace salmix {

struct SweepOptions {
  std::vector<ModelKind> models = {ModelKind::sal};
  int g_min = 1;
  int g_max = 5;
  bool use_bic = false;  // default criterion is ICL
  FitConfig base;        // base.g is ignored; each job sets its own
};

struct SweepFailure {
  std::string model_kind;
  int g;
  std::string message;
};

struct SweepResult {
  std::vector<FitReport> reports;
  std::vector<SweepFailure> failures;
  int best_index = -1;  // into reports; -1 when every fit failed

  const FitReport& best() const { return reports.at(best_index); }
};

// Fits every (model, g) pair over immutable data in a parallel job pool
// (capped by SALMIX_THREADS); failed fits are recorded without aborting the
// sweep. Both engines consume the same seed, hence the same annealing
// starting values.
SweepResult run_sweep(const DataSet& data, const SweepOptions& opt);

// Best report of one model kind by the sweep criterion; -1 if none.
int best_of_kind(const SweepResult& r, ModelKind kind, bool use_bic);

int thread_budget();
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace salmix
