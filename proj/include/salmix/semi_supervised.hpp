#pragma once

#include "salmix/dataset.hpp"
#include "salmix/em.hpp"

namespace salmix {

// Model-based classification: rows flagged in data.known_mask carry fixed
// labels in data.labels (values 1..g); their responsibilities stay one-hot
// through annealing and EM. h >= g allows extra components for the
// unlabeled rows (default h = g).
struct ClassificationTask {
  DataSet data;
  int g = 0;  // labeled classes
  int h = 0;  // total components, >= g; 0 means h = g
};

// Joint-likelihood EM for the task. Throws MissingClassExamples when some
// class in 1..g has no labeled row. With no known rows the trajectory is
// identical to unsupervised fitting with the same config.
FitReport fit_classifier(const ClassificationTask& task, const FitConfig& cfg, ModelKind engine);

}  // namespace salmix
