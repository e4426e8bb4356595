#include "salmix/semi_supervised.hpp"

namespace salmix {

FitReport fit_classifier(const ClassificationTask& task, const FitConfig& cfg_in, ModelKind engine) {
  const DataSet& data = task.data;
  const int n = data.n();
  const int g = task.g;
  const int h = task.h > 0 ? task.h : g;
  if (h < g) throw std::invalid_argument("fit_classifier: h must be >= g");

  std::vector<int> pinned(n, -1);
  std::vector<int> class_count(g, 0);
  int k = 0;
  if (data.has_known_mask()) {
    if (!data.has_labels()) throw std::invalid_argument("fit_classifier: known_mask without labels");
    for (int i = 0; i < n; ++i) {
      if (!data.known_mask[i]) continue;
      const int cls = data.labels[i];
      if (cls < 1 || cls > g) throw std::invalid_argument("fit_classifier: label out of range 1..g");
      pinned[i] = cls - 1;
      ++class_count[cls - 1];
      ++k;
    }
  }
  if (k > 0)
    for (int cls = 0; cls < g; ++cls)
      if (class_count[cls] == 0) throw MissingClassExamples(cls + 1);

  FitConfig cfg = cfg_in;
  cfg.g = h;
  const std::vector<int>* pin = k > 0 ? &pinned : nullptr;

  if (engine == ModelKind::sal) {
    SalMixture init = anneal_init_core<SalEngine>(data, cfg, pin);
    return fit_em_core<SalEngine>(data, cfg, std::move(init), pin);
  }
  GaussianMixture init = anneal_init_core<GaussianEngine>(data, cfg, pin);
  return fit_em_core<GaussianEngine>(data, cfg, std::move(init), pin);
}

}  // namespace salmix
