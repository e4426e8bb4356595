#include "salmix/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace salmix {

int thread_budget() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SALMIX_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < hw) hw = cap;
  }
  return hw;
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_budget(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

SweepResult run_sweep(const DataSet& data, const SweepOptions& opt) {
  struct Job {
    ModelKind model;
    int g;
  };
  std::vector<Job> jobs;
  for (ModelKind m : opt.models)
    for (int g = opt.g_min; g <= opt.g_max; ++g) jobs.push_back({m, g});

  SweepResult result;
  std::mutex mu;
  parallel_for(static_cast<int>(jobs.size()), [&](int idx) {
    const Job& job = jobs[idx];
    FitConfig cfg = opt.base;
    cfg.g = job.g;
    try {
      FitReport rep;
      if (job.model == ModelKind::sal) {
        rep = fit_em(data, cfg, anneal_init(data, cfg));
      } else {
        rep = fit_gmm(data, cfg, anneal_init_gmm(data, cfg));
      }
      std::lock_guard<std::mutex> lock(mu);
      result.reports.push_back(std::move(rep));
    } catch (const FitError& err) {
      std::lock_guard<std::mutex> lock(mu);
      result.failures.push_back({detail::kind_name(job.model), job.g, err.what()});
    }
  });

  // Deterministic ordering regardless of job completion order.
  std::sort(result.reports.begin(), result.reports.end(), [](const FitReport& a, const FitReport& b) {
    return std::tie(a.model_kind, a.g) < std::tie(b.model_kind, b.g);
  });

  for (size_t i = 0; i < result.reports.size(); ++i) {
    const double crit = opt.use_bic ? result.reports[i].score.bic : result.reports[i].score.icl;
    if (result.best_index < 0) {
      result.best_index = static_cast<int>(i);
      continue;
    }
    const auto& best = result.reports[result.best_index];
    if (crit > (opt.use_bic ? best.score.bic : best.score.icl))
      result.best_index = static_cast<int>(i);
  }
  return result;
}

int best_of_kind(const SweepResult& r, ModelKind kind, bool use_bic) {
  const std::string name = detail::kind_name(kind);
  int best = -1;
  for (size_t i = 0; i < r.reports.size(); ++i) {
    if (r.reports[i].model_kind != name) continue;
    if (best < 0) {
      best = static_cast<int>(i);
      continue;
    }
    const double crit = use_bic ? r.reports[i].score.bic : r.reports[i].score.icl;
    const double bc = use_bic ? r.reports[best].score.bic : r.reports[best].score.icl;
    if (crit > bc) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace salmix
