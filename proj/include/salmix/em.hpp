#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "salmix/dataset.hpp"
#include "salmix/errors.hpp"
#include "salmix/gaussian.hpp"
#include "salmix/metrics.hpp"
#include "salmix/rng.hpp"
#include "salmix/sal.hpp"

namespace salmix {

struct AnnealingSchedule {
  std::vector<double> v_values;  // increasing, in [0, 1]
  int restarts = 10;

  // v in {1/steps, 2/steps, ..., 1}.
  static AnnealingSchedule linear(int steps = 25, int restarts = 10);
};

struct FitConfig {
  int g = 1;
  double epsilon = 1e-5;
  int max_iter = 1000;
  AnnealingSchedule annealing = AnnealingSchedule::linear();
  std::uint64_t seed = 0;
  // Shift-degeneracy trigger, relative to the median pairwise squared
  // distance of the data.
  double degeneracy_tol = 1e-8;
};

struct AitkenState {
  double l_prev2 = 0, l_prev = 0, l_curr = 0;
  double a_k = 0;
  double l_inf = 0;
  bool used_acceleration = false;
};

// Lindsay-modified Aitken stopping rule on the log-likelihood trace:
// converged when l_inf - l_prev < eps, applied only when a_k is in (0,1);
// falls back to |l_curr - l_prev| < eps otherwise. Needs three trace values.
bool aitken_converged(const std::vector<double>& trace, double eps, AitkenState* out = nullptr);

enum class FitStatus { converged, max_iter, degenerate_frozen };
std::string to_string(FitStatus s);

struct EStepQuantities {
  Eigen::MatrixXd tau;       // n x G responsibilities, rows on the simplex
  Eigen::MatrixXd e_w;       // E[W_i | x_i] per component (SAL engine only)
  Eigen::MatrixXd e_inv_w;   // E[1/W_i | x_i] per component (SAL engine only)
  double log_lik = 0.0;      // observed-data (or joint, when rows are pinned) log-likelihood
};

struct EStepOptions {
  double v = 1.0;  // annealing exponent on the responsibilities
  double inv_w_cap = std::numeric_limits<double>::infinity();
  // Size n: -1 for unlabeled rows, else the 0-based component the row is
  // pinned to (model-based classification). nullptr means all unlabeled.
  const std::vector<int>* pinned = nullptr;
};

enum class MStepMode {
  standard,
  alpha_zero,  // skewness pinned to 0; shift/scale become weighted Gaussian-style moments
};

struct FitReport {
  std::string model_kind;  // "sal" | "gaussian"
  int g = 0;
  std::variant<SalMixture, GaussianMixture> model;
  std::vector<double> log_lik_trace;
  ModelScore score;
  std::vector<int> map_labels;  // 1-based
  Eigen::MatrixXd responsibilities;
  std::optional<double> ari;  // against supplied true labels, when present
  FitStatus status = FitStatus::max_iter;
  std::vector<int> frozen_components;  // 0-based indices with frozen shifts
  int iterations = 0;
  std::uint64_t seed = 0;
  FitConfig config;

  const SalMixture& sal() const { return std::get<SalMixture>(model); }
  const GaussianMixture& gaussian() const { return std::get<GaussianMixture>(model); }
};

// The two fitting engines share the driver templates below; each provides
// the component density E-step, the closed-form M-step and random starts.
struct SalEngine {
  static constexpr ModelKind kind = ModelKind::sal;
  using Mixture = SalMixture;

  static EStepQuantities e_step(const Eigen::MatrixXd& X, const Mixture& m,
                                const EStepOptions& opt = {});
  // `sigma_floor` is a per-fit lower bound on the scale-matrix eigenvalues;
  // the covariance update is the exact maximizer over that constrained set,
  // which keeps EM ascent intact while blocking singular collapse.
  static Mixture m_step(const Eigen::MatrixXd& X, const EStepQuantities& e, const Mixture& prev,
                        const std::vector<bool>& frozen_mu, MStepMode mode = MStepMode::standard,
                        double sigma_floor = 0.0);
  static Mixture random_init(const Eigen::MatrixXd& X, int g, Rng& rng);
  // Freezes any component whose updated shift walked onto a datum
  // (min_i delta < abs_tol): the shift reverts to its previous value and the
  // skewness/scale are recomputed around it. Returns true if a freeze
  // happened this iteration.
  static bool degeneracy_guard(const Eigen::MatrixXd& X, Mixture& updated, const Mixture& prev,
                               const EStepQuantities& e, std::vector<bool>& frozen_mu,
                               double abs_tol, double sigma_floor = 0.0);
  // Annealing-only: components that collapsed onto a sibling (parameter
  // distance below tol_sq) get their shift re-seeded at a random observation,
  // since an exactly merged pair is a symmetric fixed point the tempered
  // updates can never split. Returns the number of re-seeded components.
  static int reseed_duplicates(const Eigen::MatrixXd& X, Mixture& mix, Rng& rng, double tol_sq);
};

struct GaussianEngine {
  static constexpr ModelKind kind = ModelKind::gaussian;
  using Mixture = GaussianMixture;

  static EStepQuantities e_step(const Eigen::MatrixXd& X, const Mixture& m,
                                const EStepOptions& opt = {});
  static Mixture m_step(const Eigen::MatrixXd& X, const EStepQuantities& e, const Mixture& prev,
                        const std::vector<bool>& frozen_mu, MStepMode mode = MStepMode::standard,
                        double sigma_floor = 0.0);
  static Mixture random_init(const Eigen::MatrixXd& X, int g, Rng& rng);
  static bool degeneracy_guard(const Eigen::MatrixXd&, Mixture&, const Mixture&,
                               const EStepQuantities&, std::vector<bool>&, double,
                               double = 0.0) {
    return false;  // the Gaussian likelihood has no shift-point singularity
  }
  static int reseed_duplicates(const Eigen::MatrixXd& X, Mixture& mix, Rng& rng, double tol_sq);
};

namespace detail {
std::string kind_name(ModelKind k);
}

// EM driver shared by both engines (and by the classification path, which
// passes pinned row labels). Alternates E and M steps until the Aitken rule
// fires or max_iter is reached.
template <class Engine>
FitReport fit_em_core(const DataSet& data, const FitConfig& cfg, typename Engine::Mixture init,
                      const std::vector<int>* pinned = nullptr) {
  const Eigen::MatrixXd& X = data.rows;
  const int n = data.n();
  const double med_sq = median_pairwise_sq_distance(X);
  const double degen_abs = cfg.degeneracy_tol * med_sq;
  const double sigma_floor = 1e-6 * med_sq;

  std::vector<bool> frozen(cfg.g, false);
  typename Engine::Mixture mix = std::move(init);
  std::vector<double> trace;
  FitStatus status = FitStatus::max_iter;

  EStepOptions opt;
  opt.pinned = pinned;

  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    EStepQuantities e = Engine::e_step(X, mix, opt);
    trace.push_back(e.log_lik);
    if (trace.size() >= 3 && aitken_converged(trace, cfg.epsilon)) {
      status = FitStatus::converged;
      break;
    }
    typename Engine::Mixture next = Engine::m_step(X, e, mix, frozen, MStepMode::standard,
                                                   sigma_floor);
    Engine::degeneracy_guard(X, next, mix, e, frozen, degen_abs, sigma_floor);
    mix = std::move(next);
  }

  EStepQuantities e = Engine::e_step(X, mix, opt);

  FitReport rep;
  rep.model_kind = detail::kind_name(Engine::kind);
  rep.g = cfg.g;
  rep.log_lik_trace = trace;
  rep.iterations = static_cast<int>(trace.size());
  rep.responsibilities = e.tau;
  rep.map_labels = map_labels(e.tau);
  for (int g = 0; g < cfg.g; ++g)
    if (frozen[g]) rep.frozen_components.push_back(g);
  rep.status = rep.frozen_components.empty() ? status : FitStatus::degenerate_frozen;
  rep.seed = cfg.seed;
  rep.config = cfg;

  std::vector<char> known;
  if (pinned) {
    known.resize(n);
    for (int i = 0; i < n; ++i) known[i] = (*pinned)[i] >= 0;
  }
  rep.score = score_model(e.log_lik, count_free_params(Engine::kind, cfg.g, data.p()), n, e.tau,
                          known.empty() ? nullptr : &known);
  if (data.has_labels()) rep.ari = rand_and_ari(data.labels, rep.map_labels).ari;
  rep.model = std::move(mix);
  return rep;
}

// Deterministic-annealing start selection: `restarts` random initializations,
// each run once through the v schedule with tempered responsibilities (and,
// for the SAL engine, E[1/W] capped at -ln(1-v)); the restart with the
// highest v=1 log-likelihood wins. Degenerate restarts are discarded (and
// reported through discarded_log when given).
template <class Engine>
typename Engine::Mixture anneal_init_core(const DataSet& data, const FitConfig& cfg,
                                          const std::vector<int>* pinned = nullptr,
                                          std::vector<std::string>* discarded_log = nullptr) {
  const Eigen::MatrixXd& X = data.rows;
  const double med_sq = median_pairwise_sq_distance(X);
  const double sigma_floor = 1e-6 * med_sq;
  const double dup_tol_sq = 1e-4 * med_sq;
  std::optional<typename Engine::Mixture> best;
  double best_ll = -std::numeric_limits<double>::infinity();
  const std::vector<bool> no_frozen(cfg.g, false);

  for (int r = 0; r < cfg.annealing.restarts; ++r) {
    Rng rng(derive_seed(cfg.seed, r));
    typename Engine::Mixture mix = Engine::random_init(X, cfg.g, rng);
    try {
      for (double v : cfg.annealing.v_values) {
        EStepOptions opt;
        opt.pinned = pinned;
        opt.v = v;
        opt.inv_w_cap = -std::log1p(-std::min(v, 1.0 - 1e-10));  // -ln(1-v), clamped
        EStepQuantities e = Engine::e_step(X, mix, opt);
        mix = Engine::m_step(X, e, mix, no_frozen, MStepMode::standard, sigma_floor);
        Engine::reseed_duplicates(X, mix, rng, dup_tol_sq);
      }
      EStepOptions opt;
      opt.pinned = pinned;
      const double ll = Engine::e_step(X, mix, opt).log_lik;
      if (ll > best_ll) {
        best_ll = ll;
        best = std::move(mix);
      }
    } catch (const FitError& err) {
      if (discarded_log)
        discarded_log->push_back("restart " + std::to_string(r) + " discarded: " + err.what());
    }
  }
  if (!best) throw FitError("anneal_init: all restarts degenerate");
  return *std::move(best);
}

// Convenience wrappers for the two engines.
FitReport fit_em(const DataSet& data, const FitConfig& cfg, SalMixture init);
SalMixture anneal_init(const DataSet& data, const FitConfig& cfg);
FitReport fit_gmm(const DataSet& data, const FitConfig& cfg, GaussianMixture init);
GaussianMixture anneal_init_gmm(const DataSet& data, const FitConfig& cfg);

}  // namespace salmix
