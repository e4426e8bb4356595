#include "salmix/em.hpp"

#include <cmath>

#include "salmix/special_math.hpp"

namespace salmix {

AnnealingSchedule AnnealingSchedule::linear(int steps, int restarts) {
  AnnealingSchedule s;
  s.v_values.resize(steps);
  for (int i = 0; i < steps; ++i) s.v_values[i] = static_cast<double>(i + 1) / steps;
  s.restarts = restarts;
  return s;
}

bool aitken_converged(const std::vector<double>& trace, double eps, AitkenState* out) {
  const size_t k = trace.size();
  if (k < 3) return false;
  AitkenState s;
  s.l_prev2 = trace[k - 3];
  s.l_prev = trace[k - 2];
  s.l_curr = trace[k - 1];
  const double denom = s.l_prev - s.l_prev2;
  s.a_k = denom != 0.0 ? (s.l_curr - s.l_prev) / denom : std::numeric_limits<double>::quiet_NaN();
  bool conv;
  if (std::isfinite(s.a_k) && s.a_k > 0.0 && s.a_k < 1.0) {
    s.used_acceleration = true;
    s.l_inf = s.l_prev + (s.l_curr - s.l_prev) / (1.0 - s.a_k);
    conv = (s.l_inf - s.l_prev) < eps;
  } else {
    s.used_acceleration = false;
    s.l_inf = s.l_curr;
    conv = std::fabs(s.l_curr - s.l_prev) < eps;
  }
  if (out) *out = s;
  return conv;
}

std::string to_string(FitStatus s) {
  switch (s) {
    case FitStatus::converged: return "converged";
    case FitStatus::max_iter: return "max_iter";
    case FitStatus::degenerate_frozen: return "degenerate_frozen";
  }
  return "unknown";
}

namespace detail {
std::string kind_name(ModelKind k) { return k == ModelKind::sal ? "sal" : "gaussian"; }
}

namespace {

constexpr double kShiftTol = 1e-300;

// Symmetrize and clip the eigenvalues from below at `floor`. For the
// per-component objective -n_g/2 [ln|Sigma| + tr(Sigma^-1 M)] clipping the
// eigenvalues of the unconstrained maximizer M at the floor is the *exact*
// maximizer over {Sigma : lambda_min >= floor}, so as long as every iterate
// respects the same floor the EM ascent property is preserved. The floor also
// bounds the condition number, which keeps the likelihood evaluation well
// away from the singular spikes a collapsing component would otherwise ride.
Eigen::MatrixXd repair_spd(Eigen::MatrixXd s, int g, double floor) {
  s = 0.5 * (s + s.transpose()).eval();
  if (!s.allFinite()) throw CovarianceRepairFailed(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const Eigen::VectorXd& ev = es.eigenvalues();
  // Callers without a data-scale floor still get a relative one.
  const double f = std::max(floor, 1e-12 * std::fabs(ev.maxCoeff()));
  if (!(f > 0.0) || !std::isfinite(f)) throw CovarianceRepairFailed(g);
  if (ev.minCoeff() >= f) return s;
  const Eigen::VectorXd clipped = ev.cwiseMax(f);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

double soft_count_floor(int p) { return std::max(p + 1, 2); }

// Tempered responsibilities and log-likelihood from a matrix of
// ln pi_g + ln f_g(x_i); pinned rows stay one-hot. The log-likelihood is
// always the untempered one.
void finalize_estep(const Eigen::MatrixXd& logdens, const EStepOptions& opt, EStepQuantities& e) {
  const int n = static_cast<int>(logdens.rows());
  const int G = static_cast<int>(logdens.cols());
  e.tau.resize(n, G);
  e.log_lik = 0.0;
  for (int i = 0; i < n; ++i) {
    if (opt.pinned && (*opt.pinned)[i] >= 0) {
      const int g0 = (*opt.pinned)[i];
      e.tau.row(i).setZero();
      e.tau(i, g0) = 1.0;
      e.log_lik += logdens(i, g0);
      continue;
    }
    const double mx = logdens.row(i).maxCoeff();
    e.log_lik += mx + std::log((logdens.row(i).array() - mx).exp().sum());
    const Eigen::ArrayXd scaled = opt.v * logdens.row(i).transpose().array();
    const double mxv = scaled.maxCoeff();
    const Eigen::ArrayXd w = (scaled - mxv).exp();
    e.tau.row(i) = (w / w.sum()).transpose();
  }
}

// Shared random start: Dirichlet(1) weights, shifts at distinct observations
// (with a small jitter keeping the SAL density finite there), diagonal
// sample covariance. Stream order: G exponentials, G row indices, G*p jitter
// normals.
void random_start_params(const Eigen::MatrixXd& X, int g, Rng& rng, Eigen::VectorXd& weights,
                         std::vector<Eigen::VectorXd>& mus, Eigen::MatrixXd& sigma) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());

  weights.resize(g);
  for (int j = 0; j < g; ++j) weights(j) = rng.exponential();
  weights /= weights.sum();

  std::vector<int> picked;
  while (static_cast<int>(picked.size()) < g) {
    const int idx = static_cast<int>(rng.below(n));
    bool dup = false;
    for (int q : picked) dup = dup || q == idx;
    if (!dup || static_cast<int>(picked.size()) >= n) picked.push_back(idx);
  }

  const Eigen::RowVectorXd mean = X.colwise().mean();
  Eigen::VectorXd var(p);
  for (int j = 0; j < p; ++j)
    var(j) = (X.col(j).array() - mean(j)).square().sum() / std::max(1, n - 1);
  for (int j = 0; j < p; ++j)
    if (var(j) <= 0.0) var(j) = 1.0;

  mus.clear();
  for (int j = 0; j < g; ++j) {
    Eigen::VectorXd mu = X.row(picked[j]).transpose();
    for (int d = 0; d < p; ++d) mu(d) += 1e-4 * std::sqrt(var(d)) * rng.normal();
    mus.push_back(std::move(mu));
  }
  sigma = var.asDiagonal();
}

// Fresh shift for a component that collapsed onto a sibling during annealing:
// a random observation plus the same scale-aware jitter the random start uses.
Eigen::VectorXd reseed_mu(const Eigen::MatrixXd& X, Rng& rng) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  Eigen::VectorXd mu = X.row(static_cast<int>(rng.below(n))).transpose();
  const Eigen::RowVectorXd mean = X.colwise().mean();
  for (int d = 0; d < p; ++d) {
    double var = (X.col(d).array() - mean(d)).square().sum() / std::max(1, n - 1);
    if (var <= 0.0) var = 1.0;
    mu(d) += 1e-4 * std::sqrt(var) * rng.normal();
  }
  return mu;
}

}  // namespace

// ---------------------------------------------------------------------------
// SAL engine

EStepQuantities SalEngine::e_step(const Eigen::MatrixXd& X, const Mixture& m,
                                  const EStepOptions& opt) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  const int G = m.g();
  EStepQuantities e;
  e.e_w.resize(n, G);
  e.e_inv_w.resize(n, G);
  Eigen::MatrixXd logdens(n, G);

  const double log2pi_term = 0.5 * p * std::log(2.0 * M_PI);
  for (int g = 0; g < G; ++g) {
    const SalComponent& c = m.components[g];
    const double lw = std::log(m.weights(g));
    const double a = 2.0 + c.quad_alpha();
    const double log_a = std::log(a);
    for (int i = 0; i < n; ++i) {
      const EvaluationTerms t = evaluate_terms(X.row(i).transpose(), c);
      if (t.delta < kShiftTol) throw AtShiftPoint();
      const double log_k_nu = log_bessel_k(t.nu, t.u);
      logdens(i, g) = lw + M_LN2 + t.dot_term - log2pi_term - 0.5 * c.log_det_sigma() +
                      0.5 * t.nu * (std::log(t.delta) - log_a) + log_k_nu;
      // GIG posterior of W: the Bessel argument sqrt(a b) equals u, so the
      // density evaluation above is reused for the moment ratio.
      const double log_ratio = log_bessel_k(t.nu + 1.0, t.u) - log_k_nu;
      const double r = std::exp(log_ratio);
      // Capping E[1/W] at c amounts to treating W as bounded below by 1/c,
      // which dually bounds E[W] from below by 1/c. Capping only one side
      // would break the pointwise inequality E[W] E[1/W] >= 1 that keeps the
      // scale-matrix update positive semi-definite, so the pair is capped
      // together. (The cap is infinite outside annealing.)
      e.e_w(i, g) = std::max(std::sqrt(t.delta / a) * r, 1.0 / opt.inv_w_cap);
      const double inv_w = std::sqrt(a / t.delta) * r - 2.0 * t.nu / t.delta;
      e.e_inv_w(i, g) = std::min(inv_w, opt.inv_w_cap);
    }
  }
  finalize_estep(logdens, opt, e);
  return e;
}

SalMixture SalEngine::m_step(const Eigen::MatrixXd& X, const EStepQuantities& e,
                             const Mixture& prev, const std::vector<bool>& frozen_mu,
                             MStepMode mode, double sigma_floor) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  const int G = static_cast<int>(e.tau.cols());

  SalMixture out;
  out.weights.resize(G);
  for (int g = 0; g < G; ++g) {
    const Eigen::ArrayXd tau = e.tau.col(g).array();
    const double n_g = tau.sum();
    if (n_g < soft_count_floor(p)) throw EmptyComponent(g, n_g);
    const Eigen::ArrayXd tw = tau * e.e_w.col(g).array();
    const Eigen::ArrayXd ti = tau * e.e_inv_w.col(g).array();
    const double sum_tw = tw.sum();      // sum_i tau E[W]
    const double sum_ti = ti.sum();      // sum_i tau E[1/W]
    const Eigen::VectorXd x_t = X.transpose() * tau.matrix();   // sum tau x
    const Eigen::VectorXd x_ti = X.transpose() * ti.matrix();   // sum tau E[1/W] x

    Eigen::VectorXd mu(p), alpha(p);
    if (frozen_mu[g]) {
      mu = prev.components[g].mu();
      alpha = (x_t - n_g * mu) / sum_tw;  // alpha* update with the frozen shift
    } else if (mode == MStepMode::alpha_zero) {
      alpha.setZero();
      mu = x_ti / sum_ti;
    } else {
      const double denom = sum_tw * sum_ti - n_g * n_g;
      if (denom <= 0.05 * (sum_tw * sum_ti + n_g * n_g)) {
        // Cauchy-Schwarz puts sum_tw sum_ti >= n_g^2 with equality when the
        // W moments carry no skewness information (constant E[W], e.g. under
        // a binding annealing cap); a capped E[1/W] can even push the product
        // below n_g^2, making the paired ratio system indefinite. Near or
        // past that point its solutions are saddles that blow up. Keeping the
        // previous shift and skewness is the safe generalized-EM move: the
        // scale and weight updates below still maximize given them, so the
        // ascent property is untouched.
        mu = prev.components[g].mu();
        alpha = prev.components[g].alpha();
      } else {
        alpha = (sum_ti * x_t - n_g * x_ti) / denom;
        mu = (sum_tw * x_ti - n_g * x_t) / denom;
      }
    }

    const Eigen::MatrixXd centered = X.rowwise() - mu.transpose();
    const Eigen::MatrixXd s_g =
        (centered.array().colwise() * ti).matrix().transpose() * centered / n_g;
    const Eigen::VectorXd r_g = centered.transpose() * tau.matrix() / n_g;
    Eigen::MatrixXd sigma = s_g - alpha * r_g.transpose() - r_g * alpha.transpose() +
                            (sum_tw / n_g) * (alpha * alpha.transpose());
    sigma = repair_spd(std::move(sigma), g, sigma_floor);

    out.weights(g) = n_g / n;
    out.components.emplace_back(std::move(mu), std::move(alpha), std::move(sigma));
  }
  return out;
}

SalMixture SalEngine::random_init(const Eigen::MatrixXd& X, int g, Rng& rng) {
  Eigen::VectorXd weights;
  std::vector<Eigen::VectorXd> mus;
  Eigen::MatrixXd sigma;
  random_start_params(X, g, rng, weights, mus, sigma);
  SalMixture m;
  m.weights = weights;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(X.cols());
  for (int j = 0; j < g; ++j) m.components.emplace_back(mus[j], zero, sigma);
  return m;
}

int SalEngine::reseed_duplicates(const Eigen::MatrixXd& X, Mixture& mix, Rng& rng,
                                 double tol_sq) {
  // Under flat tempered responsibilities the one-pass-per-v annealing updates
  // can drive two components onto identical parameters; once exactly merged
  // they form a symmetric fixed point and can never separate again. Re-seeding
  // the duplicate's shift restores the diversity the restart started with.
  int reseeded = 0;
  const int G = mix.g();
  for (int a = 0; a < G; ++a)
    for (int b = a + 1; b < G; ++b) {
      const double d2 = (mix.components[a].mu() - mix.components[b].mu()).squaredNorm() +
                        (mix.components[a].alpha() - mix.components[b].alpha()).squaredNorm();
      if (d2 >= tol_sq) continue;
      mix.components[b] = SalComponent(reseed_mu(X, rng),
                                       Eigen::VectorXd::Zero(X.cols()),
                                       mix.components[b].sigma());
      ++reseeded;
    }
  return reseeded;
}

bool SalEngine::degeneracy_guard(const Eigen::MatrixXd& X, Mixture& updated, const Mixture& prev,
                                 const EStepQuantities& e, std::vector<bool>& frozen_mu,
                                 double abs_tol, double sigma_floor) {
  const int n = static_cast<int>(X.rows());
  const int G = updated.g();
  bool any = false;
  for (int g = 0; g < G; ++g) {
    if (frozen_mu[g]) continue;
    double min_delta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      min_delta = std::min(min_delta, updated.components[g].delta(X.row(i).transpose()));
    if (min_delta >= abs_tol) continue;

    // Revert to the previous shift and redo this component's update around it.
    frozen_mu[g] = true;
    any = true;
    const Eigen::ArrayXd tau = e.tau.col(g).array();
    const double n_g = tau.sum();
    const double sum_tw = (tau * e.e_w.col(g).array()).sum();
    const Eigen::ArrayXd ti = tau * e.e_inv_w.col(g).array();
    const Eigen::VectorXd mu = prev.components[g].mu();
    const Eigen::VectorXd alpha = (X.transpose() * tau.matrix() - n_g * mu) / sum_tw;
    const Eigen::MatrixXd centered = X.rowwise() - mu.transpose();
    const Eigen::MatrixXd s_g =
        (centered.array().colwise() * ti).matrix().transpose() * centered / n_g;
    const Eigen::VectorXd r_g = centered.transpose() * tau.matrix() / n_g;
    Eigen::MatrixXd sigma = s_g - alpha * r_g.transpose() - r_g * alpha.transpose() +
                            (sum_tw / n_g) * (alpha * alpha.transpose());
    sigma = repair_spd(std::move(sigma), g, sigma_floor);
    updated.components[g] = SalComponent(mu, alpha, std::move(sigma));
  }
  return any;
}

// ---------------------------------------------------------------------------
// Gaussian engine

EStepQuantities GaussianEngine::e_step(const Eigen::MatrixXd& X, const Mixture& m,
                                       const EStepOptions& opt) {
  const int n = static_cast<int>(X.rows());
  const int G = m.g();
  EStepQuantities e;
  Eigen::MatrixXd logdens(n, G);
  for (int g = 0; g < G; ++g) {
    const double lw = std::log(m.weights(g));
    for (int i = 0; i < n; ++i)
      logdens(i, g) = lw + gaussian_log_density(X.row(i).transpose(), m.components[g]);
  }
  finalize_estep(logdens, opt, e);
  return e;
}

GaussianMixture GaussianEngine::m_step(const Eigen::MatrixXd& X, const EStepQuantities& e,
                                       const Mixture&, const std::vector<bool>&, MStepMode,
                                       double sigma_floor) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  const int G = static_cast<int>(e.tau.cols());
  GaussianMixture out;
  out.weights.resize(G);
  for (int g = 0; g < G; ++g) {
    const Eigen::ArrayXd tau = e.tau.col(g).array();
    const double n_g = tau.sum();
    if (n_g < soft_count_floor(p)) throw EmptyComponent(g, n_g);
    const Eigen::VectorXd mu = X.transpose() * tau.matrix() / n_g;
    const Eigen::MatrixXd centered = X.rowwise() - mu.transpose();
    Eigen::MatrixXd sigma =
        (centered.array().colwise() * tau).matrix().transpose() * centered / n_g;
    sigma = repair_spd(std::move(sigma), g, sigma_floor);
    out.weights(g) = n_g / n;
    out.components.emplace_back(mu, std::move(sigma));
  }
  return out;
}

int GaussianEngine::reseed_duplicates(const Eigen::MatrixXd& X, Mixture& mix, Rng& rng,
                                      double tol_sq) {
  int reseeded = 0;
  const int G = mix.g();
  for (int a = 0; a < G; ++a)
    for (int b = a + 1; b < G; ++b) {
      if ((mix.components[a].mu() - mix.components[b].mu()).squaredNorm() >= tol_sq) continue;
      mix.components[b] = GaussianComponent(reseed_mu(X, rng), mix.components[b].sigma());
      ++reseeded;
    }
  return reseeded;
}

GaussianMixture GaussianEngine::random_init(const Eigen::MatrixXd& X, int g, Rng& rng) {
  Eigen::VectorXd weights;
  std::vector<Eigen::VectorXd> mus;
  Eigen::MatrixXd sigma;
  random_start_params(X, g, rng, weights, mus, sigma);
  GaussianMixture m;
  m.weights = weights;
  for (int j = 0; j < g; ++j) m.components.emplace_back(mus[j], sigma);
  return m;
}

// ---------------------------------------------------------------------------

FitReport fit_em(const DataSet& data, const FitConfig& cfg, SalMixture init) {
  return fit_em_core<SalEngine>(data, cfg, std::move(init));
}

SalMixture anneal_init(const DataSet& data, const FitConfig& cfg) {
  return anneal_init_core<SalEngine>(data, cfg);
}

FitReport fit_gmm(const DataSet& data, const FitConfig& cfg, GaussianMixture init) {
  return fit_em_core<GaussianEngine>(data, cfg, std::move(init));
}

GaussianMixture anneal_init_gmm(const DataSet& data, const FitConfig& cfg) {
  return anneal_init_core<GaussianEngine>(data, cfg);
}

}  // namespace salmix
