#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "salmix/dataset.hpp"
#include "salmix/em.hpp"
#include "salmix/report.hpp"
#include "salmix/semi_supervised.hpp"
#include "salmix/simulate.hpp"
#include "salmix/sweep.hpp"

namespace fs = std::filesystem;
using namespace salmix;

namespace {

std::vector<ModelKind> parse_models(const std::string& s) {
  if (s == "sal") return {ModelKind::sal};
  if (s == "gaussian") return {ModelKind::gaussian};
  if (s == "both") return {ModelKind::sal, ModelKind::gaussian};
  throw CLI::ValidationError("--model must be sal, gaussian, or both");
}

// Maps fitted parameters back to original units after --standardize.
void unstandardize_report(FitReport& rep, const Standardization& st) {
  const Eigen::MatrixXd d = st.scale.asDiagonal();
  if (rep.model_kind == "sal") {
    SalMixture m;
    m.weights = rep.sal().weights;
    for (const SalComponent& c : rep.sal().components)
      m.components.emplace_back((c.mu().array() * st.scale.array()).matrix() + st.mean,
                                (c.alpha().array() * st.scale.array()).matrix(),
                                d * c.sigma() * d);
    rep.model = std::move(m);
  } else {
    GaussianMixture m;
    m.weights = rep.gaussian().weights;
    for (const GaussianComponent& c : rep.gaussian().components)
      m.components.emplace_back((c.mu().array() * st.scale.array()).matrix() + st.mean,
                                d * c.sigma() * d);
    rep.model = std::move(m);
  }
}

std::string report_basename(const FitReport& rep) {
  return rep.model_kind + "_g" + std::to_string(rep.g);
}

void write_report_files(const fs::path& out_dir, const FitReport& rep) {
  fs::create_directories(out_dir);
  write_report((out_dir / (report_basename(rep) + ".json")).string(), rep);
  write_labels_csv((out_dir / (report_basename(rep) + "_labels.csv")).string(), rep);
}

void write_sweep_summary(const fs::path& out_dir, const SweepResult& result, bool use_bic) {
  nlohmann::json j;
  j["criterion"] = use_bic ? "bic" : "icl";
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& rep : result.reports) {
    fits.push_back({{"model_kind", rep.model_kind},
                    {"g", rep.g},
                    {"log_lik", rep.score.log_lik},
                    {"bic", rep.score.bic},
                    {"icl", rep.score.icl},
                    {"status", to_string(rep.status)},
                    {"report", report_basename(rep) + ".json"}});
  }
  j["fits"] = std::move(fits);
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : result.failures)
    fails.push_back({{"model_kind", f.model_kind}, {"g", f.g}, {"error", f.message}});
  j["failures"] = std::move(fails);
  if (result.best_index >= 0) {
    j["selected"] = {{"model_kind", result.best().model_kind}, {"g", result.best().g}};
  }
  std::ofstream out(out_dir / "sweep_summary.json");
  out << j.dump(2) << '\n';
}

int cmd_cluster(const std::string& input, const std::string& model, int g_min, int g_max,
                const std::string& criterion, double epsilon, int restarts, int anneal_steps,
                std::uint64_t seed, bool standardize, const std::string& out_dir) {
  DataSet data = read_csv(input);
  Standardization st;
  if (standardize) st = standardize_in_place(data);

  SweepOptions opt;
  opt.models = parse_models(model);
  opt.g_min = g_min;
  opt.g_max = g_max;
  opt.use_bic = criterion == "bic";
  opt.base.epsilon = epsilon;
  opt.base.annealing = AnnealingSchedule::linear(anneal_steps, restarts);
  opt.base.seed = seed;

  SweepResult result = run_sweep(data, opt);
  for (FitReport& rep : result.reports) {
    if (standardize) unstandardize_report(rep, st);
    write_report_files(out_dir, rep);
  }
  write_sweep_summary(out_dir, result, opt.use_bic);
  for (const auto& f : result.failures)
    std::cerr << "fit failed: " << f.model_kind << " g=" << f.g << ": " << f.message << '\n';
  if (result.best_index < 0) {
    std::cerr << "all fits failed\n";
    return 1;
  }
  const FitReport& best = result.best();
  std::cout << "selected " << best.model_kind << " g=" << best.g
            << " (icl=" << best.score.icl << ", bic=" << best.score.bic << ")\n";
  return 0;
}

int cmd_classify(const std::string& input, const std::string& model, int g, int h, double epsilon,
                 int restarts, int anneal_steps, std::uint64_t seed, const std::string& out_dir) {
  DataSet data = read_csv(input);
  if (!data.has_known_mask())
    throw std::runtime_error("classify requires a `known` column in the input CSV");

  ClassificationTask task;
  task.data = data;
  task.g = g;
  task.h = h;
  FitConfig cfg;
  cfg.epsilon = epsilon;
  cfg.annealing = AnnealingSchedule::linear(anneal_steps, restarts);
  cfg.seed = seed;

  const ModelKind kind = model == "gaussian" ? ModelKind::gaussian : ModelKind::sal;
  FitReport rep = fit_classifier(task, cfg, kind);

  // Held-out ARI over the unlabeled rows when their true labels are present.
  if (data.has_labels()) {
    std::vector<int> truth, pred;
    for (int i = 0; i < data.n(); ++i) {
      if (data.known_mask[i]) continue;
      truth.push_back(data.labels[i]);
      pred.push_back(rep.map_labels[i]);
    }
    if (truth.size() >= 2) rep.ari = rand_and_ari(truth, pred).ari;
  }

  write_report_files(out_dir, rep);
  std::cout << "classify " << rep.model_kind << " g=" << g << " h=" << (h > 0 ? h : g)
            << " status=" << to_string(rep.status);
  if (rep.ari) std::cout << " held_out_ari=" << *rep.ari;
  std::cout << '\n';
  return 0;
}

int cmd_simulate(bool paper, int n, int g, int p, int datasets, std::uint64_t seed,
                 const std::string& out_dir) {
  SimulationSpec spec;
  if (paper) {
    spec = paper_sim_spec(seed);
    spec.datasets = datasets;
  } else {
    SalMixture m;
    m.weights = Eigen::VectorXd::Constant(g, 1.0 / g);
    for (int c = 0; c < g; ++c) {
      Eigen::VectorXd mu = Eigen::VectorXd::Zero(p);
      mu(0) = 5.0 * c;
      m.components.emplace_back(mu, Eigen::VectorXd::Ones(p), Eigen::MatrixXd::Identity(p, p));
    }
    spec.mixture = std::move(m);
    spec.n = n;
    spec.datasets = datasets;
    spec.seed = seed;
  }
  fs::create_directories(out_dir);
  const auto sets = generate(spec);
  for (size_t d = 0; d < sets.size(); ++d) {
    const std::string path =
        (fs::path(out_dir) / ("dataset_" + std::to_string(d + 1) + ".csv")).string();
    write_csv(path, sets[d].data);
    std::cout << path << '\n';
  }
  return 0;
}

int cmd_density_grid(const std::string& report_path, double x_min, double x_max, double y_min,
                     double y_max, int resolution, const std::string& out_path) {
  FitReport rep = read_report(report_path);
  int p = rep.model_kind == "sal" ? rep.sal().p() : rep.gaussian().p();
  if (p != 2) throw UnsupportedDimension("density-grid requires a 2-dimensional model");
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out.precision(17);
  out << "x,y,density\n";
  Eigen::VectorXd pt(2);
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      pt(0) = x_min + (x_max - x_min) * (i + 0.5) / resolution;
      pt(1) = y_min + (y_max - y_min) * (j + 0.5) / resolution;
      out << pt(0) << ',' << pt(1) << ',' << std::exp(report_log_density(rep, pt)) << '\n';
    }
  }
  return 0;
}

int cmd_repro_sim(std::uint64_t seed, int datasets, const std::string& out_dir) {
  SimulationSpec spec = paper_sim_spec(seed);
  spec.datasets = datasets;
  const auto sets = generate(spec);

  struct Row {
    int sal_g = 0, gmm_g = 0;
    double sal_ari = 0, gmm_ari = 0;
  };
  std::vector<Row> rows(sets.size());
  parallel_for(static_cast<int>(sets.size()), [&](int d) {
    SweepOptions opt;
    opt.models = {ModelKind::sal, ModelKind::gaussian};
    opt.g_min = 1;
    opt.g_max = 7;
    opt.base.seed = derive_seed(seed, 1000 + d);
    // run with threads at the dataset level only
    SweepResult res = run_sweep(sets[d].data, opt);
    const int si = best_of_kind(res, ModelKind::sal, false);
    const int gi = best_of_kind(res, ModelKind::gaussian, false);
    if (si >= 0) {
      rows[d].sal_g = res.reports[si].g;
      rows[d].sal_ari = rand_and_ari(sets[d].labels, res.reports[si].map_labels).ari;
    }
    if (gi >= 0) {
      rows[d].gmm_g = res.reports[gi].g;
      rows[d].gmm_ari = rand_and_ari(sets[d].labels, res.reports[gi].map_labels).ari;
    }
  });

  int sal_g2 = 0, gmm_g2 = 0;
  double sal_sum = 0, gmm_sum = 0, sal_sq = 0, gmm_sq = 0;
  for (const Row& r : rows) {
    sal_g2 += r.sal_g == 2;
    gmm_g2 += r.gmm_g == 2;
    sal_sum += r.sal_ari;
    gmm_sum += r.gmm_ari;
    sal_sq += r.sal_ari * r.sal_ari;
    gmm_sq += r.gmm_ari * r.gmm_ari;
  }
  const int nd = static_cast<int>(rows.size());
  auto sd = [&](double sum, double sq) {
    const double mean = sum / nd;
    return std::sqrt(std::max(0.0, sq / nd - mean * mean));
  };
  std::printf("Model     | G=2 selected | Average ARI (std. dev.)\n");
  std::printf("SAL       | %3.0f%%         | %.4f (%.5f)\n", 100.0 * sal_g2 / nd, sal_sum / nd,
              sd(sal_sum, sal_sq));
  std::printf("Gaussian  | %3.0f%%         | %.4f (%.5f)\n", 100.0 * gmm_g2 / nd, gmm_sum / nd,
              sd(gmm_sum, gmm_sq));

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    nlohmann::json j = nlohmann::json::array();
    for (const Row& r : rows)
      j.push_back({{"sal_g", r.sal_g},
                   {"sal_ari", r.sal_ari},
                   {"gaussian_g", r.gmm_g},
                   {"gaussian_ari", r.gmm_ari}});
    std::ofstream out(fs::path(out_dir) / "repro_sim.json");
    out << j.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixtures of shifted asymmetric Laplace distributions for clustering and classification"};
  app.require_subcommand(1);

  // cluster
  std::string input, model = "sal", criterion = "icl", out_dir = "salmix_out";
  int g_min = 1, g_max = 5, restarts = 10, anneal_steps = 25;
  double epsilon = 1e-5;
  std::uint64_t seed = 0;
  bool standardize = false;
  auto* cluster = app.add_subcommand("cluster", "Model-based clustering with a G sweep");
  cluster->add_option("--input", input, "input CSV")->required();
  cluster->add_option("--model", model, "sal | gaussian | both");
  cluster->add_option("--g-min", g_min);
  cluster->add_option("--g-max", g_max);
  cluster->add_option("--criterion", criterion, "icl | bic");
  cluster->add_option("--epsilon", epsilon);
  cluster->add_option("--restarts", restarts);
  cluster->add_option("--anneal-steps", anneal_steps);
  cluster->add_option("--seed", seed)->required();
  cluster->add_flag("--standardize", standardize);
  cluster->add_option("--out-dir", out_dir);

  // classify
  std::string c_input, c_model = "sal", c_out = "salmix_out";
  int c_g = 2, c_h = 0, c_restarts = 10, c_steps = 25;
  double c_eps = 1e-5;
  std::uint64_t c_seed = 0;
  auto* classify = app.add_subcommand("classify", "Semi-supervised classification");
  // --help only: the default -h short flag would collide with the --h option
  classify->set_help_flag("--help", "print help and exit");
  classify->add_option("--input", c_input, "CSV with label and known columns")->required();
  classify->add_option("--model", c_model, "sal | gaussian");
  classify->add_option("--g", c_g, "labeled classes");
  classify->add_option("--h", c_h, "total components (>= g; 0 = g)");
  classify->add_option("--epsilon", c_eps);
  classify->add_option("--restarts", c_restarts);
  classify->add_option("--anneal-steps", c_steps);
  classify->add_option("--seed", c_seed)->required();
  classify->add_option("--out-dir", c_out);

  // simulate
  bool s_paper = false;
  int s_n = 500, s_g = 2, s_p = 2, s_datasets = 1;
  std::uint64_t s_seed = 0;
  std::string s_out = "salmix_data";
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic mixture datasets");
  simulate->add_flag("--paper", s_paper, "use the published simulation design");
  simulate->add_option("--n", s_n);
  simulate->add_option("--g", s_g);
  simulate->add_option("--p", s_p);
  simulate->add_option("--datasets", s_datasets);
  simulate->add_option("--seed", s_seed)->required();
  simulate->add_option("--out-dir", s_out);

  // density-grid
  std::string d_report, d_out = "grid.csv";
  double d_xmin = -1, d_xmax = 1, d_ymin = -1, d_ymax = 1;
  int d_res = 100;
  auto* grid = app.add_subcommand("density-grid", "Export a fitted density on a 2-D grid");
  grid->add_option("--report", d_report, "fit report JSON")->required();
  grid->add_option("--x-min", d_xmin);
  grid->add_option("--x-max", d_xmax);
  grid->add_option("--y-min", d_ymin);
  grid->add_option("--y-max", d_ymax);
  grid->add_option("--resolution", d_res);
  grid->add_option("--out", d_out);

  // repro-sim
  std::uint64_t r_seed = 7;
  int r_datasets = 25;
  std::string r_out;
  auto* repro = app.add_subcommand("repro-sim", "Run the simulation study and print its summary");
  repro->add_option("--seed", r_seed);
  repro->add_option("--datasets", r_datasets);
  repro->add_option("--out-dir", r_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster->parsed())
      return cmd_cluster(input, model, g_min, g_max, criterion, epsilon, restarts, anneal_steps,
                         seed, standardize, out_dir);
    if (classify->parsed())
      return cmd_classify(c_input, c_model, c_g, c_h, c_eps, c_restarts, c_steps, c_seed, c_out);
    if (simulate->parsed())
      return cmd_simulate(s_paper, s_n, s_g, s_p, s_datasets, s_seed, s_out);
    if (grid->parsed())
      return cmd_density_grid(d_report, d_xmin, d_xmax, d_ymin, d_ymax, d_res, d_out);
    if (repro->parsed()) return cmd_repro_sim(r_seed, r_datasets, r_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
