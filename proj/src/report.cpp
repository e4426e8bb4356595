#include "salmix/report.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace salmix {

using nlohmann::json;

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
  return v;
}

// Matrices are stored row-major with explicit dimensions.
json mat_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd mat_from_json(const json& j) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const auto& data = j.at("data");
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = data[i * cols + c].get<double>();
  return m;
}

FitStatus status_from_string(const std::string& s) {
  if (s == "converged") return FitStatus::converged;
  if (s == "max_iter") return FitStatus::max_iter;
  if (s == "degenerate_frozen") return FitStatus::degenerate_frozen;
  throw std::invalid_argument("unknown fit status: " + s);
}

}  // namespace

json report_to_json(const FitReport& rep) {
  json j;
  j["model_kind"] = rep.model_kind;
  j["g"] = rep.g;
  json comps = json::array();
  if (rep.model_kind == "sal") {
    const SalMixture& m = rep.sal();
    j["weights"] = vec_to_json(m.weights);
    for (const SalComponent& c : m.components)
      comps.push_back(json{{"mu", vec_to_json(c.mu())},
                           {"alpha", vec_to_json(c.alpha())},
                           {"sigma", mat_to_json(c.sigma())}});
  } else {
    const GaussianMixture& m = rep.gaussian();
    j["weights"] = vec_to_json(m.weights);
    for (const GaussianComponent& c : m.components)
      comps.push_back(json{{"mu", vec_to_json(c.mu())}, {"sigma", mat_to_json(c.sigma())}});
  }
  j["components"] = std::move(comps);
  j["log_lik_trace"] = rep.log_lik_trace;
  j["score"] = json{{"log_lik", rep.score.log_lik},
                    {"free_params", rep.score.free_params},
                    {"bic", rep.score.bic},
                    {"icl", rep.score.icl},
                    {"entropy_term", rep.score.entropy_term}};
  j["map_labels"] = rep.map_labels;
  j["responsibilities"] = mat_to_json(rep.responsibilities);
  if (rep.ari)
    j["ari"] = *rep.ari;
  else
    j["ari"] = nullptr;
  j["status"] = to_string(rep.status);
  j["frozen_components"] = rep.frozen_components;
  j["iterations"] = rep.iterations;
  j["seed"] = rep.seed;
  j["config"] = json{{"g", rep.config.g},
                     {"epsilon", rep.config.epsilon},
                     {"max_iter", rep.config.max_iter},
                     {"v_values", rep.config.annealing.v_values},
                     {"restarts", rep.config.annealing.restarts},
                     {"seed", rep.config.seed},
                     {"degeneracy_tol", rep.config.degeneracy_tol}};
  return j;
}

FitReport report_from_json(const json& j) {
  FitReport rep;
  rep.model_kind = j.at("model_kind").get<std::string>();
  rep.g = j.at("g").get<int>();
  const Eigen::VectorXd weights = vec_from_json(j.at("weights"));
  if (rep.model_kind == "sal") {
    SalMixture m;
    m.weights = weights;
    for (const auto& c : j.at("components"))
      m.components.emplace_back(vec_from_json(c.at("mu")), vec_from_json(c.at("alpha")),
                                mat_from_json(c.at("sigma")));
    rep.model = std::move(m);
  } else {
    GaussianMixture m;
    m.weights = weights;
    for (const auto& c : j.at("components"))
      m.components.emplace_back(vec_from_json(c.at("mu")), mat_from_json(c.at("sigma")));
    rep.model = std::move(m);
  }
  rep.log_lik_trace = j.at("log_lik_trace").get<std::vector<double>>();
  const auto& s = j.at("score");
  rep.score.log_lik = s.at("log_lik").get<double>();
  rep.score.free_params = s.at("free_params").get<int>();
  rep.score.bic = s.at("bic").get<double>();
  rep.score.icl = s.at("icl").get<double>();
  rep.score.entropy_term = s.at("entropy_term").get<double>();
  rep.map_labels = j.at("map_labels").get<std::vector<int>>();
  rep.responsibilities = mat_from_json(j.at("responsibilities"));
  if (!j.at("ari").is_null()) rep.ari = j.at("ari").get<double>();
  rep.status = status_from_string(j.at("status").get<std::string>());
  rep.frozen_components = j.at("frozen_components").get<std::vector<int>>();
  rep.iterations = j.at("iterations").get<int>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  const auto& c = j.at("config");
  rep.config.g = c.at("g").get<int>();
  rep.config.epsilon = c.at("epsilon").get<double>();
  rep.config.max_iter = c.at("max_iter").get<int>();
  rep.config.annealing.v_values = c.at("v_values").get<std::vector<double>>();
  rep.config.annealing.restarts = c.at("restarts").get<int>();
  rep.config.seed = c.at("seed").get<std::uint64_t>();
  rep.config.degeneracy_tol = c.at("degeneracy_tol").get<double>();
  return rep;
}

void write_report(const std::string& path, const FitReport& rep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report_to_json(rep).dump(2) << '\n';
}

FitReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return report_from_json(j);
}

void write_labels_csv(const std::string& path, const FitReport& rep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "row_id,map_label";
  for (int g = 1; g <= rep.g; ++g) out << ",tau_" << g;
  out << '\n';
  for (int i = 0; i < rep.responsibilities.rows(); ++i) {
    out << i + 1 << ',' << rep.map_labels[i];
    for (int g = 0; g < rep.g; ++g) out << ',' << rep.responsibilities(i, g);
    out << '\n';
  }
}

double report_log_density(const FitReport& rep, const Eigen::VectorXd& x) {
  if (rep.model_kind == "sal") return sal_mixture_log_density(x, rep.sal());
  return gaussian_mixture_log_density(x, rep.gaussian());
}

}  // namespace salmix
