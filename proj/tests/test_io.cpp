#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "salmix/dataset.hpp"
#include "salmix/report.hpp"
#include "salmix/simulate.hpp"
#include "salmix/sweep.hpp"

using namespace salmix;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("salmix_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

DataSet small_data(std::uint64_t seed) {
  SimulationSpec spec = paper_sim_spec(seed);
  spec.datasets = 1;
  spec.n = 200;
  return generate(spec)[0].data;
}

}  // namespace

TEST_CASE("csv round trip preserves values, labels and known flags") {
  TempDir tmp;
  DataSet d = small_data(5);
  d.known_mask.assign(d.n(), 0);
  for (int i = 0; i < d.n(); i += 3) d.known_mask[i] = 1;
  const std::string path = tmp.file("data.csv");
  write_csv(path, d);

  const DataSet back = read_csv(path);
  REQUIRE(back.n() == d.n());
  REQUIRE(back.p() == d.p());
  CHECK(back.column_names == d.column_names);
  CHECK(back.labels == d.labels);
  CHECK(back.known_mask == d.known_mask);
  CHECK((back.rows - d.rows).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("csv parser reports the offending line") {
  TempDir tmp;
  const std::string path = tmp.file("bad.csv");

  SUBCASE("ragged row") {
    write_text(path, "a,b\n1,2\n3\n4,5\n");
    try {
      read_csv(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number == 3);
    }
  }
  SUBCASE("non-numeric field") {
    write_text(path, "a,b\n1,2\n3,oops\n");
    try {
      read_csv(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number == 3);
    }
  }
  SUBCASE("non-finite value") {
    write_text(path, "a,b\n1,2\nnan,4\n");
    CHECK_THROWS_AS(read_csv(path), ParseError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(read_csv(tmp.file("nope.csv")), ParseError); }
  SUBCASE("empty file") {
    write_text(path, "");
    CHECK_THROWS_AS(read_csv(path), ParseError);
  }
  SUBCASE("bad label value") {
    write_text(path, "a,label\n1,1\n2,1.5\n");
    try {
      read_csv(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number == 3);
    }
  }
  SUBCASE("bad known flag") {
    write_text(path, "a,known,label\n1,0,1\n2,7,1\n");
    try {
      read_csv(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number == 3);
    }
  }
}

TEST_CASE("standardize_in_place zeroes means and scales to unit variance") {
  DataSet d = small_data(31);
  const Eigen::MatrixXd orig = d.rows;
  const Standardization st = standardize_in_place(d);
  for (int j = 0; j < d.p(); ++j) {
    CHECK(d.rows.col(j).mean() == doctest::Approx(0.0).epsilon(1e-10));
    const double var = d.rows.col(j).squaredNorm() / (d.n() - 1);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-10));
    // invertible
    for (int i = 0; i < 5; ++i)
      CHECK(d.rows(i, j) * st.scale(j) + st.mean(j) == doctest::Approx(orig(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("report json round trip preserves every field") {
  TempDir tmp;
  DataSet d = small_data(41);
  FitConfig cfg;
  cfg.g = 2;
  cfg.seed = 17;
  cfg.annealing = AnnealingSchedule::linear(10, 4);
  const FitReport rep = fit_em(d, cfg, anneal_init(d, cfg));
  const std::string path = tmp.file("report.json");
  write_report(path, rep);
  const FitReport back = read_report(path);

  CHECK(back.model_kind == rep.model_kind);
  CHECK(back.g == rep.g);
  CHECK(back.iterations == rep.iterations);
  CHECK(back.seed == rep.seed);
  CHECK(back.status == rep.status);
  CHECK(back.map_labels == rep.map_labels);
  CHECK(back.frozen_components == rep.frozen_components);
  CHECK(back.log_lik_trace == rep.log_lik_trace);
  CHECK(back.score.bic == rep.score.bic);
  CHECK(back.score.icl == rep.score.icl);
  CHECK(back.score.log_lik == rep.score.log_lik);
  CHECK(back.score.free_params == rep.score.free_params);
  CHECK(back.score.entropy_term == rep.score.entropy_term);
  REQUIRE(back.ari.has_value() == rep.ari.has_value());
  if (rep.ari) CHECK(*back.ari == *rep.ari);
  CHECK((back.responsibilities - rep.responsibilities).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.config.epsilon == rep.config.epsilon);
  CHECK(back.config.max_iter == rep.config.max_iter);

  const SalMixture& ma = rep.sal();
  const SalMixture& mb = back.sal();
  REQUIRE(mb.g() == ma.g());
  CHECK((mb.weights - ma.weights).cwiseAbs().maxCoeff() == 0.0);
  for (int g = 0; g < ma.g(); ++g) {
    CHECK((mb.components[g].mu() - ma.components[g].mu()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((mb.components[g].alpha() - ma.components[g].alpha()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((mb.components[g].sigma() - ma.components[g].sigma()).cwiseAbs().maxCoeff() == 0.0);
  }
  // densities evaluate identically after the round trip
  Eigen::VectorXd x(2);
  x << 1.0, 0.5;
  CHECK(report_log_density(back, x) == report_log_density(rep, x));
}

TEST_CASE("gaussian report round trip") {
  TempDir tmp;
  DataSet d = small_data(43);
  FitConfig cfg;
  cfg.g = 2;
  cfg.seed = 19;
  cfg.annealing = AnnealingSchedule::linear(10, 4);
  const FitReport rep = fit_gmm(d, cfg, anneal_init_gmm(d, cfg));
  const std::string path = tmp.file("report.json");
  write_report(path, rep);
  const FitReport back = read_report(path);
  CHECK(back.model_kind == "gaussian");
  const GaussianMixture& ma = rep.gaussian();
  const GaussianMixture& mb = back.gaussian();
  for (int g = 0; g < ma.g(); ++g)
    CHECK((mb.components[g].sigma() - ma.components[g].sigma()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("labels csv layout") {
  TempDir tmp;
  DataSet d = small_data(47);
  FitConfig cfg;
  cfg.g = 2;
  cfg.seed = 23;
  cfg.annealing = AnnealingSchedule::linear(10, 4);
  const FitReport rep = fit_em(d, cfg, anneal_init(d, cfg));
  const std::string path = tmp.file("labels.csv");
  write_labels_csv(path, rep);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "row_id,map_label,tau_1,tau_2");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int row_id, map_label;
    double t1, t2;
    REQUIRE(std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &row_id, &map_label, &t1, &t2) == 4);
    CHECK(row_id == rows + 1);  // row ids are 1-based like the labels
    CHECK(map_label == rep.map_labels[rows]);
    CHECK(t1 == doctest::Approx(rep.responsibilities(rows, 0)).epsilon(1e-12));
    CHECK(t1 + t2 == doctest::Approx(1.0).epsilon(1e-9));
    ++rows;
  }
  CHECK(rows == d.n());
}

TEST_CASE("sweep is deterministic and orders reports by (model, g)") {
  DataSet d = small_data(53);
  SweepOptions opt;
  opt.models = {ModelKind::sal, ModelKind::gaussian};
  opt.g_min = 1;
  opt.g_max = 3;
  opt.base.seed = 29;
  opt.base.annealing = AnnealingSchedule::linear(10, 4);

  const SweepResult a = run_sweep(d, opt);
  const SweepResult b = run_sweep(d, opt);
  REQUIRE(a.reports.size() == b.reports.size());
  REQUIRE(a.reports.size() + a.failures.size() == 6);
  for (size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].model_kind == b.reports[i].model_kind);
    CHECK(a.reports[i].g == b.reports[i].g);
    CHECK(a.reports[i].score.icl == b.reports[i].score.icl);
    if (i > 0)
      CHECK(std::tie(a.reports[i - 1].model_kind, a.reports[i - 1].g) <
            std::tie(a.reports[i].model_kind, a.reports[i].g));
  }
  CHECK(a.best_index == b.best_index);
  REQUIRE(a.best_index >= 0);
  // best really is the ICL argmax
  for (const auto& r : a.reports) CHECK(a.best().score.icl >= r.score.icl);

  // per-kind best
  const int bs = best_of_kind(a, ModelKind::sal, false);
  REQUIRE(bs >= 0);
  CHECK(a.reports[bs].model_kind == "sal");
  // the data has two skewed components; SAL's ICL choice should be 2
  CHECK(a.reports[bs].g == 2);
}

TEST_CASE("thread budget respects the environment cap") {
  const int hw = thread_budget();
  CHECK(hw >= 1);
  ::setenv("SALMIX_THREADS", "1", 1);
  CHECK(thread_budget() == 1);
  ::unsetenv("SALMIX_THREADS");
  CHECK(thread_budget() == hw);

  // parallel_for covers every index exactly once
  std::vector<int> hits(257, 0);
  parallel_for(257, [&](int i) { ++hits[i]; });
  for (int h : hits) CHECK(h == 1);
}
