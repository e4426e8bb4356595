#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "salmix/metrics.hpp"

using namespace salmix;

namespace {

// Expands a confusion table (rows = partition A, cols = partition B) into a
// pair of label vectors for rand_and_ari.
void expand_table(const std::vector<std::vector<int>>& tbl, std::vector<int>& a,
                  std::vector<int>& b) {
  a.clear();
  b.clear();
  for (size_t i = 0; i < tbl.size(); ++i) {
    for (size_t j = 0; j < tbl[i].size(); ++j) {
      for (int k = 0; k < tbl[i][j]; ++k) {
        a.push_back(static_cast<int>(i) + 1);
        b.push_back(static_cast<int>(j) + 1);
      }
    }
  }
}

}  // namespace

TEST_CASE("free parameter counts") {
  // weights (g-1) + shifts gp + skewness gp (SAL) + covariances g p(p+1)/2
  CHECK(count_free_params(ModelKind::sal, 2, 2) == 15);
  CHECK(count_free_params(ModelKind::sal, 3, 2) == 23);
  CHECK(count_free_params(ModelKind::sal, 1, 1) == 3);
  CHECK(count_free_params(ModelKind::gaussian, 2, 2) == 11);
  CHECK(count_free_params(ModelKind::gaussian, 3, 2) == 17);
  CHECK(count_free_params(ModelKind::gaussian, 1, 3) == 9);
  // SAL = Gaussian + g p skewness parameters, always
  for (int g = 1; g <= 4; ++g)
    for (int p = 1; p <= 4; ++p)
      CHECK(count_free_params(ModelKind::sal, g, p) ==
            count_free_params(ModelKind::gaussian, g, p) + g * p);
}

TEST_CASE("map_labels: 1-based argmax, ties to the lowest index") {
  Eigen::MatrixXd tau(3, 3);
  tau << 0.2, 0.5, 0.3,  //
      0.4, 0.4, 0.2,     //
      0.1, 0.1, 0.8;
  const std::vector<int> got = map_labels(tau);
  CHECK(got == std::vector<int>{2, 1, 3});
}

TEST_CASE("score_model: BIC/ICL arithmetic and the entropy term") {
  const int n = 4;
  Eigen::MatrixXd tau(n, 2);
  tau << 0.9, 0.1,  //
      0.8, 0.2,     //
      0.3, 0.7,     //
      0.5, 0.5;
  const double ll = -12.5;
  const int k = 7;
  const ModelScore s = score_model(ll, k, n, tau);
  CHECK(s.log_lik == ll);
  CHECK(s.free_params == k);
  CHECK(s.bic == doctest::Approx(2.0 * ll - k * std::log(4.0)).epsilon(1e-14));
  const double ent = std::log(0.9) + std::log(0.8) + std::log(0.7) + std::log(0.5);
  CHECK(s.entropy_term == doctest::Approx(ent).epsilon(1e-14));
  CHECK(s.icl == doctest::Approx(s.bic + ent).epsilon(1e-14));
  CHECK(s.icl <= s.bic);
  CHECK(s.entropy_term <= 0.0);

  // labeled rows drop out of the entropy term
  const std::vector<char> known{1, 0, 0, 1};
  const ModelScore sk = score_model(ll, k, n, tau, &known);
  CHECK(sk.bic == doctest::Approx(s.bic));
  CHECK(sk.entropy_term == doctest::Approx(std::log(0.8) + std::log(0.7)).epsilon(1e-14));
}

TEST_CASE("score_model: hard responsibilities make ICL equal BIC") {
  Eigen::MatrixXd tau(3, 2);
  tau << 1, 0, 0, 1, 1, 0;
  const ModelScore s = score_model(-5.0, 3, 3, tau);
  CHECK(s.icl == doctest::Approx(s.bic).epsilon(1e-14));
}

TEST_CASE("rand/ari: identical and trivial partitions") {
  const std::vector<int> a{1, 1, 2, 2, 3};
  auto r = rand_and_ari(a, a);
  CHECK(r.ari == doctest::Approx(1.0));
  CHECK(r.rand == doctest::Approx(1.0));
  // both single-block: identical partitions, ARI defined as 1
  const std::vector<int> ones(6, 1);
  r = rand_and_ari(ones, ones);
  CHECK(r.ari == doctest::Approx(1.0));
  CHECK(r.rand == doctest::Approx(1.0));
}

TEST_CASE("rand/ari: invariant to relabeling of either side") {
  const std::vector<int> a{1, 1, 2, 2, 3, 3, 1, 2};
  const std::vector<int> b{2, 2, 1, 1, 1, 3, 3, 3};
  const std::vector<int> b_relab{7, 7, 5, 5, 5, 1, 1, 1};
  const auto r1 = rand_and_ari(a, b);
  const auto r2 = rand_and_ari(a, b_relab);
  const auto r3 = rand_and_ari(b, a);
  CHECK(r1.ari == doctest::Approx(r2.ari).epsilon(1e-15));
  CHECK(r1.rand == doctest::Approx(r2.rand).epsilon(1e-15));
  CHECK(r1.ari == doctest::Approx(r3.ari).epsilon(1e-15));
}

TEST_CASE("rand/ari: small worked example") {
  // contingency [[2,1],[0,2]]: n=5, S=2, SA=C(3,2)+C(2,2)=4, SB=C(2,2)+C(3,2)=4
  std::vector<int> a, b;
  expand_table({{2, 1}, {0, 2}}, a, b);
  const auto r = rand_and_ari(a, b);
  const double exp_idx = 4.0 * 4.0 / 10.0;
  CHECK(r.ari == doctest::Approx((2.0 - exp_idx) / (4.0 - exp_idx)).epsilon(1e-15));
  CHECK(r.rand == doctest::Approx((10.0 + 2.0 * 2.0 - 4.0 - 4.0) / 10.0).epsilon(1e-15));
}

TEST_CASE("rand/ari: frozen values for the yeast confusion tables") {
  std::vector<int> a, b;
  expand_table({{448, 15}, {14, 149}}, a, b);
  CHECK(rand_and_ari(a, b).ari == doctest::Approx(0.8133909118806263).epsilon(1e-12));
  CHECK(rand_and_ari(a, b).rand == doctest::Approx(0.9114990415335463).epsilon(1e-12));

  expand_table({{379, 12, 72}, {13, 11, 139}}, a, b);
  CHECK(rand_and_ari(a, b).ari == doctest::Approx(0.4745680630693200).epsilon(1e-12));

  expand_table({{106, 357}, {1, 162}}, a, b);
  CHECK(rand_and_ari(a, b).ari == doctest::Approx(-0.0883617690974254).epsilon(1e-12));
}

TEST_CASE("rand/ari: independent random partitions score near zero") {
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<int> pick(1, 4);
  const int n = 4000;
  std::vector<int> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = pick(gen);
    b[i] = pick(gen);
  }
  const auto r = rand_and_ari(a, b);
  CHECK(std::fabs(r.ari) < 0.02);
  CHECK(r.rand > 0.0);
  CHECK(r.rand < 1.0);
}
