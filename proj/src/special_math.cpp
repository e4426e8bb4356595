#include "salmix/special_math.hpp"

#include <cmath>
#include <stdexcept>

namespace salmix {
namespace {

constexpr double kEps = 1.0e-16;
constexpr int kMaxIter = 20000;

double chebev(const double* c, int m, double x) {
  double d = 0.0, dd = 0.0;
  for (int j = m - 1; j >= 1; --j) {
    const double sv = d;
    d = 2.0 * x * d - dd + c[j];
    dd = sv;
  }
  return x * d - dd + 0.5 * c[0];
}

// Chebyshev fits for the Temme gamma functions
//   gam1(mu) = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu)
//   gam2(mu) = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2
// valid for |mu| <= 1/2 (argument mapped to 8 mu^2 - 1).
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
  static const double c1[] = {-1.142022680371168e0, 6.5165112670737e-3,
                              3.087090173086e-4,    -3.4706269649e-6,
                              6.9437664e-9,         3.67795e-11,
                              -1.356e-13};
  static const double c2[] = {1.843740587300905e0,  -7.68528408447867e-2,
                              1.2719271366546e-3,   -4.9717367042e-6,
                              -3.31261198e-8,       2.423096e-10,
                              -1.702e-13,           -1.49e-15};
  const double z = 8.0 * mu * mu - 1.0;
  gam1 = chebev(c1, 7, z);
  gam2 = chebev(c2, 8, z);
  gampl = gam2 - mu * gam1;
  gammi = gam2 + mu * gam1;
}

// Temme series for K_mu(x), K_{mu+1}(x) with |mu| <= 1/2, x <= 2.
void bessel_k_small(double x, double mu, double& kmu, double& kmu1) {
  const double x2 = 0.5 * x;
  const double pimu = M_PI * mu;
  const double fact = (std::fabs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = (std::fabs(e) < kEps) ? 1.0 : std::sinh(e) / e;
  double gam1, gam2, gampl, gammi;
  temme_gammas(mu, gam1, gam2, gampl, gammi);
  double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / gampl;
  double q = 0.5 / (e * gammi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  int i = 1;
  for (; i <= kMaxIter; ++i) {
    ff = (i * ff + p + q) / (i * i - mu * mu);
    c *= d / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    const double del1 = c * (p - i * ff);
    sum1 += del1;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  if (i > kMaxIter) throw std::runtime_error("log_bessel_k: series failed to converge");
  kmu = sum;
  kmu1 = sum1 * (2.0 / x);
}

// Steed/Thompson-Barnett continued fraction for x > 2; returns K scaled by
// e^x to avoid underflow at large argument.
void bessel_k_large_scaled(double x, double mu, double& kmu, double& kmu1) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  double q = a1, c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < kEps) break;
  }
  if (i > kMaxIter) throw std::runtime_error("log_bessel_k: continued fraction failed to converge");
  h = a1 * h;
  kmu = std::sqrt(M_PI / (2.0 * x)) / s;
  kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

}  // namespace

double log_bessel_k(double nu, double x) {
  if (!std::isfinite(nu) || !std::isfinite(x) || x <= 0.0)
    throw std::domain_error("log_bessel_k: requires finite nu and x > 0");
  nu = std::fabs(nu);  // K_{-nu} = K_nu
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;  // in [-1/2, 1/2]

  double kmu, kmu1;
  double log_scale = 0.0;
  if (x <= 2.0) {
    bessel_k_small(x, mu, kmu, kmu1);
  } else {
    bessel_k_large_scaled(x, mu, kmu, kmu1);
    log_scale = -x;
  }

  // Upward recurrence K_{m+1} = K_{m-1} + (2m/x) K_m, rescaling as needed.
  const double xi2 = 2.0 / x;
  for (int i = 1; i <= nl; ++i) {
    const double knext = (mu + i) * xi2 * kmu1 + kmu;
    kmu = kmu1;
    kmu1 = knext;
    if (kmu1 > 1e250) {
      kmu *= 1e-250;
      kmu1 *= 1e-250;
      log_scale += 250.0 * M_LN10;
    }
  }
  // After nl steps kmu holds K_{mu+nl} = K_nu.
  return std::log(kmu) + log_scale;
}

GigMoments gig_expectations(const GigParams& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.nu) || p.a <= 0.0 || p.b <= 0.0)
    throw std::domain_error("gig_expectations: requires a > 0, b > 0, finite nu");
  const double s = std::sqrt(p.a) * std::sqrt(p.b);
  if (s == 0.0 || !std::isfinite(s))
    throw std::overflow_error("gig_expectations: sqrt(a b) outside the Bessel evaluation range");
  const double log_ratio = log_bessel_k(p.nu + 1.0, s) - log_bessel_k(p.nu, s);
  const double r = std::exp(log_ratio);
  GigMoments m;
  m.e_w = std::sqrt(p.b / p.a) * r;
  m.e_inv_w = std::sqrt(p.a / p.b) * r - 2.0 * p.nu / p.b;
  return m;
}

}  // namespace salmix
