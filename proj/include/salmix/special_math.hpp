#pragma once

namespace salmix {

// Parameters of a generalized inverse Gaussian law: density proportional to
// x^(nu-1) exp{-(a x + b / x) / 2} on x > 0, with a, b > 0.
struct GigParams {
  double a;
  double b;
  double nu;
};

struct GigMoments {
  double e_w;      // E[X]
  double e_inv_w;  // E[1/X]
};

// ln K_nu(x), the modified Bessel function of the third kind, in log scale.
// Accurate to ~1e-12 relative (on K itself) for x in [1e-8, 700] and
// moderate |nu|; K_{-nu} = K_nu is exploited. Throws std::domain_error for
// x <= 0 or non-finite inputs.
double log_bessel_k(double nu, double x);

// E[X] and E[1/X] of the GIG law, computed through log-scale Bessel ratios:
//   E[X]   = sqrt(b/a) K_{nu+1}(s) / K_nu(s),        s = sqrt(a b)
//   E[1/X] = sqrt(a/b) K_{nu+1}(s) / K_nu(s) - 2 nu / b.
// Throws std::domain_error on invalid parameters and std::overflow_error if
// sqrt(a b) leaves the representable evaluation range.
GigMoments gig_expectations(const GigParams& p);

}  // namespace salmix
