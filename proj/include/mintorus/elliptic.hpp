#ifndef MINTORUS_ELLIPTIC_HPP
#define MINTORUS_ELLIPTIC_HPP

// Complete elliptic integrals K(k), E(k) (modulus convention, not parameter
// m = k^2) and the area / normalized eigenvalue of the torus family.

#include <cmath>
#include <limits>
#include <string>

#include "mintorus/errors.hpp"
#include "mintorus/geometry.hpp"
#include "mintorus/quadrature.hpp"
#include "mintorus/torus_spectrum.hpp"

namespace mintorus {

struct EllipticPair {
  double k;
  double K;
  double E;
};

/// K and E by the arithmetic-geometric mean, E from the companion sum
/// E = K (1 - sum_j 2^{j-1} c_j^2).
inline EllipticPair agm_KE(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw InvalidArgument("elliptic modulus must satisfy 0 <= k < 1");
  const double eps = std::numeric_limits<double>::epsilon();
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  double c = k;
  double pow2 = 0.5;
  double sum = pow2 * c * c;
  for (int it = 0; it < 64 && std::abs(a - b) >= 4.0 * eps * a; ++it) {
    const double an = 0.5 * (a + b);
    c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  const double K = kPi / (2.0 * a);
  return {k, K, K * (1.0 - sum)};
}

/// k = sqrt((m^2 - n^2) / (m^2 + 2mn)).
inline double modulus(const TorusParams& params) {
  const double m = params.m(), n = params.n();
  return std::sqrt((m * m - n * n) / (m * m + 2.0 * m * n));
}

/// Closed-form area, halved for odd mn (the immersion double covers).
inline double area(const TorusParams& params) {
  const double m = params.m(), n = params.n();
  const double s = std::sqrt(m * m + 2.0 * m * n);
  const EllipticPair ke = agm_KE(modulus(params));
  const double full = 8.0 * kPi * (s * ke.E - m * n / s * ke.K);
  return params.odd() ? 0.5 * full : full;
}

namespace detail {

/// Area density integrated over y: (2 pi / sqrt 2) rho(x) / sigma(x).
inline double area_integrand(const TorusParams& params, double x) {
  return kTwoPi / std::sqrt(2.0) * rho(params.m(), params.n(), x) / sigma(params.m(), params.n(), x);
}

}  // namespace detail

/// Area by adaptive quadrature of the induced area density over [0, 2 pi).
inline double quadrature_area(const TorusParams& params, double tol = 1e-12) {
  if (!(tol >= 1e-12)) throw InvalidArgument("quadrature tolerance must be >= 1e-12");
  const auto q = adaptive_simpson([&](double x) { return detail::area_integrand(params, x); }, 0.0, kTwoPi, tol);
  return params.odd() ? 0.5 * q.value : q.value;
}

struct FunctionalReport {
  TorusParams params;
  int index;
  double lambda_closed;
  double lambda_numeric;
  double rel_err;
  double nonmax_margin;
};

/// Lambda_index = 2 * area, with the quadrature cross-check and the margin
/// 8 pi index - Lambda.
inline FunctionalReport functional_value(const TorusParams& params) {
  const double closed = 2.0 * area(params);
  const double numeric = 2.0 * quadrature_area(params);
  const int index = predicted_index(params);
  return {params, index, closed, numeric, std::abs(closed - numeric) / std::abs(closed),
          8.0 * kPi * index - closed};
}

}  // namespace mintorus

#endif  // MINTORUS_ELLIPTIC_HPP
