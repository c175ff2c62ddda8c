#ifndef MINTORUS_QUADRATURE_HPP
#define MINTORUS_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "mintorus/errors.hpp"

namespace mintorus {

struct QuadratureResult {
  double value;
  double error_estimate;
};

namespace detail {

struct SimpsonState {
  const std::function<double(double)>& f;
  int max_depth;
  int deepest = 0;
};

inline double simpson_recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole,
                              double tol, int depth, double& err) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = st.f(lm), frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  st.deepest = std::max(st.deepest, depth);
  if (depth >= st.max_depth) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  // the first levels always split so periodic integrands cannot fool the estimate
  if (depth > 3 && std::abs(delta) <= 15.0 * tol) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, err) +
         simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, err);
}

}  // namespace detail

/// Adaptive Simpson quadrature with absolute tolerance.
inline QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                         int max_depth = 40) {
  detail::SimpsonState st{f, max_depth};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double err = 0.0;
  const double value = detail::simpson_recurse(st, a, b, fa, fm, fb, whole, tol, 0, err);
  if (!std::isfinite(value) || err > tol)
    throw SolverError("adaptive Simpson did not reach tolerance " + std::to_string(tol) + " (estimate " +
                      std::to_string(err) + ")");
  return {value, err};
}

}  // namespace mintorus

#endif  // MINTORUS_QUADRATURE_HPP
