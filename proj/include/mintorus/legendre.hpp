#ifndef MINTORUS_LEGENDRE_HPP
#define MINTORUS_LEGENDRE_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "mintorus/errors.hpp"

namespace mintorus {

/// (P_n(t), P_n'(t)) by the three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(int n, double t) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = t;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  // P_n' from P_n and P_{n-1}; at the endpoints use P_n'(+-1) = (+-1)^{n-1} n(n+1)/2
  if (std::abs(std::abs(t) - 1.0) < 1e-15) {
    const double sign = (t > 0.0 || n % 2 == 1) ? 1.0 : -1.0;
    return {p1, sign * 0.5 * n * (n + 1.0)};
  }
  return {p1, n * (t * p1 - p0) / (t * t - 1.0)};
}

inline double legendre(int n, double t) { return legendre_with_derivative(n, t).first; }

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2 points - 1.
inline GaussRule gauss_legendre(int points) {
  if (points < 1) throw InvalidArgument("Gauss rule needs at least one point");
  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (points + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (points + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(points, t);
      const double step = p / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(points, t).second;
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    rule.nodes[i] = -t;
    rule.nodes[points - 1 - i] = t;
    rule.weights[i] = w;
    rule.weights[points - 1 - i] = w;
  }
  return rule;
}

}  // namespace mintorus

#endif  // MINTORUS_LEGENDRE_HPP
