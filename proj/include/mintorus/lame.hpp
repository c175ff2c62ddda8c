#ifndef MINTORUS_LAME_HPP
#define MINTORUS_LAME_HPP

// Trigonometric Lame equation of degree one in self-adjoint form
//
//     -(p phi')' + 2 k^2 cos^2(y) / p phi = h phi / p,   p = sqrt(1 - k^2 cos^2 y),
//
// the auxiliary problem -(p phi')' + p phi = lambda p phi, and the k -> 1
// Legendre limit of its Rayleigh quotient.
//
// Symmetry classes are taken with respect to the reflection y -> pi - y, which
// maps cos^2 y to itself and therefore commutes with both operators.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>
#include <string>
#include <vector>

#include "mintorus/errors.hpp"
#include "mintorus/geometry.hpp"
#include "mintorus/legendre.hpp"
#include "mintorus/quadrature.hpp"
#include "mintorus/sturm_liouville.hpp"

namespace mintorus {

struct LameParams {
  double k2;
  double h;
  /// Degree with nu (nu + 1) = lambda.
  double nu;
};

/// Lame parameters of the separated torus equation at frequency l and eigenvalue lambda.
inline LameParams to_lame(const TorusParams& params, int l, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
  const double m = params.m(), n = params.n();
  const double denom = m * m + 2.0 * m * n;
  return {(m * m - n * n) / denom, ((m * m + m * n) * lambda - double(l) * l) / denom,
          0.5 * (std::sqrt(1.0 + 4.0 * lambda) - 1.0)};
}

namespace detail {

inline void check_modulus(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw InvalidArgument("Lame modulus must satisfy 0 <= k < 1");
}

inline double lame_p(double k, double y) {
  const double c = k * std::cos(y);
  return std::sqrt(1.0 - c * c);
}

}  // namespace detail

inline SLProblem lame_problem(double k, BoundaryFlavor bc, int grid_size = 1024) {
  detail::check_modulus(k);
  SLProblem problem;
  problem.p = [k](double y) { return detail::lame_p(k, y); };
  problem.q = [k](double y) {
    const double c = k * std::cos(y);
    return 2.0 * c * c / detail::lame_p(k, y);
  };
  problem.r = [k](double y) { return 1.0 / detail::lame_p(k, y); };
  problem.period = kPi;
  problem.bc = bc;
  problem.grid_size = grid_size;
  return problem;
}

inline SLProblem aux_problem(double k, BoundaryFlavor bc = BoundaryFlavor::periodic, int grid_size = 1024) {
  detail::check_modulus(k);
  SLProblem problem;
  problem.p = [k](double y) { return detail::lame_p(k, y); };
  problem.q = problem.p;
  problem.r = problem.p;
  problem.period = kPi;
  problem.bc = bc;
  problem.grid_size = grid_size;
  return problem;
}

enum class Symmetry { symmetric, antisymmetric };

inline const char* to_string(Symmetry s) { return s == Symmetry::symmetric ? "symmetric" : "antisymmetric"; }

struct LameLevel {
  double h;
  double error_estimate;
  BoundaryFlavor flavor;
  Symmetry symmetry;
  /// <phi, R phi>_r for the symmetry-adapted eigenvector; +-1 up to rounding.
  double reflection;
};

namespace detail {

/// Extrapolated spectrum of a reflection-invariant problem with every
/// eigenvector classified under y -> pi - y. Degenerate clusters are rotated
/// so each member has definite symmetry. Returns at least `count` levels.
inline std::vector<LameLevel> classified_levels(const SLProblem& problem, int count) {
  const SLSpectrum spec = extrapolate(problem, count + 3);
  const SLProblem fine = problem.with_grid(spec.grid_size);
  const int n = spec.grid_size;
  const double h = problem.period / n;
  std::vector<double> weight(n);
  for (int i = 0; i < n; ++i) weight[i] = fine.r(i * h);

  std::vector<LameLevel> levels;
  std::size_t start = 0;
  const std::size_t total = spec.eigenvalues.size();
  while (start < total) {
    std::size_t end = start + 1;
    while (end < total && std::abs(spec.eigenvalues[end] - spec.eigenvalues[end - 1]) <
                              1e-6 * std::max(1.0, std::abs(spec.eigenvalues[end])))
      ++end;
    if (end == total && static_cast<int>(levels.size()) >= count) break;  // cluster may be cut by the count
    const int size = static_cast<int>(end - start);
    Eigen::MatrixXd s(size, size);
    for (int a = 0; a < size; ++a) {
      const std::vector<double> ra = reflect(spec.eigenvectors[start + a], problem.bc);
      for (int b = 0; b < size; ++b) s(b, a) = weighted_dot(weight, spec.eigenvectors[start + b], ra);
    }
    const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    for (int c = 0; c < size; ++c) {
      const double refl = es.eigenvalues()(c);
      if (std::abs(refl) < 0.99)
        throw SolverError("symmetry classification is ambiguous (reflection correlation " + std::to_string(refl) +
                          ") near eigenvalue " + std::to_string(spec.eigenvalues[start]));
      double value = 0.0, err = 0.0;
      for (int a = 0; a < size; ++a) {
        const double u = es.eigenvectors()(a, c);
        value += u * u * spec.eigenvalues[start + a];
        err = std::max(err, spec.error_estimates[start + a]);
      }
      levels.push_back({value, err, problem.bc, refl > 0.0 ? Symmetry::symmetric : Symmetry::antisymmetric, refl});
    }
    start = end;
  }
  std::stable_sort(levels.begin(), levels.end(), [](const LameLevel& a, const LameLevel& b) { return a.h < b.h; });
  if (static_cast<int>(levels.size()) < count) throw SolverError("too few classified levels");
  return levels;
}

inline double lowest_antisymmetric(const std::vector<LameLevel>& levels) {
  for (const LameLevel& l : levels)
    if (l.symmetry == Symmetry::antisymmetric) return l.h;
  throw SolverError("no antisymmetric level among the computed eigenvalues");
}

/// Rayleigh-Ritz over span{sin 2jy : 1 <= j <= basis_size}, the pi-periodic
/// functions odd about pi/2. Integrals by the periodic trapezoid rule.
inline std::vector<double> odd_class_galerkin(const SLProblem& problem, int basis_size = 40, int points = 4096) {
  Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(basis_size, basis_size);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(basis_size, basis_size);
  const double h = kPi / points;
  std::vector<double> phi(basis_size), dphi(basis_size);
  for (int i = 0; i < points; ++i) {
    const double y = i * h;
    const double p = problem.p(y), q = problem.q(y), r = problem.r(y);
    for (int j = 0; j < basis_size; ++j) {
      const double f = 2.0 * (j + 1);
      phi[j] = std::sin(f * y);
      dphi[j] = f * std::cos(f * y);
    }
    for (int a = 0; a < basis_size; ++a)
      for (int b = 0; b <= a; ++b) {
        stiff(a, b) += h * (p * dphi[a] * dphi[b] + q * phi[a] * phi[b]);
        mass(a, b) += h * r * phi[a] * phi[b];
      }
  }
  stiff = stiff.selfadjointView<Eigen::Lower>();
  mass = mass.selfadjointView<Eigen::Lower>();
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(stiff, mass);
  if (es.info() != Eigen::Success) throw SolverError("Galerkin eigensolve failed");
  std::vector<double> values(es.eigenvalues().data(), es.eigenvalues().data() + basis_size);
  return values;
}

}  // namespace detail

/// Lowest `levels` eigenvalues h of the trig-Lame problem on period pi, both
/// flavors merged, each labeled by its symmetry under y -> pi - y.
inline std::vector<LameLevel> lame_spectrum(double k, int levels, int grid_size = 1024) {
  detail::check_modulus(k);
  if (levels < 1 || levels > 12) throw InvalidArgument("levels must lie in [1, 12]");
  std::vector<LameLevel> all = detail::classified_levels(lame_problem(k, BoundaryFlavor::periodic, grid_size), levels);
  const std::vector<LameLevel> anti =
      detail::classified_levels(lame_problem(k, BoundaryFlavor::antiperiodic, grid_size), levels);
  all.insert(all.end(), anti.begin(), anti.end());
  std::stable_sort(all.begin(), all.end(), [](const LameLevel& a, const LameLevel& b) { return a.h < b.h; });
  all.resize(levels);
  return all;
}

/// h_3(k): lowest eigenvalue among pi-periodic eigenfunctions odd about pi/2.
inline double lame_h3(double k, int grid_size = 1024) {
  return detail::lowest_antisymmetric(detail::classified_levels(lame_problem(k, BoundaryFlavor::periodic, grid_size), 6));
}

/// Spectral-Galerkin value of h_3(k) in the basis {sin 2jy}.
inline double lame_h3_galerkin(double k) {
  return detail::odd_class_galerkin(lame_problem(k, BoundaryFlavor::periodic, 64)).front();
}

struct H3Entry {
  double k;
  double h3;
  double h3_galerkin;
  double margin;  ///< h3 - 2
};

struct H3Report {
  std::vector<H3Entry> entries;
  double min_margin;
  bool pass() const { return min_margin > 0.0; }
};

inline void check_open_grid(const std::vector<double>& k_grid) {
  if (k_grid.empty()) throw InvalidArgument("empty modulus grid");
  for (double k : k_grid)
    if (!(k > 0.0 && k < 1.0)) throw InvalidArgument("modulus grid must lie in (0, 1)");
}

inline H3Report h3_certificate(const std::vector<double>& k_grid, int grid_size = 1024) {
  check_open_grid(k_grid);
  H3Report report{{}, std::numeric_limits<double>::infinity()};
  for (double k : k_grid) {
    const double h3 = lame_h3(k, grid_size);
    report.entries.push_back({k, h3, lame_h3_galerkin(k), h3 - 2.0});
    report.min_margin = std::min(report.min_margin, h3 - 2.0);
  }
  return report;
}

struct AuxEntry {
  double k;
  double lambda_hat;
  double lambda_hat_galerkin;
  double margin;  ///< lambda_hat - 3
};

struct AuxReport {
  std::vector<AuxEntry> entries;
  double min_margin;
  bool pass() const { return min_margin > 0.0; }
};

/// Lowest eigenvalue of the auxiliary problem in the pi-periodic class odd
/// about pi/2. h = 2 in the Lame problem corresponds to lambda = 3 here.
inline double aux_lambda_hat(double k, int grid_size = 1024) {
  return detail::lowest_antisymmetric(detail::classified_levels(aux_problem(k, BoundaryFlavor::periodic, grid_size), 6));
}

inline AuxReport aux_lambda_check(const std::vector<double>& k_grid, int grid_size = 1024) {
  check_open_grid(k_grid);
  AuxReport report{{}, std::numeric_limits<double>::infinity()};
  for (double k : k_grid) {
    const double lh = aux_lambda_hat(k, grid_size);
    const double lg = detail::odd_class_galerkin(aux_problem(k, BoundaryFlavor::periodic, 64)).front();
    report.entries.push_back({k, lh, lg, lh - 3.0});
    report.min_margin = std::min(report.min_margin, lh - 3.0);
  }
  return report;
}

/// R_k[f] = int p (f'^2 + f^2) / int p f^2 over [0, pi].
inline double aux_rayleigh_quotient(double k, const std::function<double(double)>& f,
                                    const std::function<double(double)>& df) {
  if (!(k >= 0.0 && k <= 1.0)) throw InvalidArgument("modulus must lie in [0, 1]");
  auto p = [k](double y) {
    const double c = k * std::cos(y);
    return std::sqrt(std::max(0.0, 1.0 - c * c));
  };
  const double num =
      adaptive_simpson([&](double y) { return p(y) * (df(y) * df(y) + f(y) * f(y)); }, 0.0, kPi, 1e-12).value;
  const double den = adaptive_simpson([&](double y) { return p(y) * f(y) * f(y); }, 0.0, kPi, 1e-12).value;
  return num / den;
}

struct LegendreReport {
  std::vector<int> degrees;
  /// Minimiser in the {P_n} basis, unit Euclidean norm, positive P_1 entry.
  std::vector<double> coefficients;
  /// R_1[P_n] for each basis polynomial.
  std::vector<double> quotients;
  double minimum;
};

/// Minimises R_1[g] = int (1 - t^2) g'^2 + g^2 / int g^2 over span{P_1, P_3, ..., P_max}.
inline LegendreReport legendre_limit_check(int max_degree) {
  if (max_degree < 3 || max_degree % 2 == 0) throw InvalidArgument("max_degree must be odd and at least 3");
  LegendreReport report;
  for (int d = 1; d <= max_degree; d += 2) report.degrees.push_back(d);
  const int size = static_cast<int>(report.degrees.size());
  const GaussRule rule = gauss_legendre(max_degree + 1);

  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(size, size);
  Eigen::MatrixXd den = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double t = rule.nodes[q], w = rule.weights[q];
    std::vector<double> p(size), dp(size);
    for (int a = 0; a < size; ++a) std::tie(p[a], dp[a]) = legendre_with_derivative(report.degrees[a], t);
    for (int a = 0; a < size; ++a)
      for (int b = 0; b < size; ++b) {
        num(a, b) += w * ((1.0 - t * t) * dp[a] * dp[b] + p[a] * p[b]);
        den(a, b) += w * p[a] * p[b];
      }
  }
  const Eigen::LLT<Eigen::MatrixXd> chol(den);
  if (chol.info() != Eigen::Success) throw SolverError("Legendre Gram matrix is not positive definite");
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(num, den);
  if (es.info() != Eigen::Success) throw SolverError("Legendre eigensolve failed");
  report.minimum = es.eigenvalues()(0);
  Eigen::VectorXd c = es.eigenvectors().col(0);
  c.normalize();
  if (c(0) < 0.0) c = -c;
  report.coefficients.assign(c.data(), c.data() + size);
  for (int a = 0; a < size; ++a) report.quotients.push_back(num(a, a) / den(a, a));
  return report;
}

}  // namespace mintorus

#endif  // MINTORUS_LAME_HPP
