#ifndef MINTORUS_STURM_LIOUVILLE_HPP
#define MINTORUS_STURM_LIOUVILLE_HPP

// Self-adjoint Sturm-Liouville problems
//
//     -(p h')' + q h = lambda r h,    h(x + T) = +-h(x)
//
// discretised with the conservative second-order flux stencil on a uniform
// periodic grid, solved for the lowest eigenpairs and refined by Richardson
// extrapolation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mintorus/detail/cyclic_tridiagonal.hpp"
#include "mintorus/errors.hpp"

namespace mintorus {

enum class BoundaryFlavor { periodic, antiperiodic };

inline const char* to_string(BoundaryFlavor bc) {
  return bc == BoundaryFlavor::periodic ? "periodic" : "antiperiodic";
}

inline double flavor_sign(BoundaryFlavor bc) { return bc == BoundaryFlavor::periodic ? 1.0 : -1.0; }

using Coefficient = std::function<double(double)>;

struct SLProblem {
  Coefficient p;
  Coefficient q;
  Coefficient r;
  double period = 0.0;
  BoundaryFlavor bc = BoundaryFlavor::periodic;
  int grid_size = 1024;

  SLProblem with_grid(int n) const {
    SLProblem copy = *this;
    copy.grid_size = n;
    return copy;
  }
};

/// Checks positivity of p and r on the grid and T-periodicity of p, q, r.
inline void validate(const SLProblem& problem) {
  if (!problem.p || !problem.q || !problem.r) throw InvalidArgument("SL problem has an empty coefficient");
  if (!(problem.period > 0.0)) throw InvalidArgument("SL period must be positive");
  const int n = problem.grid_size;
  const double h = problem.period / n;
  for (int i = 0; i < 2 * n; ++i) {
    const double x = 0.5 * i * h;
    if (!(problem.p(x) > 0.0)) throw InvalidArgument("p is not positive at x=" + std::to_string(x));
    if (!(problem.r(x) > 0.0)) throw InvalidArgument("r is not positive at x=" + std::to_string(x));
  }
  auto periodic = [&](const Coefficient& f) {
    const double a = f(0.0), b = f(problem.period);
    return std::abs(a - b) < 1e-13 * (1.0 + std::abs(a));
  };
  if (!periodic(problem.p) || !periodic(problem.q) || !periodic(problem.r))
    throw InvalidArgument("SL coefficients are not periodic over the stated period");
}

/// Discrete pencil (A, B) of size N. A is cyclic tridiagonal, B = diag(weight).
struct Pencil {
  double spacing = 0.0;
  BoundaryFlavor bc = BoundaryFlavor::periodic;
  std::vector<double> flux;    ///< p at half points x_{i+1/2}
  std::vector<double> q;       ///< q at nodes
  std::vector<double> weight;  ///< r at nodes
  std::vector<double> diag;    ///< A_{ii}
  std::vector<double> off;     ///< A_{i,i+1}; off[N-1] is the wraparound entry A_{N-1,0}

  std::size_t size() const { return diag.size(); }

  /// h^T A h in flux form; no cancellation for smooth vectors.
  double energy(std::span<const double> h) const {
    const std::size_t n = size();
    const double s = flavor_sign(bc);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double next = i + 1 < n ? h[i + 1] : s * h[0];
      const double diff = next - h[i];
      sum += flux[i] * diff * diff;
    }
    sum /= spacing * spacing;
    for (std::size_t i = 0; i < n; ++i) sum += q[i] * h[i] * h[i];
    return sum;
  }

  double mass(std::span<const double> h) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < size(); ++i) sum += weight[i] * h[i] * h[i];
    return sum;
  }
};

inline Pencil assemble(const SLProblem& problem) {
  const int n = problem.grid_size;
  if (n < 32 || n % 2 != 0) throw InvalidArgument("grid size must be even and at least 32");
  validate(problem);
  Pencil pencil;
  pencil.bc = problem.bc;
  pencil.spacing = problem.period / n;
  const double h = pencil.spacing;
  const double h2 = h * h;
  pencil.flux.resize(n);
  pencil.q.resize(n);
  pencil.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    pencil.flux[i] = problem.p((i + 0.5) * h);
    pencil.q[i] = problem.q(i * h);
    pencil.weight[i] = problem.r(i * h);
    if (!(pencil.weight[i] > 0.0) || !(pencil.flux[i] > 0.0))
      throw InvalidArgument("non-positive sampled p or r");
  }
  pencil.diag.resize(n);
  pencil.off.resize(n);
  for (int i = 0; i < n; ++i) {
    const double left = pencil.flux[(i + n - 1) % n];
    pencil.diag[i] = (pencil.flux[i] + left) / h2 + pencil.q[i];
    pencil.off[i] = -pencil.flux[i] / h2;
  }
  pencil.off[n - 1] *= flavor_sign(problem.bc);
  return pencil;
}

/// Number of zeros on [0, T) of a grid function, counted as sign changes
/// including the wraparound pair. Entries below 1e-8 * max|h| take the sign of
/// the nearest significant neighbour.
inline int zero_count(std::span<const double> h, BoundaryFlavor bc) {
  const int n = static_cast<int>(h.size());
  double peak = 0.0;
  for (double v : h) peak = std::max(peak, std::abs(v));
  if (n == 0 || !(peak > 0.0) || !std::isfinite(peak)) throw InvalidArgument("zero_count of a vanishing vector");
  const double floor = 1e-8 * peak;
  const double s = flavor_sign(bc);

  // sign at an arbitrary integer index on the infinite periodic/antiperiodic extension
  auto raw_sign = [&](long k) -> int {
    const long wraps = k >= 0 ? k / n : -((-k + n - 1) / n);
    const long idx = k - wraps * n;
    const double v = h[idx] * ((wraps % 2 != 0) ? s : 1.0);
    if (std::abs(v) < floor) return 0;
    return v > 0.0 ? 1 : -1;
  };
  auto snapped = [&](long k) -> int {
    int sg = raw_sign(k);
    for (long d = 1; sg == 0 && d <= n; ++d) {
      sg = raw_sign(k - d);
      if (sg == 0) sg = raw_sign(k + d);
    }
    return sg;
  };

  int changes = 0;
  int prev = snapped(0);
  const int first = prev;
  for (int i = 1; i < n; ++i) {
    const int cur = snapped(i);
    if (cur != prev) ++changes;
    prev = cur;
  }
  if (static_cast<int>(s) * first != prev) ++changes;
  return changes;
}

/// Zeros on [0, T) demanded by the oscillation theorem for the index-th eigenfunction.
inline int expected_zero_count(int index, BoundaryFlavor bc) {
  if (bc == BoundaryFlavor::periodic) return index == 0 ? 0 : 2 * ((index + 1) / 2);
  return 2 * (index / 2) + 1;
}

/// Reflection x -> T - x of a grid function on the uniform grid x_i = i T / N.
inline std::vector<double> reflect(std::span<const double> h, BoundaryFlavor bc) {
  const std::size_t n = h.size();
  std::vector<double> out(n);
  out[0] = flavor_sign(bc) * h[0];
  for (std::size_t i = 1; i < n; ++i) out[i] = h[n - i];
  return out;
}

struct SLSpectrum {
  std::vector<double> eigenvalues;
  /// r-orthonormal grid functions on the (finest) grid.
  std::vector<std::vector<double>> eigenvectors;
  std::vector<int> zero_counts;
  /// |lambda_N - lambda_2N| / 3 per eigenvalue when extrapolated, else 0.
  std::vector<double> error_estimates;
  int grid_size = 0;
  bool extrapolated = false;
  BoundaryFlavor bc = BoundaryFlavor::periodic;
  double period = 0.0;

  double max_error_estimate() const {
    double e = 0.0;
    for (double v : error_estimates) e = std::max(e, v);
    return e;
  }
};

/// r-weighted inner product on the grid.
inline double weighted_dot(std::span<const double> weight, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += weight[i] * a[i] * b[i];
  return s;
}

inline SLSpectrum solve(const Pencil& pencil, int count) {
  const std::size_t n = pencil.size();
  if (count < 1 || static_cast<std::size_t>(count) > n / 4)
    throw InvalidArgument("eigenpair count must lie in [1, N/4]");

  // C = B^{-1/2} A B^{-1/2}
  detail::CyclicTridiagonal c;
  c.d.resize(n);
  c.e.resize(n);
  std::vector<double> inv_sqrt_w(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt_w[i] = 1.0 / std::sqrt(pencil.weight[i]);
  for (std::size_t i = 0; i < n; ++i) {
    c.d[i] = pencil.diag[i] * inv_sqrt_w[i] * inv_sqrt_w[i];
    c.e[i] = pencil.off[i] * inv_sqrt_w[i] * inv_sqrt_w[(i + 1) % n];
  }

  const std::vector<double> rough = detail::lowest_eigenvalues(c, count);
  for (double v : rough)
    if (!std::isfinite(v)) throw SolverError("symmetric eigensolve produced a non-finite eigenvalue");
  std::vector<std::vector<double>> z = detail::eigenvectors(c, rough);

  SLSpectrum out;
  out.grid_size = static_cast<int>(n);
  out.bc = pencil.bc;
  out.period = pencil.spacing * static_cast<double>(n);
  out.error_estimates.assign(count, 0.0);
  for (int j = 0; j < count; ++j) {
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = z[j][i] * inv_sqrt_w[i];
    const double mass = pencil.mass(h);
    const double norm = std::sqrt(mass);
    for (double& v : h) v /= norm;
    // deterministic sign: first significant component positive
    double peak = 0.0;
    for (double v : h) peak = std::max(peak, std::abs(v));
    for (double v : h) {
      if (std::abs(v) > 1e-8 * peak) {
        if (v < 0.0)
          for (double& w : h) w = -w;
        break;
      }
    }
    out.eigenvalues.push_back(pencil.energy(h));
    out.zero_counts.push_back(zero_count(h, pencil.bc));
    out.eigenvectors.push_back(std::move(h));
  }

  // Rayleigh refinement can reorder members of a tight cluster
  std::vector<int> order(count);
  for (int j = 0; j < count; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return out.eigenvalues[a] < out.eigenvalues[b]; });
  SLSpectrum sorted = out;
  for (int j = 0; j < count; ++j) {
    sorted.eigenvalues[j] = out.eigenvalues[order[j]];
    sorted.eigenvectors[j] = std::move(out.eigenvectors[order[j]]);
    sorted.zero_counts[j] = out.zero_counts[order[j]];
  }
  return sorted;
}

inline SLSpectrum solve(const SLProblem& problem, int count) { return solve(assemble(problem), count); }

/// One Richardson level from grids N and 2N.
inline SLSpectrum richardson(const SLSpectrum& coarse, SLSpectrum fine) {
  const std::size_t count = std::min(coarse.eigenvalues.size(), fine.eigenvalues.size());
  for (std::size_t j = 0; j < count; ++j) {
    const double c = coarse.eigenvalues[j], f = fine.eigenvalues[j];
    fine.eigenvalues[j] = (4.0 * f - c) / 3.0;
    fine.error_estimates[j] = std::abs(c - f) / 3.0;
  }
  fine.extrapolated = true;
  return fine;
}

/// Extrapolated spectrum from grid sizes problem.grid_size and twice that.
inline SLSpectrum extrapolate(const SLProblem& problem, int count) {
  const SLSpectrum coarse = solve(problem, count);
  return richardson(coarse, solve(problem.with_grid(2 * problem.grid_size), count));
}

/// Richardson-extrapolated spectrum whose error estimates all fall below
/// target_tol. The grid is doubled at most four times.
inline SLSpectrum refine(const SLProblem& problem, int count, double target_tol) {
  if (!(target_tol >= 1e-10)) throw InvalidArgument("refine target tolerance must be >= 1e-10");
  constexpr int kMaxEscalations = 4;
  int n = problem.grid_size;
  SLSpectrum coarse = solve(problem, count);
  SLSpectrum result;
  for (int level = 0; level <= kMaxEscalations; ++level) {
    SLSpectrum fine = solve(problem.with_grid(2 * n), count);
    result = richardson(coarse, fine);
    if (result.max_error_estimate() <= target_tol) return result;
    coarse = std::move(fine);
    n *= 2;
  }
  throw SolverError("refinement did not converge: achieved error estimate " +
                    std::to_string(result.max_error_estimate()) + " > " + std::to_string(target_tol) +
                    " at N=" + std::to_string(result.grid_size));
}

}  // namespace mintorus

#endif  // MINTORUS_STURM_LIOUVILLE_HPP
