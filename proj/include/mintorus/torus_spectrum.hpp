#ifndef MINTORUS_TORUS_SPECTRUM_HPP
#define MINTORUS_TORUS_SPECTRUM_HPP

// Laplacian spectrum of the torus M_{m,n} via separation of variables: for
// each y-frequency l a periodic Sturm-Liouville problem in x on [0, pi].

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mintorus/errors.hpp"
#include "mintorus/geometry.hpp"
#include "mintorus/sturm_liouville.hpp"

namespace mintorus {

inline constexpr int kDefaultGridSize = 1024;
/// Eigenvalues closer than this after extrapolation are treated as equal.
inline constexpr double kClusterTolerance = 1e-6;

namespace detail {

inline SLProblem torus_problem(const TorusParams& params, int l, BoundaryFlavor flavor, int grid_size) {
  if (l < 0) throw InvalidArgument("frequency l must be non-negative");
  const int m = params.m(), n = params.n();
  const double ll = 2.0 * l * l;
  SLProblem problem;
  problem.p = [m, n](double x) { return sigma(m, n, x); };
  problem.q = [m, n, ll](double x) { return ll / sigma(m, n, x); };
  problem.r = [m, n](double x) { return rho(m, n, x) / sigma(m, n, x); };
  problem.period = kPi;
  problem.bc = flavor;
  problem.grid_size = grid_size;
  return problem;
}

}  // namespace detail

/// The l-th separated problem (p, q, r) = (sigma, 2 l^2 / sigma, rho / sigma) on [0, pi].
/// For odd mn only the flavor with sign (-1)^l is admitted.
inline SLProblem build_problem(const TorusParams& params, int l, BoundaryFlavor flavor,
                               int grid_size = kDefaultGridSize) {
  if (params.odd() && flavor != (l % 2 == 0 ? BoundaryFlavor::periodic : BoundaryFlavor::antiperiodic))
    throw InvalidArgument("for odd mn the l=" + std::to_string(l) + " problem admits only the " +
                          (l % 2 == 0 ? "periodic" : "antiperiodic") + " flavor");
  return detail::torus_problem(params, l, flavor, grid_size);
}

/// Same problem without the parity restriction; used for the full 2*pi spectrum.
inline SLProblem build_problem_unrestricted(const TorusParams& params, int l, BoundaryFlavor flavor,
                                            int grid_size = kDefaultGridSize) {
  return detail::torus_problem(params, l, flavor, grid_size);
}

inline std::vector<BoundaryFlavor> admitted_flavors(const TorusParams& params, int l) {
  if (params.odd()) return {l % 2 == 0 ? BoundaryFlavor::periodic : BoundaryFlavor::antiperiodic};
  return {BoundaryFlavor::periodic, BoundaryFlavor::antiperiodic};
}

/// The l-problem on [0, 2*pi) as the union of its pi-periodic and
/// pi-antiperiodic spectra, sorted. Zero counts are on [0, 2*pi).
struct MergedSpectrum {
  int l = 0;
  std::vector<double> eigenvalues;
  std::vector<double> error_estimates;
  std::vector<BoundaryFlavor> origin;
  std::vector<int> zero_counts;
  /// Index into the per-flavor spectrum the entry came from.
  std::vector<int> flavor_index;
  SLSpectrum periodic;
  SLSpectrum antiperiodic;

  const SLSpectrum& flavor(BoundaryFlavor bc) const {
    return bc == BoundaryFlavor::periodic ? periodic : antiperiodic;
  }
};

inline MergedSpectrum merge_spectra(int l, SLSpectrum periodic, SLSpectrum antiperiodic) {
  MergedSpectrum out;
  out.l = l;
  struct Entry {
    double value;
    double err;
    BoundaryFlavor bc;
    int zeros;
    int index;
  };
  std::vector<Entry> all;
  for (std::size_t i = 0; i < periodic.eigenvalues.size(); ++i)
    all.push_back({periodic.eigenvalues[i], periodic.error_estimates[i], BoundaryFlavor::periodic,
                   2 * periodic.zero_counts[i], static_cast<int>(i)});
  for (std::size_t i = 0; i < antiperiodic.eigenvalues.size(); ++i)
    all.push_back({antiperiodic.eigenvalues[i], antiperiodic.error_estimates[i], BoundaryFlavor::antiperiodic,
                   2 * antiperiodic.zero_counts[i], static_cast<int>(i)});
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });
  // only the prefix below both flavors' largest computed value is complete
  double complete = std::numeric_limits<double>::infinity();
  if (!periodic.eigenvalues.empty()) complete = std::min(complete, periodic.eigenvalues.back());
  if (!antiperiodic.eigenvalues.empty()) complete = std::min(complete, antiperiodic.eigenvalues.back());
  for (const Entry& e : all) {
    if (e.value > complete) break;
    out.eigenvalues.push_back(e.value);
    out.error_estimates.push_back(e.err);
    out.origin.push_back(e.bc);
    out.zero_counts.push_back(e.zeros);
    out.flavor_index.push_back(e.index);
  }
  out.periodic = std::move(periodic);
  out.antiperiodic = std::move(antiperiodic);
  return out;
}

/// Extrapolated spectrum of the l-problem on [0, 2*pi) with at least
/// `count_per_flavor` eigenvalues from each flavor (parity restriction ignored).
inline MergedSpectrum merged_spectrum(const TorusParams& params, int l, int count_per_flavor,
                                      int grid_size = kDefaultGridSize) {
  return merge_spectra(
      l, extrapolate(build_problem_unrestricted(params, l, BoundaryFlavor::periodic, grid_size), count_per_flavor),
      extrapolate(build_problem_unrestricted(params, l, BoundaryFlavor::antiperiodic, grid_size), count_per_flavor));
}

/// Eigenvalues of one l-level, split into those below and at 2.
struct LevelCount {
  int l = 0;
  int weight = 1;
  std::vector<double> below;
  std::vector<double> at_two;
};

struct EigenvalueCount {
  int n_two = 0;
  double tol = 0.0;
  std::vector<LevelCount> per_l;

  int at_two_multiplicity() const {
    int total = 0;
    for (const LevelCount& lc : per_l) total += lc.weight * static_cast<int>(lc.at_two.size());
    return total;
  }
};

namespace detail {

enum class Band { below, at_two, above, ambiguous };

inline Band classify(double value, double err, double tol) {
  const double lo = value - err, hi = value + err;
  if (hi < 2.0 - tol) return Band::below;
  if (lo > 2.0 + tol) return Band::above;
  if (lo >= 2.0 - tol && hi <= 2.0 + tol) return Band::at_two;
  return Band::ambiguous;
}

/// Extrapolated spectrum covering every eigenvalue up to 2 + tol, with every
/// eigenvalue unambiguously classified against the band [2 - tol, 2 + tol].
inline SLSpectrum classified_spectrum(const SLProblem& problem, double tol) {
  constexpr int kMaxEscalations = 4;
  SLProblem current = problem;
  int count = 8;
  std::string last_issue;
  for (int level = 0; level <= kMaxEscalations; ++level) {
    SLSpectrum spec;
    for (;;) {
      if (count > current.grid_size / 4) throw SolverError("too many eigenvalues below 2 for grid " +
                                                           std::to_string(current.grid_size));
      spec = extrapolate(current, count);
      const double top = spec.eigenvalues.back();
      if (top - spec.error_estimates.back() > 2.0 + tol) break;
      count *= 2;
    }
    bool ambiguous = false;
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
      if (classify(spec.eigenvalues[i], spec.error_estimates[i], tol) == Band::ambiguous) {
        ambiguous = true;
        last_issue = "eigenvalue " + std::to_string(spec.eigenvalues[i]) + " with error estimate " +
                     std::to_string(spec.error_estimates[i]);
        break;
      }
    }
    if (!ambiguous) return spec;
    current.grid_size *= 2;
  }
  throw SolverError("cannot classify against the band 2 +- " + std::to_string(tol) + " after refinement to N=" +
                    std::to_string(current.grid_size) + ": " + last_issue);
}

}  // namespace detail

/// Weyl count N(2) = #{eigenvalues < 2} with multiplicities, plus the
/// eigenvalues found inside the band around 2.
inline EigenvalueCount count_below_two(const TorusParams& params, double tol = kClusterTolerance,
                                       int grid_size = kDefaultGridSize) {
  if (!(tol >= 1e-10 && tol <= 1e-4)) throw InvalidArgument("count tolerance must lie in [1e-10, 1e-4]");
  EigenvalueCount result;
  result.tol = tol;
  // lambda_0(l) is increasing in l, so the first l whose ground state clears 2 + tol ends the scan
  for (int l = 0;; ++l) {
    const SLSpectrum ground =
        extrapolate(build_problem_unrestricted(params, l, BoundaryFlavor::periodic, grid_size), 1);
    if (ground.eigenvalues[0] - ground.error_estimates[0] > 2.0 + tol) break;
    if (l > 4 * (params.m() + params.n()) + 8)
      throw SolverError("ground state failed to exceed 2 within the expected frequency range");

    LevelCount level;
    level.l = l;
    level.weight = l == 0 ? 1 : 2;
    for (BoundaryFlavor bc : admitted_flavors(params, l)) {
      const SLSpectrum spec = detail::classified_spectrum(build_problem(params, l, bc, grid_size), tol);
      for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
        switch (detail::classify(spec.eigenvalues[i], spec.error_estimates[i], tol)) {
          case detail::Band::below: level.below.push_back(spec.eigenvalues[i]); break;
          case detail::Band::at_two: level.at_two.push_back(spec.eigenvalues[i]); break;
          default: break;
        }
      }
    }
    std::sort(level.below.begin(), level.below.end());
    std::sort(level.at_two.begin(), level.at_two.end());
    result.n_two += level.weight * static_cast<int>(level.below.size());
    result.per_l.push_back(std::move(level));
  }
  return result;
}

inline int eigenvalue_two_multiplicity(const TorusParams& params, double tol = kClusterTolerance,
                                       int grid_size = kDefaultGridSize) {
  return count_below_two(params, tol, grid_size).at_two_multiplicity();
}

/// Index of the Weyl count predicted for the family: 4(m+n)-3 or 2(m+n)-3.
inline int predicted_index(const TorusParams& params) {
  const int s = params.m() + params.n();
  return params.odd() ? 2 * s - 3 : 4 * s - 3;
}

/// Result of matching one coordinate profile against the spectrum.
struct ProfileMatch {
  std::string name;
  int l = 0;
  BoundaryFlavor flavor = BoundaryFlavor::periodic;
  double eigenvalue = 0.0;
  /// Norm of the r-orthogonal projection of the profile onto the eigenspace,
  /// relative to the profile norm.
  double correlation = 0.0;
  int zero_count = 0;
  bool eigenvalue_ok = false;
  bool correlation_ok = false;
};

inline std::vector<ProfileMatch> coordinate_eigen_check(const TorusParams& params, double tol = kClusterTolerance,
                                                        int grid_size = kDefaultGridSize) {
  std::vector<ProfileMatch> matches;
  for (const CoordinateProfile& profile : coordinate_profiles(params)) {
    ProfileMatch match;
    match.name = profile.name;
    match.l = profile.frequency;
    match.flavor = profile.pi_periodic ? BoundaryFlavor::periodic : BoundaryFlavor::antiperiodic;
    const SLSpectrum spec = extrapolate(build_problem(params, match.l, match.flavor, grid_size), 8);

    std::size_t nearest = 0;
    for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i)
      if (std::abs(spec.eigenvalues[i] - 2.0) < std::abs(spec.eigenvalues[nearest] - 2.0)) nearest = i;
    match.eigenvalue = spec.eigenvalues[nearest];
    match.zero_count = spec.zero_counts[nearest];

    const int n = spec.grid_size;
    const double h = kPi / n;
    std::vector<double> sample(n), weight(n);
    const SLProblem fine = build_problem(params, match.l, match.flavor, n);
    for (int i = 0; i < n; ++i) {
      sample[i] = profile.profile(i * h);
      weight[i] = fine.r(i * h);
    }
    const double total = weighted_dot(weight, sample, sample);
    double projected = 0.0;
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
      if (std::abs(spec.eigenvalues[i] - match.eigenvalue) >= kClusterTolerance) continue;
      const double c = weighted_dot(weight, spec.eigenvectors[i], sample);
      projected += c * c;
    }
    match.correlation = std::sqrt(projected / total);
    match.eigenvalue_ok = std::abs(match.eigenvalue - 2.0) < tol;
    match.correlation_ok = match.correlation > 1.0 - 1e-6;
    matches.push_back(match);
  }
  return matches;
}

}  // namespace mintorus

#endif  // MINTORUS_TORUS_SPECTRUM_HPP
