#ifndef MINTORUS_VERIFY_HPP
#define MINTORUS_VERIFY_HPP

// Verdict ledger for one pair (m, n): the eigenvalue count, the coordinate
// eigenfunctions, the closed-form functional and the non-maximality route.

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mintorus/elliptic.hpp"
#include "mintorus/errors.hpp"
#include "mintorus/geometry.hpp"
#include "mintorus/torus_spectrum.hpp"

namespace mintorus {

enum class CheckStatus { pass, fail, skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "skipped";
  }
}

struct CheckEntry {
  std::string id;
  CheckStatus status = CheckStatus::fail;
  /// Positive when the claim holds with room to spare.
  double margin = 0.0;
  double tolerance = 0.0;
  std::string detail;
  /// Failure raised by a solver rather than by the claim itself.
  bool diagnostic = false;
};

struct VerificationReport {
  TorusParams params;
  std::vector<CheckEntry> checks;

  bool overall() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckEntry& c) { return c.status != CheckStatus::fail; });
  }
  bool has_diagnostic() const {
    return std::any_of(checks.begin(), checks.end(), [](const CheckEntry& c) { return c.diagnostic; });
  }
};

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline CheckEntry judged(std::string id, bool ok, double margin, double tolerance, std::string detail) {
  return {std::move(id), ok ? CheckStatus::pass : CheckStatus::fail, margin, tolerance, std::move(detail), false};
}

inline CheckEntry solver_failure(std::string id, double tolerance, const std::exception& e) {
  return {std::move(id), CheckStatus::fail, -std::numeric_limits<double>::infinity(), tolerance, e.what(), true};
}

/// Runs `body` for the listed ids; a solver exception fails all of them.
template <class Body>
void guarded(std::vector<CheckEntry>& out, const std::vector<std::string>& ids, double tolerance, Body body) {
  try {
    body(out);
  } catch (const SolverError& e) {
    for (const std::string& id : ids) {
      const bool present =
          std::any_of(out.begin(), out.end(), [&](const CheckEntry& c) { return c.id == id; });
      if (!present) out.push_back(solver_failure(id, tolerance, e));
    }
  }
}

}  // namespace detail

inline std::vector<CheckEntry> verify_main_theorem(const TorusParams& params, double tol = kClusterTolerance,
                                                   int grid_size = kDefaultGridSize) {
  if (params.m() + params.n() > 12) throw InvalidArgument("verify_main_theorem requires m+n <= 12");
  if (!(tol >= 1e-10 && tol <= 1e-4)) throw InvalidArgument("tolerance must lie in [1e-10, 1e-4]");
  const int m = params.m(), n = params.n();
  std::vector<CheckEntry> out;

  detail::guarded(out, {"n_two_formula", "multiplicity_at_two"}, tol, [&](std::vector<CheckEntry>& o) {
    const EigenvalueCount count = count_below_two(params, tol, grid_size);
    const int expected = predicted_index(params);
    o.push_back(detail::judged("n_two_formula", count.n_two == expected, -std::abs(count.n_two - expected), 0.0,
                               "N(2)=" + std::to_string(count.n_two) + " expected " + std::to_string(expected)));
    const int mult = count.at_two_multiplicity();
    o.push_back(detail::judged("multiplicity_at_two", mult >= 6, mult - 6, tol,
                               "multiplicity " + std::to_string(mult) + " (at least 6)"));
  });

  struct Indexed {
    const char* id;
    int l;
    int index;
  };
  const Indexed indexed[] = {{"lambda0_at_m_plus_n", m + n, 0}, {"lambda1_at_m", m, 1}, {"lambda2_at_n", n, 2}};
  for (const Indexed& c : indexed) {
    detail::guarded(out, {c.id}, tol, [&](std::vector<CheckEntry>& o) {
      const MergedSpectrum s = merged_spectrum(params, c.l, 6, grid_size);
      const double v = s.eigenvalues.at(c.index);
      o.push_back(detail::judged(c.id, std::abs(v - 2.0) < tol, tol - std::abs(v - 2.0), tol,
                                 "l=" + std::to_string(c.l) + " lambda_" + std::to_string(c.index) + "=" +
                                     detail::fmt(v)));
    });
  }

  const std::vector<std::string> profile_ids = {"coordinate_profile_sin", "coordinate_profile_cos",
                                                "coordinate_profile_h0"};
  detail::guarded(out, profile_ids, tol, [&](std::vector<CheckEntry>& o) {
    for (const ProfileMatch& p : coordinate_eigen_check(params, tol, grid_size)) {
      const double margin = p.correlation - (1.0 - 1e-6);
      o.push_back(detail::judged("coordinate_profile_" + p.name, p.eigenvalue_ok && p.correlation_ok, margin, 1e-6,
                                 "l=" + std::to_string(p.l) + " " + to_string(p.flavor) +
                                     " eigenvalue=" + detail::fmt(p.eigenvalue) +
                                     " correlation=" + detail::fmt(p.correlation)));
    }
  });

  detail::guarded(out, {"lambda3_at_zero"}, 1e-4, [&](std::vector<CheckEntry>& o) {
    const MergedSpectrum s = merged_spectrum(params, 0, 6, grid_size);
    const double v = s.eigenvalues.at(3);
    o.push_back(detail::judged("lambda3_at_zero", v - 2.0 > 1e-4, v - 2.0, 1e-4, "lambda_3(0)=" + detail::fmt(v)));
  });

  // fixed order regardless of where a failure occurred
  const std::vector<std::string> order = {"n_two_formula",         "lambda0_at_m_plus_n",    "lambda1_at_m",
                                          "lambda2_at_n",          "coordinate_profile_sin", "coordinate_profile_cos",
                                          "coordinate_profile_h0", "multiplicity_at_two",    "lambda3_at_zero"};
  std::vector<CheckEntry> sorted;
  for (const std::string& id : order)
    for (const CheckEntry& c : out)
      if (c.id == id) sorted.push_back(c);
  return sorted;
}

/// The elliptic bound K(k) - 2E(k)/(2 - k^2) >= 0 at the pair's modulus and
/// the non-maximality margin 8 pi index - Lambda_index.
inline std::vector<CheckEntry> verify_nonmaximality(const TorusParams& params) {
  std::vector<CheckEntry> out;
  const FunctionalReport f = functional_value(params);
  if (params.m() == 1 && params.n() == 1) {
    out.push_back({"nonmaximality", CheckStatus::skipped, f.nonmax_margin, 0.0,
                   "not applicable to (1,1)", false});
  } else {
    out.push_back(detail::judged("nonmaximality", f.nonmax_margin > 0.0, f.nonmax_margin, 0.0,
                                 "8*pi*" + std::to_string(f.index) + " - Lambda_" + std::to_string(f.index) + " = " +
                                     detail::fmt(8.0 * kPi * f.index) + " - " + detail::fmt(f.lambda_closed)));
  }
  const EllipticPair ke = agm_KE(modulus(params));
  const double ek = ke.K - 2.0 / (2.0 - ke.k * ke.k) * ke.E;
  out.push_back(detail::judged("ek_inequality", ek >= -1e-14, ek, 1e-14, "k=" + detail::fmt(ke.k)));
  return out;
}

/// f(x) = 4(1 + x) - pi sqrt(1 + 2x), the bound left after E <= pi/2.
inline double reduced_bound(double x) { return 4.0 * (1.0 + x) - kPi * std::sqrt(1.0 + 2.0 * x); }

/// min of reduced_bound over [0, 1]: 1e4-point grid then Brent refinement.
inline std::pair<double, double> reduced_bound_minimum() {
  constexpr int kPoints = 10000;
  int best = 0;
  for (int i = 1; i <= kPoints; ++i)
    if (reduced_bound(double(i) / kPoints) < reduced_bound(double(best) / kPoints)) best = i;
  const double lo = std::max(0.0, double(best - 1) / kPoints), hi = std::min(1.0, double(best + 1) / kPoints);
  auto r = boost::math::tools::brent_find_minima(reduced_bound, lo, hi, 52);
  double x = double(best) / kPoints, v = reduced_bound(x);
  if (r.second < v) {
    x = r.first;
    v = r.second;
  }
  return {x, v};
}

/// Margin of the pre-reduction inequality
///   sqrt(S) (1 - 2mn/(m^2+4mn+n^2)) E(k) <= 2(m+n) - 3      (odd mn)
///                                        <= (4(m+n) - 3)/2  (even mn)
/// with S = m^2 + 2mn.
inline double parent_inequality_margin(const TorusParams& params) {
  const double m = params.m(), n = params.n();
  const double s = m * m + 2.0 * m * n;
  const double lhs = std::sqrt(s) * (1.0 - 2.0 * m * n / (m * m + 4.0 * m * n + n * n)) * agm_KE(modulus(params)).E;
  const double rhs = params.odd() ? 2.0 * (m + n) - 3.0 : 0.5 * (4.0 * (m + n) - 3.0);
  return rhs - lhs;
}

inline const std::vector<std::pair<int, int>>& exceptional_pairs() {
  static const std::vector<std::pair<int, int>> pairs = {{3, 1}, {5, 1}, {5, 3}, {7, 1},
                                                         {7, 3}, {7, 5}, {2, 1}, {3, 2}};
  return pairs;
}

inline std::vector<CheckEntry> verify_inequality_chain(int m_max = 40) {
  if (m_max < 7 || m_max > 40) throw InvalidArgument("m_max must lie in [7, 40]");
  std::vector<CheckEntry> out;
  const auto [xmin, fmin] = reduced_bound_minimum();

  // odd parity route: 6/m <= min f for m >= 7
  double odd_margin = std::numeric_limits<double>::infinity();
  for (int m = 7; m <= m_max; ++m) odd_margin = std::min(odd_margin, fmin - 6.0 / m);
  out.push_back(detail::judged("reduced_inequality_odd", odd_margin >= 0.0, odd_margin, 0.0,
                               "min f=" + detail::fmt(fmin) + " at x=" + detail::fmt(xmin) + ", m in [7," +
                                   std::to_string(m_max) + "]"));

  // the same route must fail at m = 6 and be tight at m = 7
  const double m6 = fmin - 1.0, m7 = fmin - 6.0 / 7.0;
  out.push_back(detail::judged("reduced_inequality_sentinel", m6 < 0.0 && m7 >= 0.0 && m7 < 0.002, -m6, 0.002,
                               "m=6 margin " + detail::fmt(m6) + ", m=7 margin " + detail::fmt(m7)));

  // even parity route: 3/m <= min f for m >= 4
  double even_margin = std::numeric_limits<double>::infinity();
  for (int m = 4; m <= m_max; ++m) even_margin = std::min(even_margin, fmin - 3.0 / m);
  out.push_back(detail::judged("reduced_inequality_even", even_margin >= 0.0, even_margin, 0.0,
                               "m in [4," + std::to_string(m_max) + "]"));

  for (const auto& [m, n] : exceptional_pairs()) {
    const TorusParams p = TorusParams::create(m, n);
    const double parent = parent_inequality_margin(p);
    const FunctionalReport f = functional_value(p);
    out.push_back(detail::judged("exceptional_pair_" + std::to_string(m) + "_" + std::to_string(n),
                                 parent >= 0.0 && f.nonmax_margin > 0.0, parent, 0.0,
                                 "direct margin 8*pi*index - Lambda = " + detail::fmt(f.nonmax_margin)));
  }
  return out;
}

/// verify_main_theorem followed by verify_nonmaximality.
inline VerificationReport full_report(const TorusParams& params, double tol = kClusterTolerance,
                                      int grid_size = kDefaultGridSize) {
  VerificationReport report{params, verify_main_theorem(params, tol, grid_size)};
  for (CheckEntry& c : verify_nonmaximality(params)) report.checks.push_back(std::move(c));
  return report;
}

}  // namespace mintorus

#endif  // MINTORUS_VERIFY_HPP
