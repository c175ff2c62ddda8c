#ifndef MINTORUS_FLOQUET_HPP
#define MINTORUS_FLOQUET_HPP

// Shooting oracle for periodic Sturm-Liouville spectra: the trace of the
// monodromy matrix of (h, p h')' = (u / p, (q - lambda r) h) over one period.

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <string>

#include "mintorus/errors.hpp"
#include "mintorus/sturm_liouville.hpp"

namespace mintorus {

/// Floquet discriminant D(lambda). lambda is a periodic eigenvalue iff D = 2
/// and an antiperiodic one iff D = -2.
inline double floquet_discriminant(const SLProblem& problem, double lambda, double tol = 1e-12) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 4>;  // two solutions, each (h, p h')

  auto rhs = [&](const State& y, State& dy, double x) {
    const double p = problem.p(x);
    const double v = problem.q(x) - lambda * problem.r(x);
    dy[0] = y[1] / p;
    dy[1] = v * y[0];
    dy[2] = y[3] / p;
    dy[3] = v * y[2];
  };

  State y{1.0, 0.0, 0.0, 1.0};
  double last_x = 0.0;
  auto observer = [&](const State& s, double x) {
    for (double v : s)
      if (!std::isfinite(v))
        throw SolverError("monodromy integration diverged at x=" + std::to_string(x) + " (last good step at x=" +
                          std::to_string(last_x) + ")");
    last_x = x;
  };
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
  try {
    odeint::integrate_adaptive(stepper, rhs, y, 0.0, problem.period, problem.period / 64.0, observer);
  } catch (const SolverError&) {
    throw;
  } catch (const std::exception& ex) {
    throw SolverError("monodromy integration failed after x=" + std::to_string(last_x) + ": " + ex.what());
  }
  return y[0] + y[3];
}

/// Root of D(lambda) -+ 2 bracketed in [lo, hi] (sign must differ at the ends).
inline double floquet_root(const SLProblem& problem, double lo, double hi) {
  const double target = 2.0 * flavor_sign(problem.bc);
  double flo = floquet_discriminant(problem, lo) - target;
  const double fhi = floquet_discriminant(problem, hi) - target;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw SolverError("discriminant root is not bracketed");
  for (int it = 0; it < 100 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = floquet_discriminant(problem, mid) - target;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Eigenvalue located by shooting near `guess`, searching at most `halfwidth`
/// away. Falls back to the sampled minimiser of |D -+ 2| when the root is a
/// tangency (closed gap) and no sign change exists.
inline double floquet_eigenvalue(const SLProblem& problem, double guess, double halfwidth) {
  const double target = 2.0 * flavor_sign(problem.bc);
  auto f = [&](double l) { return floquet_discriminant(problem, l) - target; };
  const double f0 = f(guess);
  if (f0 == 0.0) return guess;
  for (double w = halfwidth / 1024.0; w <= halfwidth * (1.0 + 1e-12); w *= 2.0) {
    const double fl = f(guess - w), fr = f(guess + w);
    if ((fl > 0.0) != (f0 > 0.0) && (fr > 0.0) != (f0 > 0.0)) {
      const double a = floquet_root(problem, guess - w, guess);
      const double b = floquet_root(problem, guess, guess + w);
      return guess - a < b - guess ? a : b;
    }
    if ((fl > 0.0) != (f0 > 0.0)) return floquet_root(problem, guess - w, guess);
    if ((fr > 0.0) != (f0 > 0.0)) return floquet_root(problem, guess, guess + w);
  }
  double best = guess, best_val = std::abs(f0);
  for (int i = -64; i <= 64; ++i) {
    const double l = guess + halfwidth * i / 64.0;
    const double v = std::abs(f(l));
    if (v < best_val) {
      best_val = v;
      best = l;
    }
  }
  return best;
}

}  // namespace mintorus

#endif  // MINTORUS_FLOQUET_HPP
