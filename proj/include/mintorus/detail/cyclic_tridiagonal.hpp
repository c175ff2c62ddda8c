#ifndef MINTORUS_DETAIL_CYCLIC_TRIDIAGONAL_HPP
#define MINTORUS_DETAIL_CYCLIC_TRIDIAGONAL_HPP

// Lowest eigenpairs of a real symmetric cyclic tridiagonal matrix in O(N) per
// eigenpair: bisection on the Sylvester inertia, then inverse iteration.

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mintorus/errors.hpp"

namespace mintorus::detail {

/// Symmetric matrix with diagonal d, couplings e[i] between i and (i+1) mod N.
/// e[N-1] is the wraparound coupling between N-1 and 0.
struct CyclicTridiagonal {
  std::vector<double> d;
  std::vector<double> e;

  std::size_t size() const { return d.size(); }

  double norm_inf() const {
    const std::size_t n = size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      best = std::max(best, std::abs(d[i]) + std::abs(e[i]) + std::abs(e[(i + n - 1) % n]));
    return best;
  }
};

/// Number of eigenvalues strictly below mu.
///
/// LDL^T of (C - mu I) eliminating rows 0..N-2 in order; the wraparound
/// coupling produces a fill-in spike in the last column whose Schur complement
/// yields the final pivot.
inline int count_below(const CyclicTridiagonal& c, double mu, double pivmin) {
  const std::size_t n = c.size();
  int negatives = 0;
  double d_prev = c.d[0] - mu;
  if (std::abs(d_prev) < pivmin) d_prev = -pivmin;
  if (d_prev < 0.0) ++negatives;
  double spike = c.e[n - 1];
  double schur = spike * spike / d_prev;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double l = c.e[i - 1] / d_prev;
    double d = c.d[i] - mu - l * c.e[i - 1];
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++negatives;
    spike = (i + 2 == n ? c.e[i] : 0.0) - l * spike;
    schur += spike * spike / d;
    d_prev = d;
  }
  double last = c.d[n - 1] - mu - schur;
  if (std::abs(last) < pivmin) last = -pivmin;
  if (last < 0.0) ++negatives;
  return negatives;
}

/// Lowest `count` eigenvalues by bisection, sharing inertia information
/// between brackets.
inline std::vector<double> lowest_eigenvalues(const CyclicTridiagonal& c, int count) {
  const std::size_t n = c.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::abs(c.e[i]) + std::abs(c.e[(i + n - 1) % n]);
    lo = std::min(lo, c.d[i] - r);
    hi = std::max(hi, c.d[i] + r);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  const double eps = std::numeric_limits<double>::epsilon();
  const double pivmin = std::max(std::numeric_limits<double>::min() * 1e4, eps * eps * scale);
  lo -= 2.0 * eps * scale + pivmin;
  hi += 2.0 * eps * scale + pivmin;

  std::vector<double> lower(count, lo), upper(count, hi);
  for (int j = 0; j < count; ++j) {
    double a = std::max(lower[j], j > 0 ? lower[j - 1] : lo);
    double b = upper[j];
    for (int iter = 0; iter < 200; ++iter) {
      if (b - a <= 4.0 * eps * std::max(std::abs(a), std::abs(b)) + 8.0 * eps * scale * 1e-3) break;
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const int k = count_below(c, mid, pivmin);
      for (int i = j + 1; i < count; ++i) {
        if (i < k)
          upper[i] = std::min(upper[i], mid);
        else
          lower[i] = std::max(lower[i], mid);
      }
      if (k > j)
        b = mid;
      else
        a = mid;
    }
    lower[j] = a;
    upper[j] = b;
  }
  std::vector<double> values(count);
  for (int j = 0; j < count; ++j) values[j] = 0.5 * (lower[j] + upper[j]);
  return values;
}

/// Banded LU of (C - shift I) in the zig-zag ordering 0, N-1, 1, N-2, ...,
/// where every cyclic neighbour lies within two positions (kl = ku = 2).
class ShiftedCyclicLU {
 public:
  ShiftedCyclicLU(const CyclicTridiagonal& c, double shift) : n_(static_cast<int>(c.size())) {
    position_.resize(n_);
    for (int i = 0; i < n_; ++i) position_[i] = i < (n_ + 1) / 2 ? 2 * i : 2 * (n_ - 1 - i) + 1;
    const double scale = std::max(1.0, c.norm_inf());
    const double eps = std::numeric_limits<double>::epsilon();
    for (int attempt = 0; attempt < 8; ++attempt) {
      factor(c, shift);
      if (info_ == 0) return;
      // exactly singular: nudge the shift
      shift += eps * scale * std::pow(4.0, attempt);
    }
    throw SolverError("banded LU failed for shifted cyclic matrix (info=" + std::to_string(info_) + ")");
  }

  /// Solves in place; x is indexed by node.
  void solve(std::span<double> x) const {
    std::vector<double> b(n_);
    for (int i = 0; i < n_; ++i) b[position_[i]] = x[i];
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl, ku, 1, band_.data(), ldab,
                                           pivots_.data(), b.data(), n_);
    if (info != 0) throw SolverError("banded triangular solve failed (info=" + std::to_string(info) + ")");
    for (int i = 0; i < n_; ++i) x[i] = b[position_[i]];
  }

 private:
  static constexpr int kl = 2;
  static constexpr int ku = 2;
  static constexpr int ldab = 2 * kl + ku + 1;

  void set(int row, int col, double v) {
    // LAPACK band storage: AB(kl + ku + row - col, col)
    band_[static_cast<std::size_t>(col) * ldab + (kl + ku + row - col)] += v;
  }

  void factor(const CyclicTridiagonal& c, double shift) {
    band_.assign(static_cast<std::size_t>(ldab) * n_, 0.0);
    pivots_.assign(n_, 0);
    for (int i = 0; i < n_; ++i) {
      const int pi = position_[i];
      set(pi, pi, c.d[i] - shift);
      const int j = (i + 1) % n_;
      const int pj = position_[j];
      set(pi, pj, c.e[i]);
      set(pj, pi, c.e[i]);
    }
    info_ = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl, ku, band_.data(), ldab, pivots_.data());
  }

  int n_;
  std::vector<int> position_;
  std::vector<double> band_;
  std::vector<lapack_int> pivots_;
  lapack_int info_ = 0;
};

/// Orthonormal eigenvectors for the supplied (sorted) eigenvalues by inverse
/// iteration, orthogonalising within clusters as in LAPACK's dstein.
inline std::vector<std::vector<double>> eigenvectors(const CyclicTridiagonal& c,
                                                     std::span<const double> values) {
  const std::size_t n = c.size();
  const double cluster = 1e-3 * c.norm_inf();
  std::vector<std::vector<double>> vectors;
  vectors.reserve(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const ShiftedCyclicLU lu(c, values[j]);
    std::mt19937_64 rng(0x5eed + j);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = uni(rng);
    for (int iter = 0; iter < 5; ++iter) {
      lu.solve(x);
      for (std::size_t i = 0; i < j; ++i) {
        if (std::abs(values[i] - values[j]) > cluster) continue;
        double dot = 0.0;
        for (std::size_t k = 0; k < n; ++k) dot += vectors[i][k] * x[k];
        for (std::size_t k = 0; k < n; ++k) x[k] -= dot * vectors[i][k];
      }
      double norm = 0.0;
      for (double v : x) norm += v * v;
      norm = std::sqrt(norm);
      if (!(norm > 0.0) || !std::isfinite(norm))
        throw SolverError("inverse iteration broke down at eigenvalue index " + std::to_string(j));
      for (double& v : x) v /= norm;
    }
    vectors.push_back(std::move(x));
  }
  return vectors;
}

}  // namespace mintorus::detail

#endif  // MINTORUS_DETAIL_CYCLIC_TRIDIAGONAL_HPP
