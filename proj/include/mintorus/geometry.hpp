#ifndef MINTORUS_GEOMETRY_HPP
#define MINTORUS_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "mintorus/errors.hpp"

namespace mintorus {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

/// Coprime pair m >= n >= 1 indexing the torus family.
class TorusParams {
 public:
  static TorusParams create(int m, int n) {
    if (n < 1 || m < n)
      throw InvalidArgument("torus parameters require m >= n >= 1, got m=" + std::to_string(m) +
                            ", n=" + std::to_string(n));
    if (std::gcd(m, n) != 1)
      throw InvalidArgument("torus parameters must be coprime, got gcd(" + std::to_string(m) + "," +
                            std::to_string(n) + ")=" + std::to_string(std::gcd(m, n)));
    return TorusParams(m, n);
  }

  int m() const { return m_; }
  int n() const { return n_; }
  Parity parity() const { return (m_ * n_) % 2 == 1 ? Parity::odd : Parity::even; }
  bool odd() const { return parity() == Parity::odd; }

  friend bool operator==(const TorusParams&, const TorusParams&) = default;

 private:
  TorusParams(int m, int n) : m_(m), n_(n) {}
  int m_;
  int n_;
};

/// Point of the unit 5-sphere in C^3, stored as (Re c1, Im c1, Re c2, Im c2, Re c3, Im c3).
struct ImmersionPoint {
  std::array<double, 6> coords{};

  double norm_squared() const {
    double s = 0.0;
    for (double c : coords) s += c * c;
    return s;
  }
};

inline double distance(const ImmersionPoint& a, const ImmersionPoint& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 6; ++i) s += (a.coords[i] - b.coords[i]) * (a.coords[i] - b.coords[i]);
  return std::sqrt(s);
}

/// Reduces an angle into [0, 2*pi).
inline double reduce_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

struct CoefficientField {
  double sigma;
  double rho;
  double g_xx;
  double g_yy;
};

namespace detail {

inline double sigma(int m, int n, double x) {
  const double md = m, nd = n;
  return std::sqrt(md * md + 4.0 * md * nd + nd * nd - (md * md - nd * nd) * std::cos(2.0 * x));
}

inline double rho(int m, int n, double x) {
  const double md = m, nd = n;
  return (md + nd) * (md + nd - (md - nd) * std::cos(2.0 * x));
}

inline double third_profile(int m, int n, double x) {
  const double md = m, nd = n;
  const double c = std::cos(x), s = std::sin(x);
  return std::sqrt(nd * c * c / (md + 2.0 * nd) + md * s * s / (2.0 * md + nd));
}

}  // namespace detail

namespace detail {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// evaluated in extended precision so that shifted sample points and the
// products m*y carry no visible rounding
inline ImmersionPoint immerse_extended(int m, int n, long double x, long double y) {
  const long double two_pi = 2.0L * kPiL;
  x = std::fmod(x, two_pi);
  y = std::fmod(y, two_pi);
  const long double md = m, nd = n;
  const long double sx = std::sin(x), cx = std::cos(x);
  const long double a1 = std::sqrt((md + nd) / (2.0L * md + nd)) * sx;
  const long double a2 = std::sqrt((md + nd) / (md + 2.0L * nd)) * cx;
  const long double a3 = std::sqrt(nd * cx * cx / (md + 2.0L * nd) + md * sx * sx / (2.0L * md + nd));
  const long double t1 = std::fmod(md * y, two_pi);
  const long double t2 = std::fmod(nd * y, two_pi);
  const long double t3 = -std::fmod((md + nd) * y, two_pi);
  return ImmersionPoint{{static_cast<double>(a1 * std::cos(t1)), static_cast<double>(a1 * std::sin(t1)),
                         static_cast<double>(a2 * std::cos(t2)), static_cast<double>(a2 * std::sin(t2)),
                         static_cast<double>(a3 * std::cos(t3)), static_cast<double>(a3 * std::sin(t3))}};
}

}  // namespace detail

inline ImmersionPoint immerse(const TorusParams& params, double x, double y) {
  return detail::immerse_extended(params.m(), params.n(), x, y);
}

inline CoefficientField metric_coeffs(const TorusParams& params, double x) {
  x = reduce_angle(x);
  const double s = detail::sigma(params.m(), params.n(), x);
  const double r = detail::rho(params.m(), params.n(), x);
  return {s, r, r / (s * s), 0.5 * r};
}

/// Closed-form brackets for sigma and rho over all x.
struct CoefficientBounds {
  double sigma_min, sigma_max, rho_min, rho_max;
};

inline CoefficientBounds coefficient_bounds(const TorusParams& params) {
  const double m = params.m(), n = params.n();
  return {std::sqrt(2.0 * n * (2.0 * m + n)), std::sqrt(2.0 * m * (m + 2.0 * n)), 2.0 * n * (m + n),
          2.0 * m * (m + n)};
}

struct SymmetryReport {
  bool is_double_cover;
  /// Odd mn: max |phi(x,y) - phi(x+pi,y+pi)|. Even mn: the smallest max-deviation over all
  /// candidate shifts (x+pi, y+2*pi*j/(m+n)).
  double max_deviation;
};

inline SymmetryReport symmetry_check(const TorusParams& params, int sample_count) {
  if (sample_count < 16) throw InvalidArgument("symmetry_check needs at least 16 samples per axis");
  const long double h = 2.0L * detail::kPiL / sample_count;
  const int m = params.m(), n = params.n();
  auto max_dev = [&](long double dx, long double dy) {
    double dev = 0.0;
    for (int i = 0; i < sample_count; ++i) {
      // offset the lattice so no sample sits on a coordinate zero
      const long double x = (i + 0.37L) * h;
      for (int j = 0; j < sample_count; ++j) {
        const long double y = (j + 0.61L) * h;
        dev = std::max(dev, distance(detail::immerse_extended(m, n, x, y),
                                     detail::immerse_extended(m, n, x + dx, y + dy)));
      }
    }
    return dev;
  };

  if (params.odd()) {
    const double dev = max_dev(detail::kPiL, detail::kPiL);
    return {dev < 1e-12, dev};
  }
  const int s = m + n;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < s; ++j) best = std::min(best, max_dev(detail::kPiL, 2.0L * detail::kPiL * j / s));
  return {best < 1e-12, best};
}

/// One coordinate profile c(x) of the immersion together with its y-frequency.
struct CoordinateProfile {
  std::string name;
  int frequency;
  /// True when c(x + pi) = c(x); false when c(x + pi) = -c(x).
  bool pi_periodic;
  std::function<double(double)> profile;
};

inline std::vector<CoordinateProfile> coordinate_profiles(const TorusParams& params) {
  const int m = params.m(), n = params.n();
  const double a1 = std::sqrt(double(m + n) / (2.0 * m + n));
  const double a2 = std::sqrt(double(m + n) / (m + 2.0 * n));
  return {
      {"sin", m, false, [a1](double x) { return a1 * std::sin(x); }},
      {"cos", n, false, [a2](double x) { return a2 * std::cos(x); }},
      {"h0", m + n, true, [m, n](double x) { return detail::third_profile(m, n, x); }},
  };
}

}  // namespace mintorus

#endif  // MINTORUS_GEOMETRY_HPP
