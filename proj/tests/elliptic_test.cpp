#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mintorus/elliptic.hpp"
#include "mintorus/geometry.hpp"

using namespace mintorus;

namespace {

// Maclaurin series in k^2 with coefficients ((2n-1)!!/(2n)!!)^2
std::pair<double, double> series_KE(double k) {
  long double K = 0, E = 0, c = 1, k2n = 1;
  const long double k2 = static_cast<long double>(k) * k;
  for (int n = 0; n < 5000; ++n) {
    if (n > 0) {
      c *= (2.0L * n - 1) / (2.0L * n);
      k2n *= k2;
    }
    const long double term = c * c * k2n;
    K += term;
    E += term / (1.0L - 2.0L * n);
    if (n > 10 && term < 1e-22L) break;
  }
  const long double half_pi = 1.5707963267948966192313216916397514L;
  return {static_cast<double>(half_pi * K), static_cast<double>(half_pi * E)};
}

std::vector<std::pair<int, int>> pairs_up_to(int sum_max) {
  std::vector<std::pair<int, int>> out;
  for (int s = 2; s <= sum_max; ++s)
    for (int n = 1; 2 * n <= s; ++n)
      if (std::gcd(s - n, n) == 1) out.push_back({s - n, n});
  return out;
}

}  // namespace

TEST(Agm, MatchesSeriesOracleOnGrid) {
  for (int j = 0; j <= 19; ++j) {
    const double k = 0.05 * j;
    const auto [K, E] = series_KE(k);
    const EllipticPair p = agm_KE(k);
    EXPECT_NEAR(p.K, K, 1e-14) << k;
    EXPECT_NEAR(p.E, E, 1e-14) << k;
  }
}

TEST(Agm, SpotValues) {
  const EllipticPair zero = agm_KE(0.0);
  EXPECT_DOUBLE_EQ(zero.K, kPi / 2);
  EXPECT_DOUBLE_EQ(zero.E, kPi / 2);
  const EllipticPair half = agm_KE(0.5);
  EXPECT_NEAR(half.K, 1.6857503548125961, 2e-15);
  EXPECT_NEAR(half.E, 1.4674622093394272, 2e-15);
  const auto [K, E] = series_KE(std::sqrt(3.0 / 8.0));
  const EllipticPair two_one = agm_KE(std::sqrt(3.0 / 8.0));
  EXPECT_NEAR(two_one.K, K, 1e-14);
  EXPECT_NEAR(two_one.E, E, 1e-14);
}

TEST(Agm, RejectsModulusOutsideRange) {
  EXPECT_THROW(agm_KE(1.0), InvalidArgument);
  EXPECT_THROW(agm_KE(1.5), InvalidArgument);
  EXPECT_THROW(agm_KE(-0.1), InvalidArgument);
}

TEST(Agm, BoundsAndEkInequality) {
  for (int j = 0; j <= 19; ++j) {
    const double k = 0.05 * j;
    const EllipticPair p = agm_KE(k);
    const double gap = p.K - 2.0 / (2.0 - k * k) * p.E;
    EXPECT_GE(gap, -1e-14) << k;
    if (j > 0) {
      EXPECT_GT(gap, 0.0) << k;
      EXPECT_GT(p.K, kPi / 2);
      EXPECT_LT(p.E, kPi / 2);
    }
  }
}

TEST(Modulus, ClosedForm) {
  EXPECT_EQ(modulus(TorusParams::create(1, 1)), 0.0);
  EXPECT_NEAR(modulus(TorusParams::create(2, 1)), std::sqrt(3.0 / 8.0), 1e-16);
  for (auto [m, n] : pairs_up_to(20)) EXPECT_LT(modulus(TorusParams::create(m, n)), 1.0);
}

TEST(Area, SpotValues) {
  EXPECT_NEAR(area(TorusParams::create(1, 1)), 4 * kPi * kPi / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(area(TorusParams::create(2, 1)), 69.03, 0.01);
  for (auto [m, n] : pairs_up_to(20)) EXPECT_GT(area(TorusParams::create(m, n)), 0.0);
}

TEST(Area, ClosedFormMatchesQuadrature) {
  EXPECT_NEAR(quadrature_area(TorusParams::create(1, 1)), area(TorusParams::create(1, 1)), 1e-10);
  EXPECT_NEAR(quadrature_area(TorusParams::create(2, 1)), area(TorusParams::create(2, 1)), 1e-9);
  for (auto [m, n] : pairs_up_to(12)) {
    const TorusParams p = TorusParams::create(m, n);
    EXPECT_LT(std::abs(quadrature_area(p) - area(p)) / area(p), 1e-8) << m << "," << n;
  }
  EXPECT_THROW(quadrature_area(TorusParams::create(2, 1), 1e-13), InvalidArgument);
}

TEST(Area, OddPairsHalveTheNaiveIntegral) {
  // periodic trapezoid of the area density rho / (sqrt 2 sigma) over [0, 2 pi)^2
  for (auto [m, n] : pairs_up_to(12)) {
    const TorusParams p = TorusParams::create(m, n);
    const int points = 4096;
    double sum = 0;
    for (int i = 0; i < points; ++i) {
      const CoefficientField f = metric_coeffs(p, kTwoPi * i / points);
      sum += std::sqrt(f.g_xx * f.g_yy);
    }
    const double naive = kTwoPi * kTwoPi * sum / points;
    EXPECT_NEAR(area(p), p.odd() ? naive / 2 : naive, 1e-10 * naive) << m << "," << n;
  }
}

TEST(Area, IntegrandHasPeriodPi) {
  const TorusParams p = TorusParams::create(5, 2);
  const double half = adaptive_simpson([&](double x) { return detail::area_integrand(p, x); }, 0, kPi, 1e-12).value;
  const double full = adaptive_simpson([&](double x) { return detail::area_integrand(p, x); }, 0, kTwoPi, 1e-12).value;
  EXPECT_NEAR(2 * half, full, 1e-10);
}

TEST(Quadrature, ReportsNonConvergence) {
  EXPECT_THROW(adaptive_simpson([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, 1e-14, 8), SolverError);
  const QuadratureResult r = adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
  EXPECT_NEAR(r.value, std::exp(1.0) - 1.0, 1e-13);
}

TEST(Functional, ValuesAndMargins) {
  const FunctionalReport one = functional_value(TorusParams::create(1, 1));
  EXPECT_EQ(one.index, 1);
  EXPECT_LT(std::abs(one.lambda_closed - 8 * kPi * kPi / std::sqrt(3.0)) / one.lambda_closed, 1e-9);
  EXPECT_LT(one.nonmax_margin, 0.0);

  const FunctionalReport two_one = functional_value(TorusParams::create(2, 1));
  EXPECT_EQ(two_one.index, 9);
  EXPECT_NEAR(two_one.lambda_closed, 138.05, 0.01);
  EXPECT_NEAR(8 * kPi * 9, 226.19, 0.01);
  EXPECT_GT(two_one.nonmax_margin, 0.0);

  EXPECT_EQ(functional_value(TorusParams::create(3, 1)).index, 5);
  for (auto [m, n] : pairs_up_to(12)) {
    const FunctionalReport f = functional_value(TorusParams::create(m, n));
    EXPECT_LT(f.rel_err, 1e-8);
    if (m != 1) EXPECT_GT(f.nonmax_margin, 0.0) << m << "," << n;
  }
}
