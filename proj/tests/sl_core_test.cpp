#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mintorus/detail/cyclic_tridiagonal.hpp"
#include "mintorus/sturm_liouville.hpp"
#include "mintorus/torus_spectrum.hpp"

using namespace mintorus;

namespace {

SLProblem constant(double p, double q, double r, double period, BoundaryFlavor bc, int n) {
  SLProblem s;
  s.p = [p](double) { return p; };
  s.q = [q](double) { return q; };
  s.r = [r](double) { return r; };
  s.period = period;
  s.bc = bc;
  s.grid_size = n;
  return s;
}

// a smooth non-constant problem unrelated to the torus family
SLProblem wavy(BoundaryFlavor bc, int n) {
  SLProblem s;
  s.p = [](double x) { return 2.0 + std::sin(2.0 * x); };
  s.q = [](double x) { return 1.0 + 0.5 * std::cos(4.0 * x); };
  s.r = [](double x) { return 1.5 + 0.3 * std::cos(2.0 * x) + 0.2 * std::sin(6.0 * x); };
  s.period = kPi;
  s.bc = bc;
  s.grid_size = n;
  return s;
}

// exact eigenvalues of the discrete constant-coefficient pencil, sorted
std::vector<double> discrete_constant_spectrum(double p, double q, double r, double period, BoundaryFlavor bc, int n) {
  const double h = period / n;
  const double shift = bc == BoundaryFlavor::periodic ? 0.0 : kPi / n;
  std::vector<double> v;
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * kPi * j / n + shift;
    v.push_back((4.0 * p / (h * h) * std::pow(std::sin(0.5 * theta), 2) + q) / r);
  }
  std::sort(v.begin(), v.end());
  return v;
}

Eigen::VectorXd dense_oracle(const Pencil& pencil) {
  const int n = static_cast<int>(pencil.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n), b = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = pencil.diag[i];
    b(i, i) = pencil.weight[i];
    const int j = (i + 1) % n;
    a(i, j) += pencil.off[i];
    a(j, i) += pencil.off[i];
  }
  return Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd>(a, b, Eigen::EigenvaluesOnly).eigenvalues();
}

const BoundaryFlavor kFlavors[] = {BoundaryFlavor::periodic, BoundaryFlavor::antiperiodic};

}  // namespace

TEST(Assemble, RejectsBadProblems) {
  EXPECT_THROW(assemble(constant(1, 0, 1, kPi, BoundaryFlavor::periodic, 31)), InvalidArgument);
  EXPECT_THROW(assemble(constant(1, 0, 1, kPi, BoundaryFlavor::periodic, 16)), InvalidArgument);
  EXPECT_THROW(assemble(constant(-1, 0, 1, kPi, BoundaryFlavor::periodic, 64)), InvalidArgument);
  EXPECT_THROW(assemble(constant(1, 0, 0, kPi, BoundaryFlavor::periodic, 64)), InvalidArgument);
  SLProblem s = constant(1, 0, 1, kPi, BoundaryFlavor::periodic, 64);
  s.q = [](double x) { return x; };
  EXPECT_THROW(assemble(s), InvalidArgument);
  EXPECT_THROW(solve(constant(1, 0, 1, kPi, BoundaryFlavor::periodic, 64), 17), InvalidArgument);
}

TEST(Solve, ConstantCoefficientsMatchDiscreteSpectrum) {
  for (BoundaryFlavor bc : kFlavors) {
    const double p = std::sqrt(6.0), q = 8.0 / std::sqrt(6.0), r = 4.0 / std::sqrt(6.0);
    const SLSpectrum s = solve(constant(p, q, r, kPi, bc, 128), 20);
    const std::vector<double> exact = discrete_constant_spectrum(p, q, r, kPi, bc, 128);
    for (int j = 0; j < 20; ++j) EXPECT_NEAR(s.eigenvalues[j], exact[j], 1e-11 * (1 + exact[j])) << j;
  }
}

TEST(Solve, ExtrapolationApproachesContinuumSpectrum) {
  // -h'' = lambda h on period pi: (2j)^2 periodic, (2j+1)^2 antiperiodic, each doubly except 0
  const SLSpectrum per = extrapolate(constant(1, 0, 1, kPi, BoundaryFlavor::periodic, 1024), 7);
  const double per_exact[] = {0, 4, 4, 16, 16, 36, 36};
  for (int j = 0; j < 7; ++j) EXPECT_NEAR(per.eigenvalues[j], per_exact[j], 1e-8) << j;
  const SLSpectrum anti = extrapolate(constant(1, 0, 1, kPi, BoundaryFlavor::antiperiodic, 1024), 6);
  const double anti_exact[] = {1, 1, 9, 9, 25, 25};
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(anti.eigenvalues[j], anti_exact[j], 1e-8) << j;
  EXPECT_TRUE(per.extrapolated);
  EXPECT_EQ(per.grid_size, 2048);
}

TEST(Solve, MatchesDenseOracle) {
  for (BoundaryFlavor bc : kFlavors) {
    const Pencil pencil = assemble(wavy(bc, 96));
    const Eigen::VectorXd dense = dense_oracle(pencil);
    const SLSpectrum s = solve(pencil, 24);
    for (int j = 0; j < 24; ++j) EXPECT_NEAR(s.eigenvalues[j], dense(j), 1e-10 * (1 + dense(j))) << j;
  }
  const Pencil torus = assemble(build_problem_unrestricted(TorusParams::create(2, 1), 2, BoundaryFlavor::periodic, 64));
  const Eigen::VectorXd dense = dense_oracle(torus);
  const SLSpectrum s = solve(torus, 16);
  for (int j = 0; j < 16; ++j) EXPECT_NEAR(s.eigenvalues[j], dense(j), 1e-10 * (1 + dense(j))) << j;
}

TEST(Solve, EigenvectorsAreWeightedOrthonormal) {
  const SLSpectrum s = solve(wavy(BoundaryFlavor::antiperiodic, 256), 12);
  std::vector<double> w(256);
  for (int i = 0; i < 256; ++i) w[i] = 1.5 + 0.3 * std::cos(2.0 * kPi * i / 256) + 0.2 * std::sin(6.0 * kPi * i / 256);
  for (int a = 0; a < 12; ++a)
    for (int b = 0; b < 12; ++b)
      EXPECT_NEAR(weighted_dot(w, s.eigenvectors[a], s.eigenvectors[b]), a == b ? 1.0 : 0.0, 1e-9) << a << "," << b;
}

TEST(Solve, ConstantGroundStateIsExactlyZero) {
  const SLSpectrum s = solve(build_problem(TorusParams::create(2, 1), 0, BoundaryFlavor::periodic, 512), 3);
  EXPECT_LT(std::abs(s.eigenvalues[0]), 1e-20);
  EXPECT_EQ(s.zero_counts[0], 0);
}

TEST(Solve, IsDeterministic) {
  const SLProblem problem = wavy(BoundaryFlavor::periodic, 512);
  const SLSpectrum a = extrapolate(problem, 10), b = extrapolate(problem, 10);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
}

TEST(Solve, SignConventionFirstSignificantComponentPositive) {
  const SLSpectrum s = solve(wavy(BoundaryFlavor::periodic, 256), 8);
  for (const auto& v : s.eigenvectors) {
    double peak = 0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    for (double x : v)
      if (std::abs(x) > 1e-8 * peak) {
        EXPECT_GT(x, 0.0);
        break;
      }
  }
}

TEST(CyclicTridiagonal, InertiaCountMatchesDense) {
  detail::CyclicTridiagonal c;
  const int n = 40;
  for (int i = 0; i < n; ++i) {
    c.d.push_back(2.0 + std::sin(1.7 * i));
    c.e.push_back(-1.0 + 0.3 * std::cos(0.9 * i));
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = c.d[i];
    a(i, (i + 1) % n) += c.e[i];
    a((i + 1) % n, i) += c.e[i];
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
  for (double mu : {-2.0, -0.5, 0.0, 0.7, 1.3, 2.2, 3.9, 6.0}) {
    const int expected = static_cast<int>(std::count_if(ev.data(), ev.data() + n, [&](double v) { return v < mu; }));
    EXPECT_EQ(detail::count_below(c, mu, 1e-300), expected) << mu;
  }
  const std::vector<double> low = detail::lowest_eigenvalues(c, 10);
  for (int j = 0; j < 10; ++j) EXPECT_NEAR(low[j], ev(j), 1e-12);
}

TEST(Convergence, SecondOrderAgainstFineReference) {
  for (BoundaryFlavor bc : kFlavors) {
    const SLProblem problem = build_problem_unrestricted(TorusParams::create(2, 1), 1, bc, 4096);
    const SLSpectrum ref = solve(problem, 6);
    const SLSpectrum n256 = solve(problem.with_grid(256), 6);
    const SLSpectrum n512 = solve(problem.with_grid(512), 6);
    for (int j = 0; j < 6; ++j) {
      const double e1 = std::abs(n256.eigenvalues[j] - ref.eigenvalues[j]);
      const double e2 = std::abs(n512.eigenvalues[j] - ref.eigenvalues[j]);
      EXPECT_GE(e1 / e2, 3.5) << j;
      EXPECT_LE(e1 / e2, 4.5) << j;
    }
  }
}

TEST(Refine, MeetsTargetOrReportsEstimate) {
  // the estimate |lambda_N - lambda_2N| / 3 shrinks by 4 per doubling
  const SLSpectrum s = refine(wavy(BoundaryFlavor::periodic, 256), 3, 1e-6);
  EXPECT_LE(s.max_error_estimate(), 1e-6);
  EXPECT_GT(s.grid_size, 512);
  try {
    refine(wavy(BoundaryFlavor::periodic, 32), 8, 1e-10);
    FAIL() << "expected non-convergence";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("achieved error estimate"), std::string::npos);
  }
  EXPECT_THROW(refine(wavy(BoundaryFlavor::periodic, 256), 6, 1e-12), InvalidArgument);
}

TEST(Richardson, CombinesGrids) {
  SLSpectrum coarse, fine;
  coarse.eigenvalues = {1.0, 2.0};
  fine.eigenvalues = {1.25, 2.0};
  fine.error_estimates = {0.0, 0.0};
  const SLSpectrum r = richardson(coarse, fine);
  EXPECT_DOUBLE_EQ(r.eigenvalues[0], (4 * 1.25 - 1.0) / 3);
  EXPECT_DOUBLE_EQ(r.error_estimates[0], 0.25 / 3);
  EXPECT_DOUBLE_EQ(r.eigenvalues[1], 2.0);
}

TEST(ZeroCount, SimpleGridFunctions) {
  const int n = 200;
  std::vector<double> s2(n), c1(n), s1(n), one(n, 1.0);
  for (int i = 0; i < n; ++i) {
    const double x = kPi * i / n;
    s2[i] = std::sin(2 * x);
    c1[i] = std::cos(x);
    s1[i] = std::sin(x);
  }
  EXPECT_EQ(zero_count(s2, BoundaryFlavor::periodic), 2);
  EXPECT_EQ(zero_count(c1, BoundaryFlavor::antiperiodic), 1);
  EXPECT_EQ(zero_count(s1, BoundaryFlavor::antiperiodic), 1);
  EXPECT_EQ(zero_count(one, BoundaryFlavor::periodic), 0);
  EXPECT_THROW(zero_count(std::vector<double>(n, 0.0), BoundaryFlavor::periodic), InvalidArgument);
}

TEST(ZeroCount, OscillationLawOnFirstTenEigenpairs) {
  for (BoundaryFlavor bc : kFlavors) {
    for (const SLProblem& problem : {wavy(bc, 1024), build_problem_unrestricted(TorusParams::create(3, 2), 2, bc, 1024),
                                     build_problem_unrestricted(TorusParams::create(5, 1), 0, bc, 1024)}) {
      const SLSpectrum s = extrapolate(problem, 10);
      for (int i = 0; i < 10; ++i) EXPECT_EQ(s.zero_counts[i], expected_zero_count(i, bc)) << to_string(bc) << " " << i;
    }
  }
}

TEST(ZeroCount, TwoPiLawOnMergedSpectra) {
  for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 3}}) {
    for (int l = 0; l <= m + n + 1; ++l) {
      const MergedSpectrum s = merged_spectrum(TorusParams::create(m, n), l, 10);
      ASSERT_GE(s.eigenvalues.size(), 10u);
      for (int i = 0; i < 10; ++i) EXPECT_EQ(s.zero_counts[i], i == 0 ? 0 : 2 * ((i + 1) / 2)) << l << " " << i;
    }
  }
}

TEST(Interlacing, TwoPiSpectrumPattern) {
  for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 1}, {3, 2}, {5, 1}}) {
    for (int l = 0; l <= 4; ++l) {
      const MergedSpectrum s = merged_spectrum(TorusParams::create(m, n), l, 6);
      const auto& v = s.eigenvalues;
      EXPECT_GT(v[1] - v[0], kClusterTolerance);
      EXPECT_GE(v[2] - v[1], -kClusterTolerance);
      EXPECT_GT(v[3] - v[2], kClusterTolerance);
      EXPECT_GE(v[4] - v[3], -kClusterTolerance);
    }
  }
}

TEST(Reflect, MapsGridFunctionToMirror) {
  const int n = 64;
  std::vector<double> h(n);
  for (int i = 0; i < n; ++i) h[i] = std::cos(kPi * i / n) + 0.3 * std::sin(2 * kPi * i / n);
  const std::vector<double> r = reflect(h, BoundaryFlavor::antiperiodic);
  for (int i = 0; i < n; ++i) {
    const double x = kPi - kPi * i / n;
    EXPECT_NEAR(r[i], std::cos(x) + 0.3 * std::sin(2 * x), 1e-14);
  }
}
