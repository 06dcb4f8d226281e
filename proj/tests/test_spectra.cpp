#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "selfsim/hecke.hpp"
#include "selfsim/spectra.hpp"

namespace selfsim {
namespace {

std::vector<double> oracle_eigs(const Eigen::MatrixXd& m) {
  std::vector<double> flat(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return oracle::jacobi_eigenvalues(std::move(flat), static_cast<int>(m.rows()));
}

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n, double density = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (i == j || keep(rng) < density) m(i, j) = m(j, i) = u(rng);
  return m;
}

void expect_report_ok(const EigReport& r) {
  EXPECT_TRUE(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
  EXPECT_EQ(r.eigenvalues.size(), r.dim);
  EXPECT_LE(r.residual_bound, residual_tolerance(r.norm));
}

TEST(SymEigs, Examples) {
  const auto id = sym_eigs(Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(id.eigenvalues, (std::vector<double>{1, 1, 1}));
  expect_report_ok(id);

  const auto lap = sym_eigs(assemble_level(AlgebraElement::delta(), 1));
  ASSERT_EQ(lap.eigenvalues.size(), 2U);
  EXPECT_NEAR(lap.eigenvalues[0], 0.5, 1e-15);
  EXPECT_NEAR(lap.eigenvalues[1], 1.0, 1e-15);

  const double r5 = std::sqrt(5.0);
  const auto four = sym_eigs(assemble_level(AlgebraElement::generator_sum(), 2));
  const std::vector<double> want{1 - r5, 2, 1 + r5, 4};
  ASSERT_EQ(four.eigenvalues.size(), 4U);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(four.eigenvalues[i], want[i], 1e-13);
  expect_report_ok(four);
}

TEST(SymEigs, NotSymmetric) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  try {
    sym_eigs(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSymmetric);
  }
  m(1, 0) = 2.0 + 1e-13;
  EXPECT_NO_THROW(sym_eigs(m));
}

TEST(SymEigs, AgreesWithJacobiOnRandomMatrices) {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 16;
    const double density = trial % 3 == 0 ? 1.0 : (trial % 3 == 1 ? 0.3 : 0.1);
    const Eigen::MatrixXd m = random_symmetric(rng, n, density);
    const auto want = oracle_eigs(m);
    for (auto method : {EigMethod::Auto, EigMethod::Dense}) {
      const auto got = sym_eigs(m, method);
      expect_report_ok(got);
      ASSERT_EQ(got.eigenvalues.size(), want.size());
      for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got.eigenvalues[i], want[i], 1e-10);
    }
  }
}

TEST(SymEigs, PermutedTridiagonalUsesThePathSolver) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {2, 7, 40, 700, 1100}) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) t(i, i) = u(rng);
    for (int i = 0; i + 1 < n; ++i) t(i, i + 1) = t(i + 1, i) = u(rng) + 2.0;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = t(i, j);
    const auto fast = sym_eigs(m);
    EXPECT_EQ(fast.path_components, 1U);
    EXPECT_EQ(fast.dense_components, 0U);
    expect_report_ok(fast);
    const auto dense = sym_eigs(m, EigMethod::Dense);
    for (std::size_t i = 0; i < dense.eigenvalues.size(); ++i)
      EXPECT_NEAR(fast.eigenvalues[i], dense.eigenvalues[i], 1e-10 * (1 + dense.norm));
  }
}

TEST(SymEigs, LevelMatricesAutoVersusDense) {
  std::vector<AlgebraElement> elements{AlgebraElement::delta(), AlgebraElement::q_param(-0.4, 1.3)};
  for (const auto& m : elements) {
    for (int n = 1; n <= 9; ++n) {
      const auto op = assemble_level(m, n);
      const auto fast = sym_eigs(op);
      const auto dense = sym_eigs(op, EigMethod::Dense);
      expect_report_ok(fast);
      expect_report_ok(dense);
      EXPECT_EQ(fast.dense_components, 0U);
      for (std::size_t i = 0; i < dense.eigenvalues.size(); ++i)
        EXPECT_NEAR(fast.eigenvalues[i], dense.eigenvalues[i], 1e-10);
    }
  }
}

TEST(SymEigs, Deterministic) {
  const auto op = assemble_level(AlgebraElement::delta(), 10);
  EXPECT_EQ(sym_eigs(op).eigenvalues, sym_eigs(op).eigenvalues);
}

TEST(Hausdorff, Examples) {
  auto h = hausdorff_to_set({0.0, 1.0}, IntervalUnion{{0, 1}});
  EXPECT_EQ(h.forward, 0.0);
  EXPECT_EQ(h.backward, 0.5);
  h = hausdorff_to_set({-0.25, 0.75}, IntervalUnion{{-0.5, 0}, {0.5, 1}});
  EXPECT_EQ(h.forward, 0.0);
  EXPECT_EQ(h.backward, 0.25);
  h = hausdorff_to_set({3.0}, IntervalUnion{{0, 1}});
  EXPECT_EQ(h.forward, 2.0);
  EXPECT_EQ(h.backward, 3.0);
}

TEST(Hausdorff, SliceSamplesAtLevelEight) {
  const auto h = hausdorff_to_set(slice_spectrum_samples(-1, 8), lambda_slice(-1));
  EXPECT_LE(h.forward, 1e-9);
  EXPECT_LE(h.backward, 0.02);
}

TEST(Hausdorff, AgainstBruteForceGrid) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const IntervalUnion target{{-2, -1}, {0, 0.5}, {1.5, 2.5}};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> pts(5 + trial);
    for (auto& p : pts) p = u(rng);
    const auto h = hausdorff_to_set(pts, target);
    double brute = 0.0;
    for (const auto& part : target.parts())
      for (int k = 0; k <= 20000; ++k) {
        const double x = part.lo + (part.hi - part.lo) * k / 20000.0;
        double best = 1e300;
        for (double p : pts) best = std::min(best, std::abs(p - x));
        brute = std::max(brute, best);
      }
    EXPECT_NEAR(h.backward, brute, 1e-4);
    EXPECT_GE(h.backward, brute - 1e-12);
  }
}

TEST(Hausdorff, EndpointsAndFineGrid) {
  // A grid of spacing 1e−3 leaves midpoints 5e−4 away, so the backward
  // distance is exactly half the spacing, not zero.
  const IntervalUnion target{{-0.5, 0}, {0.5, 1}};
  std::vector<double> pts = target.endpoints();
  for (const auto& part : target.parts())
    for (int k = 1; k * 1e-3 < part.hi - part.lo; ++k) pts.push_back(part.lo + k * 1e-3);
  const auto h = hausdorff_to_set(pts, target);
  EXPECT_EQ(h.forward, 0.0);
  EXPECT_LE(h.backward, 5e-4 + 1e-12);
}

TEST(SpectralShift, Examples) {
  const auto id = spectral_shift_check(Eigen::MatrixXd::Identity(2, 2), 1.0, 2.0, 1e-8);
  EXPECT_TRUE(id.direct);
  EXPECT_TRUE(id.shifted);
  const Eigen::MatrixXd lap = assemble_level(AlgebraElement::delta(), 1).entries;
  const auto half = spectral_shift_check(lap, 0.5, 2.0, 1e-8);
  EXPECT_TRUE(half.direct && half.shifted && half.agree);
  const auto zero = spectral_shift_check(lap, 0.0, 2.0, 1e-8);
  EXPECT_FALSE(zero.direct);
  EXPECT_FALSE(zero.shifted);
  EXPECT_TRUE(zero.agree);
  try {
    spectral_shift_check(lap, 0.0, 1.5, 1e-8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RadiusTooSmall);
  }
}

TEST(SpectralShift, AgreementOnRandomMatrices) {
  std::mt19937_64 rng(2024);
  std::size_t hits = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 16;
    const Eigen::MatrixXd m = random_symmetric(rng, n);
    const auto eig = sym_eigs(m);
    const double radius = 2.0 * eig.norm + 0.5;
    std::uniform_real_distribution<double> probe(-eig.norm - 1.0, eig.norm + 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, eig.eigenvalues.size() - 1);
    for (int k = 0; k < 20; ++k) {
      const double alpha = k % 2 == 0 ? eig.eigenvalues[pick(rng)] : probe(rng);
      const auto r = spectral_shift_check(m, alpha, radius, 1e-8);
      EXPECT_TRUE(r.agree) << "trial " << trial << " alpha " << alpha << " gaps " << r.direct_gap << " / "
                           << r.shifted_gap;
      // The shifted gap estimates the direct one to within the noise floor.
      EXPECT_LE(std::abs(r.shifted_gap - r.direct_gap), r.noise_floor + 1e-9 * radius);
      hits += r.direct;
    }
  }
  EXPECT_GE(hits, 1000U);
}

TEST(Histogram, Examples) {
  const auto h = eig_histogram({0, 0, 1}, 2, 0, 1);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(h.underflow + h.overflow, 0U);

  const auto lap = sym_eigs(assemble_level(AlgebraElement::delta(), 2)).eigenvalues;
  const auto h2 = eig_histogram(lap, 4, -0.5, 1.0);
  // Bins of width 0.375: −0.309 | none | 0.5 | 0.809 and 1.
  EXPECT_EQ(h2.counts, (std::vector<std::size_t>{1, 0, 1, 2}));

  const auto h3 = eig_histogram({-5, 0.5, 7}, 3, 0, 1);
  EXPECT_EQ(h3.underflow, 1U);
  EXPECT_EQ(h3.overflow, 1U);
  EXPECT_THROW(eig_histogram({}, 0, 0, 1), Error);
  EXPECT_THROW(eig_histogram({}, 2, 1, 1), Error);
}

}  // namespace
}  // namespace selfsim
