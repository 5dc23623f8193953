#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "skiorder/error.hpp"
#include "skiorder/svknee.hpp"

using namespace skiorder;

namespace {

const std::vector<double> kWorked = {10, 5, 1, 0.9, 0.8, 0.7};

std::vector<double> random_descending(Rng& rng, std::size_t n) {
  std::vector<double> s(n);
  for (auto& v : s) v = std::exp(rng.uniform(-4.0, 3.0));
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

}  // namespace

TEST(SingularCurve, Diagonal) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 1, 3, 2;
  const SingularCurve c = singular_curve(d);
  ASSERT_EQ(c.rank, 3u);
  EXPECT_NEAR(c.sigmas[0], 3, 1e-14);
  EXPECT_NEAR(c.sigmas[1], 2, 1e-14);
  EXPECT_NEAR(c.sigmas[2], 1, 1e-14);
  EXPECT_DOUBLE_EQ(c.kappa, 1.0);
}

TEST(SingularCurve, RankOne) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 2, 4;
  const SingularCurve c = singular_curve(a);
  EXPECT_EQ(c.rank, 1u);
  EXPECT_EQ(c.full_length, 2u);
  EXPECT_NEAR(c.sigmas[0], 5.0, 1e-12);
}

TEST(SingularCurve, ScaledNoiseNearOne) {
  const Eigen::MatrixXd a = oracle::gaussian_matrix(50, 5000, 17, 1.0 / std::sqrt(5000.0));
  const SingularCurve c = singular_curve(a);
  ASSERT_EQ(c.rank, 50u);
  for (double s : c.sigmas) {
    EXPECT_GE(s, 0.85);
    EXPECT_LE(s, 1.15);
  }
  EXPECT_DOUBLE_EQ(c.kappa, 0.01);
}

TEST(SingularCurve, ZeroMatrixRejected) {
  try {
    singular_curve(Eigen::MatrixXd::Zero(3, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_matrix);
  }
}

TEST(SingularCurve, NonFiniteRejected) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(3, 3);
  a(1, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    singular_curve(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::numerical);
    EXPECT_NE(std::string(e.what()).find("3x3"), std::string::npos);
  }
}

TEST(DetectKnee, WorkedExample) {
  const SingularCurve c = curve_from_sigmas(kWorked, 6, 100);
  const KneeGeometry g = detect_knee(c);
  EXPECT_EQ(g.knee_index, 3u);
  EXPECT_NEAR(g.normalized.pk.x(), 0.5, 1e-15);
  EXPECT_NEAR(g.normalized.pk.y(), 0.1, 1e-15);
  EXPECT_NEAR(g.normalized.v1.x(), -0.5, 1e-15);
  EXPECT_NEAR(g.normalized.v1.y(), 0.9, 1e-15);
  EXPECT_NEAR(g.normalized.v2.x(), 0.5, 1e-15);
  EXPECT_NEAR(g.normalized.v2.y(), -0.1, 1e-15);
  EXPECT_EQ(g.normalized.p1, Eigen::Vector2d(0, 1));
  EXPECT_EQ(g.normalized.p3, Eigen::Vector2d(1, 0));
  EXPECT_EQ(g.index_sigma.p1, Eigen::Vector2d(1, 10));
  EXPECT_EQ(g.index_sigma.pk, Eigen::Vector2d(3, 1));
  EXPECT_EQ(g.index_sigma.p3, Eigen::Vector2d(6, 0.7));
}

TEST(DetectKnee, CollinearTiesToSmallestInterior) {
  const SingularCurve c = curve_from_sigmas({3, 2, 1}, 3, 10);
  EXPECT_EQ(detect_knee(c).knee_index, 2u);
  const SingularCurve line = curve_from_sigmas({6, 5, 4, 3, 2, 1}, 6, 10);
  EXPECT_EQ(detect_knee(line).knee_index, 2u);
}

TEST(DetectKnee, UndefinedBelowRankThree) {
  const SingularCurve c = curve_from_sigmas({2, 1}, 2, 10);
  try {
    detect_knee(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::knee_undefined);
  }
}

// The vertical-deviation scan must agree with an explicit perpendicular
// distance scan, and the knee must stay interior.
TEST(DetectKnee, MatchesPerpendicularOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(3, 120));
    const auto s = random_descending(rng, n);
    const std::size_t k = triangle_knee_index(s);
    EXPECT_EQ(k, oracle::perpendicular_knee(s)) << "trial " << trial;
    EXPECT_GE(k, 2u);
    EXPECT_LE(k, n - 1);
  }
}

TEST(DetectKnee, InvariantUnderAxisRescaling) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(3, 80));
    const auto s = random_descending(rng, n);
    const double a = rng.uniform(0.01, 100.0);
    const double b = rng.uniform(-5.0, 5.0);
    std::vector<double> scaled(s);
    for (auto& v : scaled) v = a * v + b;
    EXPECT_EQ(triangle_knee_index(scaled), triangle_knee_index(s));
    // Index-axis rescaling leaves perpendicular-distance ranking unchanged too.
    EXPECT_EQ(oracle::perpendicular_knee(scaled), triangle_knee_index(s));
  }
}

TEST(SingularCurve, PermutationInvariant) {
  const Eigen::MatrixXd a = oracle::gaussian_matrix(20, 60, 8);
  const SingularCurve base = singular_curve(a);
  Rng rng(9);
  std::vector<int> rows(20), cols(60);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  for (int trial = 0; trial < 10; ++trial) {
    for (std::size_t i = rows.size() - 1; i > 0; --i)
      std::swap(rows[i], rows[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
    for (std::size_t i = cols.size() - 1; i > 0; --i)
      std::swap(cols[i], cols[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
    Eigen::MatrixXd p(20, 60);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 60; ++j) p(i, j) = a(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
    const SingularCurve c = singular_curve(p);
    ASSERT_EQ(c.rank, base.rank);
    for (std::size_t i = 0; i < c.rank; ++i) EXPECT_NEAR(c.sigmas[i], base.sigmas[i], 1e-12);
    EXPECT_TRUE(std::is_sorted(c.sigmas.begin(), c.sigmas.end(), std::greater<>()));
  }
}

TEST(CurveFromSigmas, SortsAndTruncatesToRank) {
  const SingularCurve c = curve_from_sigmas({1, 3, 0, 2}, 4, 8);
  EXPECT_EQ(c.rank, 3u);
  EXPECT_EQ(c.full_length, 4u);
  EXPECT_EQ(c.sigmas, (std::vector<double>{3, 2, 1}));
  EXPECT_DOUBLE_EQ(c.kappa, 0.5);
}
