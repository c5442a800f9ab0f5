#include "hpt/errors.hpp"
#include "hpt/pose.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace hpt {
namespace {

// Reference wrap by repeated +/-360 shifts.
double brute_force_wrap(double x) {
  while (x >= 180.0) x -= 360.0;
  while (x < -180.0) x += 360.0;
  return x;
}

TEST(NormalizeAngle, Examples) {
  EXPECT_EQ(normalize_angle(0.0), 0.0);
  EXPECT_EQ(normalize_angle(190.0), -170.0);
  EXPECT_EQ(normalize_angle(-540.0), -180.0);
  EXPECT_EQ(normalize_angle(180.0), -180.0);
  EXPECT_EQ(normalize_angle(-180.0), -180.0);
  EXPECT_EQ(normalize_angle(360.0), 0.0);
}

TEST(NormalizeAngle, RejectsNonFinite) {
  EXPECT_THROW(normalize_angle(std::numeric_limits<double>::quiet_NaN()), ValueError);
  EXPECT_THROW(normalize_angle(std::numeric_limits<double>::infinity()), ValueError);
  EXPECT_THROW(normalize_angle(-std::numeric_limits<double>::infinity()), ValueError);
}

TEST(NormalizeAngle, MatchesBruteForceAndIsIdempotent) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-5000.0, 5000.0);
  for (int i = 0; i < 20000; ++i) {
    const double x = i < 2000 ? static_cast<double>(i - 1000) * 0.5 : dist(rng);
    const double n = normalize_angle(x);
    ASSERT_GE(n, -180.0) << x;
    ASSERT_LT(n, 180.0) << x;
    ASSERT_NEAR(n, brute_force_wrap(x), 1e-9) << x;
    ASSERT_EQ(normalize_angle(n), n) << x;
    const double turns = (n - x) / 360.0;
    ASSERT_NEAR(turns, std::round(turns), 1e-9) << x;
  }
}

TEST(NormalizeAngle, InRangeValuesPassThroughUnchanged) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(-180.0, 180.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = dist(rng);
    ASSERT_EQ(normalize_angle(x), x);
  }
  EXPECT_EQ(normalize_angle(-180.0), -180.0);
  EXPECT_EQ(normalize_angle(180.0), -180.0);
}

TEST(NormalizeAngle, TinyNegativeStaysInRange) {
  const double n = normalize_angle(-1e-300);
  EXPECT_GE(n, -180.0);
  EXPECT_LT(n, 180.0);
  const double m = normalize_angle(-360.0 * 1e-17);
  EXPECT_GE(m, -180.0);
  EXPECT_LT(m, 180.0);
}

TEST(AngleDifference, WrapAware) {
  EXPECT_DOUBLE_EQ(angle_difference(13.0, 10.0), 3.0);
  EXPECT_DOUBLE_EQ(angle_difference(-179.0, 179.0), 2.0);
  EXPECT_DOUBLE_EQ(angle_difference(179.0, -179.0), -2.0);
}

TEST(EulerPose, AxisIndexingAndVectors) {
  EulerPose p{1.0, 2.0, 3.0};
  EXPECT_EQ(p[Axis::Pitch], 1.0);
  EXPECT_EQ(p[Axis::Yaw], 2.0);
  EXPECT_EQ(p[Axis::Roll], 3.0);
  p[Axis::Yaw] = 5.0;
  EXPECT_EQ(p.vec(), Eigen::Vector3d(1.0, 5.0, 3.0));
  EXPECT_EQ(EulerPose::from_vec(p.vec()), p);
  EXPECT_TRUE(p.finite());
  p.roll = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(p.finite());
  EXPECT_THROW(require_finite(p, "pose"), ValueError);
}

TEST(EulerPose, NormalizeComponentwise) {
  EXPECT_EQ(normalize(EulerPose{190.0, -190.0, 540.0}), (EulerPose{-170.0, 170.0, -180.0}));
}

TEST(Axis, NamesRoundTrip) {
  for (Axis a : kAxes) EXPECT_EQ(parse_axis(axis_name(a)), a);
  EXPECT_THROW(parse_axis("heading"), ValueError);
}

TEST(StateVector, VectorRoundTrip) {
  Vector6 v;
  v << 1, 2, 3, 4, 5, 6;
  const auto s = StateVector::from_vec(v);
  EXPECT_EQ(s.pose, (EulerPose{1, 2, 3}));
  EXPECT_EQ(s.velocity, Eigen::Vector3d(4, 5, 6));
  EXPECT_EQ(s.vec(), v);
}

TEST(Symmetrize, AveragesWithTranspose) {
  Matrix6 p = Matrix6::Random();
  symmetrize(p);
  EXPECT_EQ((p - p.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

}  // namespace
}  // namespace hpt
