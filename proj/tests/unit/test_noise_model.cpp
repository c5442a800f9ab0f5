#include "hpt/errors.hpp"
#include "hpt/noise_model.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace hpt {
namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

NoiseModel fsanet_yaw() { return builtin_profile("fsanet")[Axis::Yaw]; }

TEST(EvalNoise, FsanetYawMinimumClosedForm) {
  const NoiseModel m = fsanet_yaw();
  const double expected = 7.64 - 4.11 / (kSqrt2Pi * 30.87);
  EXPECT_NEAR(eval_noise_raw(m, -0.35), expected, 1e-12);
  EXPECT_NEAR(eval_noise(m, -0.35), expected, 1e-9 * expected);
  EXPECT_NEAR(expected, 7.587, 5e-4);
}

TEST(EvalNoise, FarTailApproachesTau) {
  for (const auto& name : builtin_profile_names()) {
    const auto profile = builtin_profile(name);
    for (Axis a : kAxes) {
      NoiseModel m = profile[a];
      const double x = m.mu + 100.0 * m.sigma;
      EXPECT_LT(std::abs(eval_noise_raw(m, x) - m.tau), 1e-12 * std::max(1.0, std::abs(m.tau))) << name;
    }
  }
}

TEST(EvalNoise, ZeroLambdaIsConstant) {
  NoiseModel m{0.0, 3.0, 10.0, 4.0};
  for (double x = -90.0; x <= 90.0; x += 7.5) EXPECT_EQ(eval_noise(m, x), 4.0);
}

TEST(EvalNoise, SymmetricAndMonotoneInDistanceFromMu) {
  for (const auto& name : builtin_profile_names()) {
    const auto profile = builtin_profile(name);
    for (Axis a : kAxes) {
      const NoiseModel& m = profile[a];
      double previous = eval_noise_raw(m, m.mu);
      for (double d = 1.0; d <= 180.0; d += 1.0) {
        const double plus = eval_noise_raw(m, m.mu + d);
        const double minus = eval_noise_raw(m, m.mu - d);
        ASSERT_NEAR(plus, minus, 1e-9 * std::abs(plus)) << name << " d=" << d;
        ASSERT_GE(plus, previous) << name << " d=" << d;
        previous = plus;
      }
    }
  }
}

TEST(EvalNoise, StrictlyIncreasingForResolvableModels) {
  const NoiseModel m = fsanet_yaw();
  for (double d = 1.0; d <= 90.0; d += 1.0) EXPECT_GT(eval_noise_raw(m, m.mu + d), eval_noise_raw(m, m.mu + d - 1.0));
}

TEST(EvalNoise, ClampedToBounds) {
  NoiseModel deep{1000.0, 0.0, 1.0, 1.0, 0.5, 500.0};
  EXPECT_EQ(eval_noise(deep, 0.0), 0.5);
  NoiseModel high{0.0, 0.0, 1.0, 1e6, 0.5, 500.0};
  EXPECT_EQ(eval_noise(high, 0.0), 500.0);
  const auto roll = builtin_profile("fsanet")[Axis::Roll];
  for (double x = -90.0; x <= 90.0; x += 1.0) {
    const double r = eval_noise(roll, x);
    EXPECT_GE(r, roll.r_min);
    EXPECT_LE(r, roll.r_max);
    EXPECT_GT(r, 0.0);
  }
}

TEST(EvalNoise, RejectsNonFiniteInput) {
  EXPECT_THROW(eval_noise(fsanet_yaw(), std::numeric_limits<double>::quiet_NaN()), ValueError);
  EXPECT_THROW(eval_noise(fsanet_yaw(), std::numeric_limits<double>::infinity()), ValueError);
}

TEST(NoiseModel, ValidateRejectsBadParameters) {
  EXPECT_THROW((NoiseModel{1.0, 0.0, 0.0, 1.0}.validate()), ValueError);
  EXPECT_THROW((NoiseModel{1.0, 0.0, -1.0, 1.0}.validate()), ValueError);
  EXPECT_THROW((NoiseModel{1.0, 0.0, 1.0, 1.0, 0.0, 10.0}.validate()), ValueError);
  EXPECT_THROW((NoiseModel{1.0, 0.0, 1.0, 1.0, 5.0, 1.0}.validate()), ValueError);
  EXPECT_THROW((NoiseModel{std::nan(""), 0.0, 1.0, 1.0}.validate()), ValueError);
  EXPECT_NO_THROW(fsanet_yaw().validate());
}

TEST(BuildR, ConstantProfileGivesScaledIdentity) {
  EstimatorProfile p;
  for (Axis a : kAxes) p[a] = NoiseModel{0.0, 0.0, 1.0, 2.5};
  EXPECT_EQ(build_R(p, {13.0, -40.0, 7.0}), 2.5 * Matrix3::Identity());
}

TEST(BuildR, FsanetAtMuGivesPerAxisMinimaPreClamp) {
  const auto p = builtin_profile("fsanet");
  const Matrix3 r = build_R(p, {p[Axis::Pitch].mu, p[Axis::Yaw].mu, p[Axis::Roll].mu});
  for (Axis a : kAxes) {
    const auto& m = p[a];
    const double minimum = m.tau - m.lambda / (kSqrt2Pi * m.sigma);
    const int i = static_cast<int>(a);
    EXPECT_NEAR(r(i, i), std::clamp(minimum, m.r_min, m.r_max), 1e-9 * std::abs(minimum));
  }
  EXPECT_NEAR(r(1, 1), 7.64 - 4.11 / (kSqrt2Pi * 30.87), 1e-12);
  EXPECT_EQ(r(0, 1), 0.0);
  EXPECT_EQ(r(1, 2), 0.0);
}

TEST(BuildR, AxesAreIndependent) {
  const auto p = builtin_profile("hopenet");
  const Matrix3 a = build_R(p, {3.0, 10.0, -4.0});
  const Matrix3 b = build_R(p, {3.0, 70.0, -4.0});
  EXPECT_EQ(a(0, 0), b(0, 0));
  EXPECT_EQ(a(2, 2), b(2, 2));
  EXPECT_NE(a(1, 1), b(1, 1));
}

TEST(ConstantProfile, MatchesValueAtMu) {
  const auto p = builtin_profile("fsanet-like");
  const auto c = constant_profile(p);
  EXPECT_EQ(build_R(c, {50.0, -80.0, 3.0}), build_R_at_mean(p));
  for (Axis a : kAxes) EXPECT_EQ(c[a].lambda, 0.0);
}

TEST(BuiltinProfiles, PublishedParameterValues) {
  const auto f = builtin_profile("fsanet");
  EXPECT_EQ(f[Axis::Yaw].lambda, 4.11);
  EXPECT_EQ(f[Axis::Yaw].mu, -0.35);
  EXPECT_EQ(f[Axis::Yaw].sigma, 30.87);
  EXPECT_EQ(f[Axis::Yaw].tau, 7.64);
  const auto h = builtin_profile("hopenet");
  EXPECT_EQ(h[Axis::Yaw].lambda, 7.017);
  EXPECT_EQ(h[Axis::Yaw].mu, -5.57);
  EXPECT_EQ(h[Axis::Yaw].sigma, 48.28);
  EXPECT_EQ(h[Axis::Yaw].tau, 10.74);
  EXPECT_EQ(h[Axis::Pitch].lambda, 229.18);
  EXPECT_THROW(builtin_profile("posenet"), ValueError);
}

TEST(BuiltinProfiles, SyntheticProfilesHitTheirVarianceTargets) {
  const auto f = builtin_profile("fsanet-like");
  const auto h = builtin_profile("hopenet-like");
  for (Axis a : kAxes) {
    EXPECT_NEAR(eval_noise_raw(f[a], f[a].mu), 1.0, 1e-12);
    EXPECT_NEAR(eval_noise_raw(f[a], f[a].mu + 60.0), 16.0, 1e-9);
    EXPECT_NEAR(eval_noise_raw(h[a], h[a].mu), 2.25, 1e-12);
    EXPECT_NEAR(eval_noise_raw(h[a], h[a].mu + 60.0), 36.0, 1e-9);
  }
}

TEST(ProfileDocument, RoundTripIsBitIdentical) {
  testing::TempDir dir;
  for (const auto& name : builtin_profile_names()) {
    auto p = builtin_profile(name);
    p.provenance["yaw"] = {1234, 0.0125, false};
    p.provenance["roll"] = {99, 1e-7, true};
    const auto path = dir.file(name + ".profile");
    save_profile(p, path);
    const auto q = load_profile(path);
    EXPECT_EQ(q.name, p.name);
    for (Axis a : kAxes) {
      EXPECT_EQ(q[a], p[a]) << name;
      for (double x = -90.0; x <= 90.0; x += 0.5) ASSERT_EQ(eval_noise(q[a], x), eval_noise(p[a], x));
    }
    EXPECT_EQ(q.provenance.at("yaw").samples, 1234u);
    EXPECT_EQ(q.provenance.at("yaw").residual_rms, 0.0125);
    EXPECT_TRUE(q.provenance.at("roll").degenerate);
    EXPECT_EQ(resolve_profile(path)[Axis::Yaw], p[Axis::Yaw]);
  }
}

TEST(ProfileDocument, ParseErrors) {
  EXPECT_THROW(parse_profile("name = x\npitch.lambda = 1\n"), ParseError);
  auto text = serialize_profile(builtin_profile("fsanet"));
  text.replace(text.find("yaw.sigma = 30.87"), 17, "yaw.sigma = abc");
  EXPECT_THROW(parse_profile(text), ParseError);
  EXPECT_THROW(resolve_profile("/nonexistent/profile.ini"), IoError);
}

TEST(ProfileDocument, OptionalClampKeysDefault) {
  const std::string text =
      "name = minimal\n"
      "pitch.lambda = 1\npitch.mu = 0\npitch.sigma = 10\npitch.tau = 5\n"
      "yaw.lambda = 1\nyaw.mu = 0\nyaw.sigma = 10\nyaw.tau = 5\n"
      "roll.lambda = 1\nroll.mu = 0\nroll.sigma = 10\nroll.tau = 5\n";
  const auto p = parse_profile(text);
  EXPECT_EQ(p[Axis::Yaw].r_min, 0.5);
  EXPECT_EQ(p[Axis::Yaw].r_max, 500.0);
}

}  // namespace
}  // namespace hpt
