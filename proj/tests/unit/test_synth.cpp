#include "hpt/errors.hpp"
#include "hpt/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace hpt {
namespace {

TrajectorySpec single_yaw() {
  TrajectorySpec s;
  s.duration = 10.0;
  s.rate = 30.0;
  s.motion[static_cast<int>(Axis::Yaw)] = {{30.0, 0.1, 0.0}};
  return s;
}

double sample_std(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

TEST(GenTrajectory, ZeroAmplitudeIsConstantAtOrigin) {
  TrajectorySpec s;
  s.duration = 2.0;
  const auto frames = gen_trajectory(s);
  ASSERT_EQ(frames.size(), 60u);
  for (const auto& f : frames) {
    EXPECT_EQ(f.pose, (EulerPose{0.0, 0.0, 0.0}));
    EXPECT_EQ(*f.ground_truth, f.pose);
  }
}

TEST(GenTrajectory, SingleYawSinusoid) {
  const auto frames = gen_trajectory(single_yaw());
  ASSERT_EQ(frames.size(), 300u);
  double peak = 0.0;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    EXPECT_DOUBLE_EQ(frames[k].t, static_cast<double>(k) / 30.0);
    EXPECT_NEAR(frames[k].ground_truth->yaw, 30.0 * std::sin(2.0 * std::numbers::pi * 0.1 * frames[k].t), 1e-12);
    EXPECT_EQ(frames[k].pose, *frames[k].ground_truth);
    peak = std::max(peak, std::abs(frames[k].ground_truth->yaw));
  }
  EXPECT_NEAR(peak, 30.0, 30.0 * (1.0 - std::cos(2.0 * std::numbers::pi * 0.1 / 30.0)) + 1e-9);
}

TEST(GenTrajectory, DeterministicAndValidated) {
  const auto a = gen_trajectory(benchmark_trajectory());
  const auto b = gen_trajectory(benchmark_trajectory());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i].pose, b[i].pose);
  TrajectorySpec bad;
  bad.rate = 0.0;
  EXPECT_THROW(gen_trajectory(bad), ValueError);
  bad = TrajectorySpec{};
  bad.duration = -1.0;
  EXPECT_THROW(gen_trajectory(bad), ValueError);
}

TEST(Benchmark, ShapeAndDwell) {
  const auto spec = benchmark_trajectory();
  const auto frames = gen_trajectory(spec);
  ASSERT_EQ(frames.size(), 1800u);
  double max_yaw = 0.0;
  for (const auto& f : frames) {
    if (f.t >= 25.0 && f.t < 35.0) {
      EXPECT_EQ(*f.ground_truth, (EulerPose{0.0, 0.0, 0.0}));
    }
    max_yaw = std::max(max_yaw, std::abs(f.ground_truth->yaw));
  }
  EXPECT_GT(max_yaw, 55.0);
  EXPECT_LE(max_yaw, 60.0);
  EXPECT_EQ(dwell_envelope(spec, 10.0), 1.0);
  EXPECT_NEAR(dwell_envelope(spec, 22.5), 0.5, 1e-12);
  EXPECT_NEAR(dwell_envelope(spec, 37.5), 0.5, 1e-12);
  EXPECT_EQ(dwell_envelope(spec, 40.0), 1.0);
}

TEST(Corrupt, ZeroNoiseIsIdentity) {
  const auto truth = gen_trajectory(single_yaw());
  const auto noisy = corrupt(truth, NoiseSpec{});
  for (std::size_t i = 0; i < truth.size(); ++i) EXPECT_EQ(noisy[i].pose, truth[i].pose);
}

TEST(Corrupt, ConstantSigmaSampleStd) {
  TrajectorySpec s;
  s.duration = 10000.0 / 30.0;
  s.motion[static_cast<int>(Axis::Pitch)] = {};
  const auto truth = gen_trajectory(s);
  ASSERT_EQ(truth.size(), 10000u);
  NoiseSpec n;
  n.variance[static_cast<int>(Axis::Pitch)] = NoiseModel{0.0, 0.0, 1.0, 4.0};
  n.seed = 99;
  const auto noisy = corrupt(truth, n);
  std::vector<double> d;
  for (std::size_t i = 0; i < noisy.size(); ++i) d.push_back(noisy[i].pose.pitch - truth[i].pose.pitch);
  EXPECT_NEAR(sample_std(d), 2.0, 0.06);
  const auto again = corrupt(truth, n);
  for (std::size_t i = 0; i < noisy.size(); ++i) ASSERT_EQ(again[i].pose, noisy[i].pose);
}

TEST(Corrupt, AngleDependentSigmaInBand) {
  // std 2 at 0 rising to 5 at 60.
  const double width = 30.0;
  const double depth = (25.0 - 4.0) / (1.0 - std::exp(-3600.0 / (2.0 * width * width)));
  NoiseModel m{depth * std::sqrt(2.0 * std::numbers::pi) * width, 0.0, width, 4.0 + depth};
  ASSERT_NEAR(std::sqrt(eval_noise(m, 0.0)), 2.0, 1e-12);
  ASSERT_NEAR(std::sqrt(eval_noise(m, 60.0)), 5.0, 1e-12);
  NoiseSpec n;
  n.variance[static_cast<int>(Axis::Yaw)] = m;
  n.seed = 4;
  const auto pairs = gen_error_dataset(n, 40000, -90.0, 90.0);
  std::vector<double> band;
  for (const auto& [t, p] : pairs)
    if (std::abs(t.yaw) >= 55.0 && std::abs(t.yaw) <= 65.0) band.push_back(p.yaw - t.yaw);
  ASSERT_GT(band.size(), 1000u);
  EXPECT_NEAR(sample_std(band), 5.0, 0.5);
}

TEST(Corrupt, BiasShiftsObservations) {
  const auto truth = gen_trajectory(single_yaw());
  NoiseSpec n;
  n.bias = {1.0, -2.0, 0.5};
  const auto noisy = corrupt(truth, n);
  EXPECT_DOUBLE_EQ(noisy[10].pose.yaw - truth[10].pose.yaw, -2.0);
  std::vector<FrameRecord> no_truth{{0.0, {0.0, 0.0, 0.0}, std::nullopt}};
  EXPECT_THROW(corrupt(no_truth, n), ValueError);
}

TEST(Metrics, Rmse) {
  const std::vector<EulerPose> a{{0, 0, 0}, {1, 1, 1}};
  EXPECT_EQ(rmse(a, a), (AxisMetric{0, 0, 0}));
  const std::vector<EulerPose> off{{3, 3, 3}, {4, 4, 4}};
  EXPECT_DOUBLE_EQ(rmse(off, a)[1], 3.0);
  const std::vector<EulerPose> alt{{0, 0, 0}, {4, 4, 4}, {0, 0, 0}, {4, 4, 4}};
  const std::vector<EulerPose> zero(4);
  EXPECT_NEAR(rmse(alt, zero)[0], std::sqrt(8.0), 1e-12);
  EXPECT_THROW(rmse(a, alt), ValueError);
}

TEST(Metrics, Jitter) {
  const std::vector<EulerPose> constant(10, EulerPose{1, 2, 3});
  EXPECT_EQ(jitter(constant), (AxisMetric{0, 0, 0}));
  std::vector<EulerPose> alternating, ramp;
  for (int i = 0; i < 11; ++i) {
    alternating.push_back({static_cast<double>(i % 2), 0, 0});
    ramp.push_back({static_cast<double>(i), 0, 0});
  }
  EXPECT_DOUBLE_EQ(jitter(alternating)[0], 1.0);
  EXPECT_DOUBLE_EQ(jitter(ramp)[0], 1.0);
  EXPECT_THROW(jitter(std::vector<EulerPose>(1)), ValueError);
}

TEST(Metrics, SettleTime) {
  const std::vector<double> t{0.0, 0.1, 0.2, 0.3};
  const std::vector<EulerPose> at(4, EulerPose{1, 1, 1});
  EXPECT_EQ(settle_time(t, at, {1, 1, 1}, 0.5), 0.0);
  const std::vector<EulerPose> far(4, EulerPose{10, 0, 0});
  EXPECT_FALSE(settle_time(t, far, {0, 0, 0}, 1.0));
  const std::vector<EulerPose> in_out_in{{0, 0, 0}, {5, 0, 0}, {0.5, 0, 0}, {0.2, 0, 0}};
  EXPECT_DOUBLE_EQ(*settle_time(t, in_out_in, {0, 0, 0}, 1.0), 0.2);
}

TEST(Metrics, SettleTimeOfExponentialDecay) {
  const double rate = 1.5, eps = 0.5, x0 = 20.0, dt = 1.0 / 30.0;
  std::vector<double> t;
  std::vector<EulerPose> s;
  for (int k = 0; k < 300; ++k) {
    t.push_back(k * dt);
    s.push_back({x0 * std::exp(-rate * k * dt), 0, 0});
  }
  const double analytic = std::log(x0 / eps) / rate;
  const auto got = settle_time(t, s, {0, 0, 0}, eps);
  ASSERT_TRUE(got);
  EXPECT_NEAR(*got, analytic, dt);
}

}  // namespace
}  // namespace hpt
