#pragma once

// Synthetic ground truth, seeded estimator-noise corruption and the stream
// metrics used to judge filters against it.

#include "hpt/error_fit.hpp"
#include "hpt/noise_model.hpp"
#include "hpt/pose.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hpt {

struct Sinusoid {
  double amplitude = 0.0;  // degrees
  double frequency = 0.0;  // Hz
  double phase = 0.0;      // radians
};

// Ground truth is held at the origin over [start, end). It is tapered to zero
// with a raised cosine over `ramp` seconds on either side.
struct Dwell {
  double start = 0.0;
  double end = 0.0;
};

struct TrajectorySpec {
  double duration = 10.0;
  double rate = 30.0;
  std::array<std::vector<Sinusoid>, 3> motion;  // pitch, yaw, roll
  std::vector<Dwell> dwells;
  double ramp = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

// A missing axis model means no noise on that axis.
struct NoiseSpec {
  std::array<std::optional<NoiseModel>, 3> variance;  // deg^2 as a function of the true angle
  EulerPose bias;
  std::uint64_t seed = 1;

  double sigma(Axis axis, double true_angle) const;
  static NoiseSpec from_profile(const EstimatorProfile& profile, std::uint64_t seed);
};

double dwell_envelope(const TrajectorySpec& spec, double t);

std::vector<FrameRecord> gen_trajectory(const TrajectorySpec& spec);

// pose = ground_truth + bias + N(0, sigma(true angle)) per axis and frame.
std::vector<FrameRecord> corrupt(std::span<const FrameRecord> stream, const NoiseSpec& noise);

// Versioned benchmark: yaw 60 deg @ 0.05 Hz, pitch 20 deg @ 0.08 Hz,
// roll 15 deg @ 0.06 Hz, 60 s at 30 Hz, dwell at the origin over [25, 35) s
// with a 5 s taper.
TrajectorySpec benchmark_trajectory();
inline constexpr int kBenchmarkVersion = 1;

// (true, predicted) pairs with true poses uniform over [lo, hi]^3.
std::vector<PosePair> gen_error_dataset(const NoiseSpec& noise, std::size_t n, double lo, double hi);

// One sample per bin centre with |predicted - true| equal to the raw curve
// value: a noiseless dataset whose bin means lie exactly on the curve.
std::vector<PosePair> gen_curve_dataset(const EstimatorProfile& profile, double bin_width, double lo, double hi);

using AxisMetric = std::array<double, 3>;  // pitch, yaw, roll

AxisMetric rmse(std::span<const EulerPose> a, std::span<const EulerPose> b);

// Mean absolute frame-to-frame change per axis (deg/frame).
AxisMetric jitter(std::span<const EulerPose> stream);

// Time from the first frame until the stream enters the epsilon ball around
// target (Euclidean 3-norm) for good. Empty when the last frame is outside.
std::optional<double> settle_time(std::span<const double> t, std::span<const EulerPose> stream,
                                  const EulerPose& target, double epsilon);

std::vector<EulerPose> poses_of(std::span<const FrameRecord> frames);
std::vector<EulerPose> truths_of(std::span<const FrameRecord> frames);
std::vector<double> times_of(std::span<const FrameRecord> frames);

}  // namespace hpt
