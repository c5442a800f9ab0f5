#include "hpt/synth.hpp"

#include "hpt/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace hpt {

void TrajectorySpec::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ValueError("trajectory duration must be > 0");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ValueError("trajectory rate must be > 0");
  if (!(ramp >= 0.0) || !std::isfinite(ramp)) throw ValueError("dwell ramp must be >= 0");
  for (const auto& axis : motion)
    for (const auto& s : axis)
      if (!std::isfinite(s.amplitude) || !std::isfinite(s.frequency) || !std::isfinite(s.phase))
        throw ValueError("trajectory sinusoid has a non-finite parameter");
  for (const auto& d : dwells)
    if (!(d.end > d.start)) throw ValueError("dwell segment needs end > start");
}

double NoiseSpec::sigma(Axis axis, double true_angle) const {
  const auto& m = variance[static_cast<int>(axis)];
  return m ? std::sqrt(eval_noise(*m, true_angle)) : 0.0;
}

NoiseSpec NoiseSpec::from_profile(const EstimatorProfile& profile, std::uint64_t seed) {
  NoiseSpec n;
  for (Axis a : kAxes) n.variance[static_cast<int>(a)] = profile[a];
  n.seed = seed;
  return n;
}

double dwell_envelope(const TrajectorySpec& spec, double t) {
  double w = 1.0;
  const double r = spec.ramp;
  for (const auto& d : spec.dwells) {
    if (t >= d.start && t < d.end) return 0.0;
    if (r > 0.0 && t >= d.start - r && t < d.start)
      w *= 0.5 * (1.0 + std::cos(std::numbers::pi * (t - (d.start - r)) / r));
    else if (r > 0.0 && t >= d.end && t < d.end + r)
      w *= 0.5 * (1.0 - std::cos(std::numbers::pi * (t - d.end) / r));
  }
  return w;
}

std::vector<FrameRecord> gen_trajectory(const TrajectorySpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * spec.rate));
  std::vector<FrameRecord> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / spec.rate;
    const double w = dwell_envelope(spec, t);
    EulerPose truth;
    for (Axis a : kAxes) {
      double v = 0.0;
      for (const auto& s : spec.motion[static_cast<int>(a)])
        v += s.amplitude * std::sin(2.0 * std::numbers::pi * s.frequency * t + s.phase);
      truth[a] = w * v;
    }
    out[k] = FrameRecord{t, truth, truth};
  }
  return out;
}

std::vector<FrameRecord> corrupt(std::span<const FrameRecord> stream, const NoiseSpec& noise) {
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<FrameRecord> out(stream.begin(), stream.end());
  for (auto& f : out) {
    if (!f.ground_truth) throw ValueError("corrupt needs frames with ground truth");
    for (Axis a : kAxes) {
      const double truth = (*f.ground_truth)[a];
      f.pose[a] = truth + noise.bias[a] + noise.sigma(a, truth) * unit(rng);
    }
  }
  return out;
}

TrajectorySpec benchmark_trajectory() {
  TrajectorySpec s;
  s.duration = 60.0;
  s.rate = 30.0;
  s.motion[static_cast<int>(Axis::Pitch)] = {{20.0, 0.08, 0.0}};
  s.motion[static_cast<int>(Axis::Yaw)] = {{60.0, 0.05, 0.0}};
  s.motion[static_cast<int>(Axis::Roll)] = {{15.0, 0.06, 0.0}};
  s.dwells = {{25.0, 35.0}};
  s.ramp = 5.0;
  s.seed = 1;
  return s;
}

std::vector<PosePair> gen_error_dataset(const NoiseSpec& noise, std::size_t n, double lo, double hi) {
  if (!(lo < hi)) throw ValueError("dataset range needs lo < hi");
  std::mt19937_64 rng(noise.seed);
  std::uniform_real_distribution<double> angle(lo, hi);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<PosePair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    EulerPose truth{angle(rng), angle(rng), angle(rng)};
    EulerPose pred;
    for (Axis a : kAxes) pred[a] = truth[a] + noise.bias[a] + noise.sigma(a, truth[a]) * unit(rng);
    out.emplace_back(truth, pred);
  }
  return out;
}

std::vector<PosePair> gen_curve_dataset(const EstimatorProfile& profile, double bin_width, double lo, double hi) {
  if (!(bin_width > 0.0) || !(lo < hi)) throw ValueError("curve dataset needs bin_width > 0 and lo < hi");
  std::vector<PosePair> out;
  for (double c = lo + 0.5 * bin_width; c < hi; c += bin_width) {
    EulerPose truth{c, c, c};
    EulerPose pred;
    for (Axis a : kAxes) pred[a] = c + eval_noise_raw(profile[a], c);
    out.emplace_back(truth, pred);
  }
  return out;
}

AxisMetric rmse(std::span<const EulerPose> a, std::span<const EulerPose> b) {
  if (a.size() != b.size()) throw ValueError("rmse needs aligned streams of equal length");
  if (a.empty()) throw ValueError("rmse needs at least one frame");
  AxisMetric sum{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i)
    for (Axis ax : kAxes) {
      const double d = a[i][ax] - b[i][ax];
      sum[static_cast<int>(ax)] += d * d;
    }
  for (double& s : sum) s = std::sqrt(s / static_cast<double>(a.size()));
  return sum;
}

AxisMetric jitter(std::span<const EulerPose> stream) {
  if (stream.size() < 2) throw ValueError("jitter needs at least 2 frames");
  AxisMetric sum{0.0, 0.0, 0.0};
  for (std::size_t i = 1; i < stream.size(); ++i)
    for (Axis ax : kAxes) sum[static_cast<int>(ax)] += std::abs(stream[i][ax] - stream[i - 1][ax]);
  for (double& s : sum) s /= static_cast<double>(stream.size() - 1);
  return sum;
}

std::optional<double> settle_time(std::span<const double> t, std::span<const EulerPose> stream,
                                  const EulerPose& target, double epsilon) {
  if (t.size() != stream.size()) throw ValueError("settle_time needs aligned time and pose streams");
  if (stream.empty()) return std::nullopt;
  const Eigen::Vector3d goal = target.vec();
  std::size_t i = stream.size();
  while (i > 0 && (stream[i - 1].vec() - goal).norm() <= epsilon) --i;
  if (i == stream.size()) return std::nullopt;
  return t[i] - t[0];
}

std::vector<EulerPose> poses_of(std::span<const FrameRecord> frames) {
  std::vector<EulerPose> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.pose);
  return out;
}

std::vector<EulerPose> truths_of(std::span<const FrameRecord> frames) {
  std::vector<EulerPose> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    if (!f.ground_truth) throw ValueError("frame has no ground truth");
    out.push_back(*f.ground_truth);
  }
  return out;
}

std::vector<double> times_of(std::span<const FrameRecord> frames) {
  std::vector<double> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.t);
  return out;
}

}  // namespace hpt
