#include "hpt/loop_closure.hpp"

#include "hpt/errors.hpp"

#include <cmath>
#include <string>

namespace hpt {

NormMode parse_norm_mode(std::string_view text) {
  if (text == "euclidean_3d") return NormMode::Euclidean3d;
  if (text == "per_axis") return NormMode::PerAxis;
  throw ValueError("unknown norm_mode '" + std::string(text) + "' (expected euclidean_3d or per_axis)");
}

std::string_view norm_mode_name(NormMode mode) {
  return mode == NormMode::PerAxis ? "per_axis" : "euclidean_3d";
}

void LoopClosureConfig::validate() const {
  if (!(xi > 0.0 && xi <= 1.0)) throw ValueError("loop closure xi must be in (0, 1]");
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw ValueError("loop closure theta must be >= 0");
  require_finite(kappa, "loop closure kappa");
}

EulerPose apply_loop_closure(const LoopClosureConfig& config, const EulerPose& z) {
  require_finite(z, "observation");
  const Eigen::Vector3d zv = z.vec();
  const Eigen::Vector3d kv = config.kappa.vec();
  const Eigen::Vector3d blended = config.xi * zv + (1.0 - config.xi) * kv;
  if (config.norm_mode == NormMode::Euclidean3d) {
    return (zv - kv).norm() <= config.theta ? EulerPose::from_vec(blended) : z;
  }
  EulerPose out = z;
  for (int i = 0; i < 3; ++i)
    if (std::abs(zv[i] - kv[i]) <= config.theta) out[static_cast<Axis>(i)] = blended[i];
  return out;
}

EulerPose calibrate_origin(std::span<const EulerPose> frames) {
  if (frames.empty()) throw ValueError("origin calibration needs at least one frame");
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& f : frames) {
    require_finite(f, "calibration frame");
    sum += f.vec();
  }
  return EulerPose::from_vec(sum / static_cast<double>(frames.size()));
}

OriginCalibrator::OriginCalibrator(std::size_t frames_needed) : needed_(frames_needed) {
  if (needed_ == 0) throw ValueError("calibration_frames must be >= 1");
}

std::optional<EulerPose> OriginCalibrator::add(const EulerPose& z) {
  if (origin_) return origin_;
  require_finite(z, "calibration frame");
  sum_ += z.vec();
  if (++count_ == needed_) origin_ = EulerPose::from_vec(sum_ / static_cast<double>(count_));
  return origin_;
}

}  // namespace hpt
