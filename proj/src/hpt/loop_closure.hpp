#pragma once

#include "hpt/pose.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace hpt {

enum class NormMode { Euclidean3d, PerAxis };

NormMode parse_norm_mode(std::string_view text);
std::string_view norm_mode_name(NormMode mode);

// Observation blend toward a resting origin pose:
//   z' = xi * z + (1 - xi) * kappa   when |z - kappa| <= theta
//   z' = z                           otherwise
struct LoopClosureConfig {
  EulerPose kappa;
  double xi = 0.618;
  double theta = 2.0;
  NormMode norm_mode = NormMode::Euclidean3d;

  void validate() const;
};

// Blend is discontinuous at the threshold: the jump there is (1 - xi) * theta.
EulerPose apply_loop_closure(const LoopClosureConfig& config, const EulerPose& z);

// Componentwise mean of the given observations.
EulerPose calibrate_origin(std::span<const EulerPose> frames);

// Collects the first `frames_needed` observations and yields kappa once full.
class OriginCalibrator {
 public:
  explicit OriginCalibrator(std::size_t frames_needed);

  // Returns kappa on the call that completes calibration, and afterwards.
  std::optional<EulerPose> add(const EulerPose& z);
  std::optional<EulerPose> origin() const { return origin_; }
  std::size_t frames_needed() const { return needed_; }

 private:
  std::size_t needed_;
  std::size_t count_ = 0;
  Eigen::Vector3d sum_ = Eigen::Vector3d::Zero();
  std::optional<EulerPose> origin_;
};

}  // namespace hpt
