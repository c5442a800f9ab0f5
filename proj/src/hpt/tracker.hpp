#pragma once

// Per-stream driver around a FilterSession: lazy initialization from the
// first frame, origin calibration for loop closure, and re-initialization of
// a degraded session on the following frame.

#include "hpt/config.hpp"
#include "hpt/kalman.hpp"

#include <optional>

namespace hpt {

class Tracker {
 public:
  explicit Tracker(const RunConfig& config);

  // Posterior after this frame. Errors leave the tracker unchanged, except
  // DegradedCovarianceError which schedules a re-initialization.
  StateVector push(const FrameRecord& frame);

  void reset();

  bool initialized() const { return session_.has_value(); }
  const FilterSession* session() const { return session_ ? &*session_ : nullptr; }
  // Explicit kappa, or the calibrated one once enough frames arrived.
  std::optional<EulerPose> origin() const;
  std::size_t reinit_count() const { return reinits_; }

 private:
  KalmanConfig kalman_;
  EstimatorProfile profile_;
  LoopClosureSection lc_;
  std::optional<FilterSession> session_;
  OriginCalibrator calibrator_;
  std::size_t reinits_ = 0;
};

}  // namespace hpt
