#include "hpt/tracker.hpp"

namespace hpt {

Tracker::Tracker(const RunConfig& config)
    : kalman_(config.kalman),
      profile_(config.noise.profile),
      lc_(config.loop_closure),
      calibrator_(config.loop_closure.calibration_frames) {}

void Tracker::reset() {
  session_.reset();
  calibrator_ = OriginCalibrator(lc_.calibration_frames);
  reinits_ = 0;
}

std::optional<EulerPose> Tracker::origin() const { return lc_.kappa ? lc_.kappa : calibrator_.origin(); }

StateVector Tracker::push(const FrameRecord& frame) {
  if (!session_) {
    std::optional<LoopClosureConfig> lc;
    if (lc_.enabled && lc_.kappa) lc = lc_.params;
    session_.emplace(kalman_, frame.pose, frame.t, profile_, lc);
  } else if (session_->needs_reinit()) {
    require_finite(frame.pose, "observation");
    session_->reinitialize(frame.pose, frame.t);
    ++reinits_;
  } else {
    session_->step(frame);
  }
  if (!lc_.kappa && !calibrator_.origin()) {
    if (auto kappa = calibrator_.add(frame.pose); kappa && lc_.enabled) {
      LoopClosureConfig lc = lc_.params;
      lc.kappa = *kappa;
      session_->set_loop_closure(lc);
    }
  }
  return session_->state();
}

}  // namespace hpt
