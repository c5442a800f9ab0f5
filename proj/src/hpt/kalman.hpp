#pragma once

#include "hpt/loop_closure.hpp"
#include "hpt/noise_model.hpp"
#include "hpt/pose.hpp"

#include <optional>

namespace hpt {

enum class DtMode { FromTimestamps, Fixed };

struct KalmanConfig {
  // Diagonal process noise: pose entries deg^2, velocity entries (deg/s)^2.
  Vector6 process_noise_q = (Vector6() << 0.01, 0.01, 0.01, 0.1, 0.1, 0.1).finished();
  Vector6 initial_covariance_p0 = Vector6::Constant(10.0);
  DtMode dt_mode = DtMode::FromTimestamps;
  double fixed_dt = 1.0 / 30.0;
  // (I - KH) P (I - KH)^T + K R K^T instead of (I - KH) P.
  bool joseph_form = false;
  // Evaluate R on the loop-closure-blended observation (true) or the raw one.
  bool noise_on_blended = true;

  void validate() const;
};

struct Prior {
  StateVector state;
  CovarianceMatrix covariance;
};

struct Posterior {
  StateVector state;
  CovarianceMatrix covariance;
};

// F = [[I, dt I], [0, I]]
Matrix6 transition_matrix(double dt);

// x' = F x, P' = F P F^T + Q, re-symmetrized. Rejects dt <= 0.
Prior predict(const StateVector& state, const CovarianceMatrix& covariance, const Vector6& q_diag, double dt);

// Gain K = P H^T S^-1 with S = H P H^T + R, computed by an LDLT solve.
// Throws DegradedCovarianceError when cond(S) > 1e12.
Eigen::Matrix<double, 6, 3> kalman_gain(const CovarianceMatrix& prior_covariance, const Matrix3& r);

Posterior update(const StateVector& prior_state, const CovarianceMatrix& prior_covariance, const EulerPose& z,
                 const Matrix3& r, bool joseph_form = false);

class FilterSession {
 public:
  FilterSession(KalmanConfig config, const EulerPose& first_observation, double t0, EstimatorProfile noise_models,
                std::optional<LoopClosureConfig> loop_closure = std::nullopt);

  // Blend, build R, predict, update. Returns the posterior. On error the
  // session is left unchanged.
  StateVector step(const FrameRecord& frame);

  // Re-seed from an observation: zero velocity, P = P0.
  void reinitialize(const EulerPose& observation, double t);

  const StateVector& state() const { return state_; }
  const CovarianceMatrix& covariance() const { return covariance_; }
  double last_timestamp() const { return last_t_; }
  const KalmanConfig& config() const { return config_; }
  const EstimatorProfile& noise_models() const { return noise_; }
  const std::optional<LoopClosureConfig>& loop_closure() const { return loop_closure_; }
  void set_loop_closure(std::optional<LoopClosureConfig> lc);
  bool needs_reinit() const { return needs_reinit_; }

 private:
  KalmanConfig config_;
  EstimatorProfile noise_;
  std::optional<LoopClosureConfig> loop_closure_;
  StateVector state_;
  CovarianceMatrix covariance_;
  double last_t_;
  bool needs_reinit_ = false;
};

FilterSession init_session(const KalmanConfig& config, const EulerPose& first_observation, double t0,
                           const EstimatorProfile& noise_models,
                           std::optional<LoopClosureConfig> loop_closure = std::nullopt);

}  // namespace hpt
