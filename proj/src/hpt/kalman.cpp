#include "hpt/kalman.hpp"

#include "hpt/errors.hpp"
#include "hpt/text.hpp"

#include <cmath>
#include <string>

namespace hpt {

namespace {

constexpr double kMaxInnovationCondition = 1e12;

Eigen::Matrix<double, 3, 6> observation_matrix() {
  Eigen::Matrix<double, 3, 6> h = Eigen::Matrix<double, 3, 6>::Zero();
  h.leftCols<3>().setIdentity();
  return h;
}

}  // namespace

void KalmanConfig::validate() const {
  if (!process_noise_q.allFinite() || (process_noise_q.array() <= 0.0).any())
    throw ValueError("process noise Q diagonal entries must be > 0");
  if (!initial_covariance_p0.allFinite() || (initial_covariance_p0.array() <= 0.0).any())
    throw ValueError("initial covariance P0 diagonal entries must be > 0");
  if (!(fixed_dt > 0.0 && std::isfinite(fixed_dt)))
    throw ValueError("fixed dt must be > 0");
}

Matrix6 transition_matrix(double dt) {
  Matrix6 f = Matrix6::Identity();
  f.topRightCorner<3, 3>() = dt * Matrix3::Identity();
  return f;
}

Prior predict(const StateVector& state, const CovarianceMatrix& covariance, const Vector6& q_diag, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValueError("predict needs a finite dt > 0");
  const Matrix6 f = transition_matrix(dt);
  Prior prior{StateVector::from_vec(f * state.vec()), f * covariance * f.transpose()};
  prior.covariance.diagonal() += q_diag;
  symmetrize(prior.covariance);
  return prior;
}

Eigen::Matrix<double, 6, 3> kalman_gain(const CovarianceMatrix& prior_covariance, const Matrix3& r) {
  const auto h = observation_matrix();
  Matrix3 s = h * prior_covariance * h.transpose() + r;
  s = 0.5 * (s + s.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Matrix3> eig(s, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxInnovationCondition)
    throw DegradedCovarianceError("innovation covariance is singular or ill-conditioned");
  // K^T = S^-1 H P  (S and P symmetric)
  const Eigen::Matrix<double, 3, 6> kt = s.ldlt().solve(h * prior_covariance);
  return kt.transpose();
}

Posterior update(const StateVector& prior_state, const CovarianceMatrix& prior_covariance, const EulerPose& z,
                 const Matrix3& r, bool joseph_form) {
  require_finite(z, "observation");
  if ((r.diagonal().array() <= 0.0).any() || !r.allFinite())
    throw ValueError("observation noise R diagonal entries must be > 0");
  const auto h = observation_matrix();
  const Eigen::Matrix<double, 6, 3> k = kalman_gain(prior_covariance, r);
  const Vector6 x = prior_state.vec();
  const Eigen::Vector3d innovation = z.vec() - h * x;

  Posterior post;
  post.state = StateVector::from_vec(x + k * innovation);
  const Matrix6 ikh = Matrix6::Identity() - k * h;
  if (joseph_form)
    post.covariance = ikh * prior_covariance * ikh.transpose() + k * r * k.transpose();
  else
    post.covariance = ikh * prior_covariance;
  symmetrize(post.covariance);
  return post;
}

FilterSession::FilterSession(KalmanConfig config, const EulerPose& first_observation, double t0,
                             EstimatorProfile noise_models, std::optional<LoopClosureConfig> loop_closure)
    : config_(std::move(config)), noise_(std::move(noise_models)), loop_closure_(std::move(loop_closure)) {
  config_.validate();
  noise_.validate();
  if (loop_closure_) loop_closure_->validate();
  if (!std::isfinite(t0)) throw ValueError("initial timestamp is not finite");
  reinitialize(first_observation, t0);
}

void FilterSession::reinitialize(const EulerPose& observation, double t) {
  require_finite(observation, "first observation");
  state_ = StateVector{observation, Eigen::Vector3d::Zero()};
  covariance_ = config_.initial_covariance_p0.asDiagonal();
  last_t_ = t;
  needs_reinit_ = false;
}

void FilterSession::set_loop_closure(std::optional<LoopClosureConfig> lc) {
  if (lc) lc->validate();
  loop_closure_ = std::move(lc);
}

StateVector FilterSession::step(const FrameRecord& frame) {
  require_finite(frame.pose, "observation");
  if (!std::isfinite(frame.t)) throw ValueError("frame timestamp is not finite");
  double dt = config_.fixed_dt;
  if (config_.dt_mode == DtMode::FromTimestamps) {
    if (!(frame.t > last_t_))
      throw OrderingError("frame timestamp " + format_double(frame.t) + " does not advance past " +
                          format_double(last_t_));
    dt = frame.t - last_t_;
  }

  const EulerPose blended = loop_closure_ ? apply_loop_closure(*loop_closure_, frame.pose) : frame.pose;
  const Matrix3 r = build_R(noise_, config_.noise_on_blended ? blended : frame.pose);
  const Prior prior = predict(state_, covariance_, config_.process_noise_q, dt);
  Posterior post;
  try {
    post = update(prior.state, prior.covariance, blended, r, config_.joseph_form);
  } catch (const DegradedCovarianceError&) {
    needs_reinit_ = true;
    throw;
  }
  state_ = post.state;
  covariance_ = post.covariance;
  last_t_ = frame.t;
  return state_;
}

FilterSession init_session(const KalmanConfig& config, const EulerPose& first_observation, double t0,
                           const EstimatorProfile& noise_models, std::optional<LoopClosureConfig> loop_closure) {
  return FilterSession(config, first_observation, t0, noise_models, std::move(loop_closure));
}

}  // namespace hpt
