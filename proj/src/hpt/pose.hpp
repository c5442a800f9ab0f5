#pragma once

// Shared domain types. Angles are degrees everywhere; component order is
// always (pitch, yaw, roll).

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string_view>

namespace hpt {

enum class Axis { Pitch = 0, Yaw = 1, Roll = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::Pitch, Axis::Yaw, Axis::Roll};

std::string_view axis_name(Axis axis);
Axis parse_axis(std::string_view name);

struct EulerPose {
  double pitch = 0.0;
  double yaw = 0.0;
  double roll = 0.0;

  double operator[](Axis axis) const;
  double& operator[](Axis axis);

  Eigen::Vector3d vec() const { return {pitch, yaw, roll}; }
  static EulerPose from_vec(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

  bool finite() const;
  friend bool operator==(const EulerPose&, const EulerPose&) = default;
};

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Matrix3 = Eigen::Matrix3d;

// 6x6 covariance over (pitch, yaw, roll, v_pitch, v_yaw, v_roll).
using CovarianceMatrix = Matrix6;

// Posterior/prior state: pose in degrees, angular velocity in degrees/second.
struct StateVector {
  EulerPose pose;
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();

  Vector6 vec() const;
  static StateVector from_vec(const Vector6& v);
  bool finite() const;
};

struct FrameRecord {
  double t = 0.0;
  EulerPose pose;
  std::optional<EulerPose> ground_truth;
};

// Wraps into [-180, 180). Throws ValueError on non-finite input.
double normalize_angle(double raw);
EulerPose normalize(const EulerPose& pose);

void require_finite(const EulerPose& pose, std::string_view what);

// Smallest signed difference a - b on the circle, in [-180, 180).
double angle_difference(double a, double b);

// 0.5 (P + P^T)
void symmetrize(Matrix6& p);

}  // namespace hpt
