#include "hpt/pose.hpp"

#include "hpt/errors.hpp"

#include <cmath>
#include <string>

namespace hpt {

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::Pitch: return "pitch";
    case Axis::Yaw: return "yaw";
    case Axis::Roll: return "roll";
  }
  return "?";
}

Axis parse_axis(std::string_view name) {
  if (name == "pitch") return Axis::Pitch;
  if (name == "yaw") return Axis::Yaw;
  if (name == "roll") return Axis::Roll;
  throw ValueError("unknown axis '" + std::string(name) + "' (expected pitch, yaw or roll)");
}

double EulerPose::operator[](Axis axis) const {
  switch (axis) {
    case Axis::Pitch: return pitch;
    case Axis::Yaw: return yaw;
    case Axis::Roll: return roll;
  }
  return pitch;
}

double& EulerPose::operator[](Axis axis) {
  switch (axis) {
    case Axis::Pitch: return pitch;
    case Axis::Yaw: return yaw;
    case Axis::Roll: return roll;
  }
  return pitch;
}

bool EulerPose::finite() const {
  return std::isfinite(pitch) && std::isfinite(yaw) && std::isfinite(roll);
}

Vector6 StateVector::vec() const {
  Vector6 v;
  v << pose.pitch, pose.yaw, pose.roll, velocity;
  return v;
}

StateVector StateVector::from_vec(const Vector6& v) {
  return {EulerPose{v[0], v[1], v[2]}, v.tail<3>()};
}

bool StateVector::finite() const { return pose.finite() && velocity.allFinite(); }

double normalize_angle(double raw) {
  if (!std::isfinite(raw)) throw ValueError("angle is not finite");
  if (raw >= -180.0 && raw < 180.0) return raw;
  double r = std::fmod(raw + 180.0, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative can round up to exactly 360 after the shift
  if (r >= 360.0) r -= 360.0;
  return r - 180.0;
}

EulerPose normalize(const EulerPose& pose) {
  return {normalize_angle(pose.pitch), normalize_angle(pose.yaw), normalize_angle(pose.roll)};
}

void require_finite(const EulerPose& pose, std::string_view what) {
  if (!pose.finite()) throw ValueError(std::string(what) + " has a non-finite component");
}

double angle_difference(double a, double b) { return normalize_angle(a - b); }

void symmetrize(Matrix6& p) { p = 0.5 * (p + p.transpose()).eval(); }

}  // namespace hpt
