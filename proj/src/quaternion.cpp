#include "eyeorbit/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eyeorbit/errors.hpp"

namespace eyeorbit {

double Quaternion::norm() const { return std::sqrt(squared_norm()); }

PureQuaternion Quaternion::imag() const { return {x_, y_, z_}; }

double PureQuaternion::norm() const { return std::sqrt(squared_norm()); }

PureQuaternion PureQuaternion::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) {
    throw DegenerateGeometryError("cannot normalize a zero-length vector");
  }
  return (1.0 / n) * *this;
}

UnitQuaternion::UnitQuaternion(const Quaternion& q) {
  const double n = q.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kNormalizeTolerance) {
    throw DegenerateGeometryError("quaternion norm " + std::to_string(n) +
                                  " is not within tolerance of 1");
  }
  q_ = (1.0 / n) * q;
}

UnitQuaternion UnitQuaternion::from_axis_angle(const PureQuaternion& axis,
                                               double angle) {
  const PureQuaternion n = axis.normalized();
  const double s = std::sin(0.5 * angle);
  return UnitQuaternion(
      Quaternion(std::cos(0.5 * angle), s * n.x(), s * n.y(), s * n.z()),
      Trusted{});
}

UnitQuaternion UnitQuaternion::normalize(const Quaternion& q) {
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DegenerateGeometryError("cannot normalize a zero quaternion");
  }
  return UnitQuaternion((1.0 / n) * q, Trusted{});
}

UnitQuaternion UnitQuaternion::conjugate() const {
  return UnitQuaternion(q_.conjugate(), Trusted{});
}

double UnitQuaternion::angle() const {
  // atan2 form stays accurate near 0 and pi, unlike acos(w).
  const double s = q_.imag().norm();
  return 2.0 * std::atan2(s, std::abs(q_.w()));
}

UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
  // Products of unit quaternions drift by rounding only; renormalize.
  const Quaternion p = a.q_ * b.q_;
  return UnitQuaternion((1.0 / p.norm()) * p, UnitQuaternion::Trusted{});
}

Quaternion multiply(const Quaternion& a, const Quaternion& b) { return a * b; }

Quaternion conjugate(const Quaternion& h) { return h.conjugate(); }

Eigen::Vector4d vec4(const Quaternion& h) {
  return {h.w(), h.x(), h.y(), h.z()};
}

Quaternion from_vec4(const Eigen::Vector4d& v) {
  return {v[0], v[1], v[2], v[3]};
}

Eigen::Matrix4d hamilton_plus(const Quaternion& h) {
  Eigen::Matrix4d m;
  // clang-format off
  m << h.w(), -h.x(), -h.y(), -h.z(),
       h.x(),  h.w(), -h.z(),  h.y(),
       h.y(),  h.z(),  h.w(), -h.x(),
       h.z(), -h.y(),  h.x(),  h.w();
  // clang-format on
  return m;
}

Eigen::Matrix4d hamilton_minus(const Quaternion& h) {
  Eigen::Matrix4d m;
  // clang-format off
  m << h.w(), -h.x(), -h.y(), -h.z(),
       h.x(),  h.w(),  h.z(), -h.y(),
       h.y(), -h.z(),  h.w(),  h.x(),
       h.z(),  h.y(), -h.x(),  h.w();
  // clang-format on
  return m;
}

Eigen::Matrix4d conjugation_matrix() {
  return Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal();
}

Eigen::Matrix4d cross_matrix(const PureQuaternion& h) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  // clang-format off
  m.bottomRightCorner<3, 3>() <<
       0.0,   -h.z(),  h.y(),
       h.z(),  0.0,   -h.x(),
      -h.y(),  h.x(),  0.0;
  // clang-format on
  return m;
}

Eigen::Matrix4d cross_matrix(const Quaternion& h) {
  if (h.w() != 0.0) {
    throw DegenerateGeometryError(
        "cross_matrix requires a pure quaternion (zero real part)");
  }
  return cross_matrix(h.imag());
}

PureQuaternion rotate_vector(const UnitQuaternion& r, const PureQuaternion& p) {
  const Quaternion& q = r.quaternion();
  return (q * p.quaternion() * q.conjugate()).imag();
}

}  // namespace eyeorbit
