#include "eyeorbit/kinematics.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "eyeorbit/errors.hpp"

namespace eyeorbit {

namespace {

constexpr PureQuaternion kZ{0.0, 0.0, 1.0};

void check_dof(const SerialManipulator& robot, const Eigen::VectorXd& q) {
  if (q.size() != robot.dof()) {
    throw DimensionError("robot '" + robot.name() + "' has " +
                         std::to_string(robot.dof()) +
                         " joints but q has " + std::to_string(q.size()) +
                         " entries");
  }
}

}  // namespace

Pose Pose::operator*(const Pose& other) const {
  return {r * other.r, t + rotate_vector(r, other.t)};
}

SerialManipulator::SerialManipulator(std::vector<Joint> joints, Pose base,
                                     double tool_length, std::string name)
    : joints_(std::move(joints)),
      base_(base),
      tool_length_(tool_length),
      name_(std::move(name)) {
  if (joints_.empty()) {
    throw ConfigurationError("robot '" + name_ + "' has no joints");
  }
  for (std::size_t k = 0; k < joints_.size(); ++k) {
    const Joint& j = joints_[k];
    if (!std::isfinite(j.theta) || !std::isfinite(j.d) ||
        !std::isfinite(j.a) || !std::isfinite(j.alpha)) {
      throw ConfigurationError("robot '" + name_ + "' joint " +
                               std::to_string(k) +
                               " has a non-finite DH parameter");
    }
    if (!(j.lower < j.upper)) {
      throw ConfigurationError("robot '" + name_ + "' joint " +
                               std::to_string(k) +
                               ": lower limit must be below upper limit");
    }
  }
  if (!std::isfinite(tool_length_)) {
    throw ConfigurationError("robot '" + name_ + "' tool length not finite");
  }
}

Eigen::VectorXd SerialManipulator::lower_limits() const {
  Eigen::VectorXd v(dof());
  for (int k = 0; k < dof(); ++k) v[k] = joints_[k].lower;
  return v;
}

Eigen::VectorXd SerialManipulator::upper_limits() const {
  Eigen::VectorXd v(dof());
  for (int k = 0; k < dof(); ++k) v[k] = joints_[k].upper;
  return v;
}

Pose link_transform(const Joint& joint, double qk) {
  const double theta =
      joint.type == JointType::revolute ? joint.theta + qk : joint.theta;
  const double d = joint.type == JointType::prismatic ? joint.d + qk : joint.d;
  const UnitQuaternion rz = UnitQuaternion::from_axis_angle(kZ, theta);
  const UnitQuaternion rx =
      UnitQuaternion::from_axis_angle({1.0, 0.0, 0.0}, joint.alpha);
  return {rz * rx, {joint.a * std::cos(theta), joint.a * std::sin(theta), d}};
}

Pose forward_kinematics(const SerialManipulator& robot,
                        const Eigen::VectorXd& q) {
  check_dof(robot, q);
  Pose pose = robot.base();
  for (int k = 0; k < robot.dof(); ++k) {
    pose = pose * link_transform(robot.joints()[k], q[k]);
  }
  return pose * Pose{UnitQuaternion::identity(), {0.0, 0.0, robot.tool_length()}};
}

KinematicState evaluate(const SerialManipulator& robot,
                        const Eigen::VectorXd& q) {
  check_dof(robot, q);
  const int n = robot.dof();

  // Joint k moves about/along the z axis of frame k-1 (frame 0 is the base).
  std::vector<PureQuaternion> axes(n);
  std::vector<PureQuaternion> origins(n);
  Pose pose = robot.base();
  for (int k = 0; k < n; ++k) {
    axes[k] = rotate_vector(pose.r, kZ);
    origins[k] = pose.t;
    pose = pose * link_transform(robot.joints()[k], q[k]);
  }
  pose = pose * Pose{UnitQuaternion::identity(), {0.0, 0.0, robot.tool_length()}};

  KinematicState out{pose, Eigen::MatrixXd::Zero(4, n),
                     Eigen::MatrixXd::Zero(4, n)};
  const Eigen::Matrix4d r_minus = hamilton_minus(pose.r);
  for (int k = 0; k < n; ++k) {
    if (robot.joints()[k].type == JointType::revolute) {
      out.translation_jacobian.col(k) =
          vec4(cross(axes[k], pose.t - origins[k]));
      // dr/dt = 1/2 omega r
      out.rotation_jacobian.col(k) = 0.5 * r_minus * vec4(axes[k]);
    } else {
      out.translation_jacobian.col(k) = vec4(axes[k]);
    }
  }
  return out;
}

Eigen::MatrixXd translation_jacobian(const SerialManipulator& robot,
                                     const Eigen::VectorXd& q) {
  return evaluate(robot, q).translation_jacobian;
}

Eigen::MatrixXd rotation_jacobian(const SerialManipulator& robot,
                                  const Eigen::VectorXd& q) {
  return evaluate(robot, q).rotation_jacobian;
}

}  // namespace eyeorbit
