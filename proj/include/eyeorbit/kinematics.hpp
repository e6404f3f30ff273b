#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eyeorbit/quaternion.hpp"

namespace eyeorbit {

struct Pose {
  UnitQuaternion r;
  PureQuaternion t;  // mm

  // this * other: apply `other` expressed in this frame.
  Pose operator*(const Pose& other) const;
};

enum class JointType { revolute, prismatic };

// One link in standard (distal) Denavit-Hartenberg form:
// T = Rz(theta) Tz(d) Tx(a) Rx(alpha). The joint variable is added to
// theta (revolute) or d (prismatic).
struct Joint {
  JointType type = JointType::revolute;
  double theta = 0.0;  // rad
  double d = 0.0;      // mm
  double a = 0.0;      // mm
  double alpha = 0.0;  // rad
  double lower = 0.0;  // rad or mm
  double upper = 0.0;
};

class SerialManipulator {
public:
  SerialManipulator(std::vector<Joint> joints, Pose base, double tool_length,
                    std::string name = {});

  int dof() const { return static_cast<int>(joints_.size()); }
  const std::vector<Joint>& joints() const { return joints_; }
  const Pose& base() const { return base_; }
  // Instrument length along the last frame's z axis.
  double tool_length() const { return tool_length_; }
  const std::string& name() const { return name_; }

  Eigen::VectorXd lower_limits() const;
  Eigen::VectorXd upper_limits() const;

private:
  std::vector<Joint> joints_;
  Pose base_;
  double tool_length_;
  std::string name_;
};

// Pose of the joint-k frame relative to frame k-1 at joint value qk.
Pose link_transform(const Joint& joint, double qk);

Pose forward_kinematics(const SerialManipulator& robot,
                        const Eigen::VectorXd& q);

// 4 x n, first row zero: vec4(dt/dt) = J_t qdot.
Eigen::MatrixXd translation_jacobian(const SerialManipulator& robot,
                                     const Eigen::VectorXd& q);

// 4 x n: vec4(dr/dt) = J_r qdot.
Eigen::MatrixXd rotation_jacobian(const SerialManipulator& robot,
                                  const Eigen::VectorXd& q);

// Pose and both Jacobians from a single pass over the chain.
struct KinematicState {
  Pose pose;
  Eigen::MatrixXd translation_jacobian;
  Eigen::MatrixXd rotation_jacobian;
};

KinematicState evaluate(const SerialManipulator& robot,
                        const Eigen::VectorXd& q);

}  // namespace eyeorbit
