#include <numbers>
#include <random>

#include <doctest.h>

#include "eyeorbit/errors.hpp"
#include "eyeorbit/kinematics.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace eyeorbit;
using std::numbers::pi;

namespace {

Eigen::VectorXd one(double v) { return Eigen::VectorXd::Constant(1, v); }

Eigen::VectorXd random_q(const SerialManipulator& robot, std::mt19937_64& rng) {
  const Eigen::VectorXd lo = robot.lower_limits(), hi = robot.upper_limits();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd q(robot.dof());
  for (int k = 0; k < robot.dof(); ++k) q[k] = lo[k] + u(rng) * (hi[k] - lo[k]);
  return q;
}

}  // namespace

TEST_CASE("single revolute link") {
  const SerialManipulator r = fixture::single_joint(JointType::revolute, 10.0);
  CHECK((forward_kinematics(r, one(0.0)).t - PureQuaternion(10, 0, 0)).norm() <= 1e-12);
  CHECK((forward_kinematics(r, one(pi / 2)).t - PureQuaternion(0, 10, 0)).norm() <= 1e-12);
  CHECK(translation_jacobian(r, one(0.0)).col(0).isApprox(Eigen::Vector4d(0, 0, 10, 0)));
  CHECK(rotation_jacobian(r, one(0.0)).col(0).isApprox(Eigen::Vector4d(0, 0, 0, 0.5)));
}

TEST_CASE("single prismatic link") {
  const SerialManipulator p = fixture::single_joint(JointType::prismatic);
  CHECK(translation_jacobian(p, one(0.3)).col(0).isApprox(Eigen::Vector4d(0, 0, 0, 1)));
  CHECK(rotation_jacobian(p, one(0.3)).isZero());
}

TEST_CASE("dimension errors") {
  const SerialManipulator p = fixture::single_joint(JointType::prismatic);
  CHECK_THROWS_AS(forward_kinematics(p, Eigen::VectorXd::Zero(2)), DimensionError);
}

TEST_CASE("shipped arms match the homogeneous-transform chain") {
  const SceneConfig& scene = fixture::shipped_scene();
  std::mt19937_64 rng(11);
  for (const RobotConfig& rc : scene.robots) {
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd q = i == 0 ? rc.q_init : random_q(rc.robot, rng);
      const Pose p = forward_kinematics(rc.robot, q);
      const Eigen::Matrix4d T = oracle::homogeneous_fk(rc.robot, q);
      CHECK((p.t.vec3() - T.topRightCorner<3, 1>()).norm() <= 1e-9);
      const Eigen::Vector4d r = oracle::matrix_quaternion(T.topLeftCorner<3, 3>(), vec4(p.r));
      CHECK((vec4(p.r) - r).norm() <= 1e-9);
    }
  }
}

TEST_CASE("shipped arm Jacobians match finite differences") {
  const SceneConfig& scene = fixture::shipped_scene();
  std::mt19937_64 rng(12);
  for (const RobotConfig& rc : scene.robots) {
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXd q = random_q(rc.robot, rng);
      const KinematicState ks = evaluate(rc.robot, q);
      const Eigen::Vector4d hint = vec4(ks.pose.r);
      const Eigen::MatrixXd Jt = oracle::central_difference(
          [&](const Eigen::VectorXd& x) {
            Eigen::Vector4d v(0, 0, 0, 0);
            v.tail<3>() = oracle::homogeneous_fk(rc.robot, x).topRightCorner<3, 1>();
            return Eigen::VectorXd(v);
          },
          q);
      const Eigen::MatrixXd Jr = oracle::central_difference(
          [&](const Eigen::VectorXd& x) {
            const Eigen::Matrix4d T = oracle::homogeneous_fk(rc.robot, x);
            return Eigen::VectorXd(oracle::matrix_quaternion(T.topLeftCorner<3, 3>(), hint));
          },
          q);
      CHECK(oracle::relative_error(ks.translation_jacobian, Jt) <= 1e-6);
      CHECK(oracle::relative_error(ks.rotation_jacobian, Jr) <= 1e-6);
    }
  }
}
