#pragma once

#include <string>

#include "eyeorbit/scene.hpp"

namespace fixture {

inline std::string scene_path() { return EYEORBIT_SCENE_PATH; }

inline const eyeorbit::SceneConfig& shipped_scene() {
  static const eyeorbit::SceneConfig scene = eyeorbit::load_scene(scene_path());
  return scene;
}

inline eyeorbit::SerialManipulator single_joint(eyeorbit::JointType type,
                                                double a = 0.0) {
  eyeorbit::Joint j;
  j.type = type;
  j.a = a;
  j.lower = -10.0;
  j.upper = 10.0;
  return eyeorbit::SerialManipulator({j}, {}, 0.0);
}

}  // namespace fixture

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "support/oracles.hpp"

namespace fixture {

inline Eigen::VectorXd robot_q(const eyeorbit::SceneConfig& scene,
                               const Eigen::VectorXd& q, int i) {
  return i == 0 ? Eigen::VectorXd(q.head(scene.dof(0)))
                : Eigen::VectorXd(q.tail(scene.dof(1)));
}

// Configurations drawn uniformly within +/- spread of q_init (clamped to the
// joint limits) whose tips sit at least 0.1 mm inside the eye, whose shafts
// cross the sphere at a clear angle, and whose RCMs are apart.
inline std::vector<Eigen::VectorXd> interior_configs(
    const eyeorbit::SceneConfig& scene, int count, std::uint64_t seed,
    double spread = 0.15) {
  const Eigen::VectorXd q0 = scene.initial_q();
  Eigen::VectorXd lo(q0.size()), hi(q0.size());
  lo << scene.robots[0].robot.lower_limits(), scene.robots[1].robot.lower_limits();
  hi << scene.robots[0].robot.upper_limits(), scene.robots[1].robot.upper_limits();
  const double r = scene.eye.radius();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  while (static_cast<int>(out.size()) < count) {
    Eigen::VectorXd q(q0.size());
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      q[k] = std::clamp(q0[k] + spread * u(rng), lo[k], hi[k]);
    }
    bool ok = true;
    Eigen::Vector3d rcm[2];
    for (int i = 0; i < 2 && ok; ++i) {
      const oracle::Instrument g = oracle::instrument(
          scene.robots[i].robot, robot_q(scene, q, i), r, Eigen::Vector4d(1, 0, 0, 0));
      const double tl = g.tip.dot(g.direction);
      const double h1sq = tl * tl - g.tip.squaredNorm() + r * r;
      ok = g.tip.norm() < r - 0.1 && h1sq > 0.01;
      rcm[i] = g.rcm;
    }
    if (ok && (rcm[0] - rcm[1]).norm() > 0.1) out.push_back(q);
  }
  return out;
}

}  // namespace fixture
