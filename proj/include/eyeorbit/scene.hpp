#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "eyeorbit/kinematics.hpp"
#include "eyeorbit/orbital.hpp"
#include "eyeorbit/qp.hpp"

namespace eyeorbit {

enum class ControlMode { fixed_rcm, orbital };

ControlMode parse_mode(const std::string& text);
const char* to_string(ControlMode mode);

struct RobotConfig {
  SerialManipulator robot;
  Eigen::VectorXd q_init;
};

// Where the light guide is told to go.
enum class LightGuideTarget { hold_initial, eye_center };

// Gains are VFI gains in 1/s. Distances in mm, squared distances in mm^2.
struct ConstraintConfig {
  // Both tips stay inside a sphere of radius r_eye - tip_margin.
  bool tip_in_eye = true;
  double tip_margin = 0.5;
  // Light-guide tip stays at least retina_clearance away from the retina.
  bool light_guide_retina = true;
  double retina_clearance = 2.0;
  double safety_gain = 1.0;

  // Fixed-RCM mode: squared shaft-to-anchor distance below rcm_tolerance^2.
  double rcm_tolerance = 0.005;
  double rcm_gain = 250.0;

  // Orbital mode band on the squared RCM distance.
  double orbital_d_safe = 0.5;
  double orbital_gain = 0.1;

  bool rotation_limits = true;
  RotationLimits rotation;

  bool joint_limits = true;
  double joint_gain = 1.0;
};

// Positioning runs stop once the tip is this close to its goal.
struct SettleConfig {
  double tolerance = 0.01;  // mm
  double max_time = 10.0;   // s
  double ramp_time = 4.0;   // s, smooth target interpolation to the goal
};

struct SceneConfig {
  std::array<RobotConfig, 2> robots;
  EyeModel eye{12.0};
  ControlParams control;
  ConstraintConfig constraints;
  LightGuideTarget light_guide_target = LightGuideTarget::hold_initial;
  double dt = 0.004;               // s
  double fundus_depth = -8.0;      // z of the fundus target plane, mm
  SettleConfig settle;
  std::uint64_t hash = 0;          // FNV-1a of the source text

  int dof(int robot) const { return robots[robot].robot.dof(); }
  int total_dof() const { return dof(0) + dof(1); }
  Eigen::VectorXd initial_q() const;
};

// Parses and validates a scene. Throws ParseError for malformed text and
// ConfigurationError naming the first violated constraint at the initial
// configuration.
SceneConfig load_scene(const std::string& path);
SceneConfig parse_scene(const std::string& json_text);

// Throws ConfigurationError if the initial configuration violates any
// constraint enabled in either control mode.
void validate_initial_state(const SceneConfig& scene);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace eyeorbit
