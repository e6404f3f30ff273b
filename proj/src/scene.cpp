#include "eyeorbit/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "eyeorbit/errors.hpp"

namespace eyeorbit {

using nlohmann::json;

namespace {

PureQuaternion read_vec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw ParseError(std::string(what) + " must be an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

JointType read_joint_type(const std::string& s) {
  if (s == "revolute") return JointType::revolute;
  if (s == "prismatic") return JointType::prismatic;
  throw ParseError("unknown joint type '" + s + "'");
}

RobotConfig read_robot(const json& j, int index) {
  const std::string name = j.value("name", "robot" + std::to_string(index + 1));
  std::vector<Joint> joints;
  for (const json& jj : j.at("joints")) {
    Joint joint;
    joint.type = read_joint_type(jj.value("type", "revolute"));
    joint.theta = jj.value("theta", 0.0);
    joint.d = jj.value("d", 0.0);
    joint.a = jj.value("a", 0.0);
    joint.alpha = jj.value("alpha", 0.0);
    joint.lower = jj.at("lower").get<double>();
    joint.upper = jj.at("upper").get<double>();
    joints.push_back(joint);
  }
  Pose base;
  if (j.contains("base")) {
    const json& b = j.at("base");
    if (b.contains("rotation")) {
      const auto r = b.at("rotation").get<std::vector<double>>();
      if (r.size() != 4) throw ParseError("base rotation must be [w, x, y, z]");
      base.r = UnitQuaternion(Quaternion(r[0], r[1], r[2], r[3]));
    }
    if (b.contains("translation")) {
      base.t = read_vec3(b.at("translation"), "base translation");
    }
  }
  SerialManipulator robot(std::move(joints), base, j.value("tool_length", 0.0),
                          name);
  const auto q = j.at("q_init").get<std::vector<double>>();
  if (static_cast<int>(q.size()) != robot.dof()) {
    throw ConfigurationError("robot '" + name + "' q_init has " +
                             std::to_string(q.size()) + " entries for " +
                             std::to_string(robot.dof()) + " joints");
  }
  Eigen::VectorXd q_init = Eigen::Map<const Eigen::VectorXd>(
      q.data(), static_cast<Eigen::Index>(q.size()));
  return {std::move(robot), std::move(q_init)};
}

ConstraintConfig read_constraints(const json& j, const EyeModel& eye) {
  ConstraintConfig c;
  c.rotation = RotationLimits::for_eye(eye);
  if (j.is_null()) return c;
  if (j.contains("tip_in_eye")) {
    const json& t = j.at("tip_in_eye");
    c.tip_in_eye = t.value("enabled", c.tip_in_eye);
    c.tip_margin = t.value("margin", c.tip_margin);
  }
  if (j.contains("light_guide_retina")) {
    const json& t = j.at("light_guide_retina");
    c.light_guide_retina = t.value("enabled", c.light_guide_retina);
    c.retina_clearance = t.value("clearance", c.retina_clearance);
  }
  c.safety_gain = j.value("safety_gain", c.safety_gain);
  if (j.contains("fixed_rcm")) {
    const json& t = j.at("fixed_rcm");
    c.rcm_tolerance = t.value("tolerance", c.rcm_tolerance);
    c.rcm_gain = t.value("gain", c.rcm_gain);
  }
  if (j.contains("orbital")) {
    const json& t = j.at("orbital");
    c.orbital_d_safe = t.value("d_safe", c.orbital_d_safe);
    c.orbital_gain = t.value("gain", c.orbital_gain);
  }
  if (j.contains("rotation_limits")) {
    const json& t = j.at("rotation_limits");
    c.rotation_limits = t.value("enabled", c.rotation_limits);
    c.rotation.eta = t.value("gain", c.rotation.eta);
    const double d_rot = t.value("d_rot", 0.5 * eye.radius());
    c.rotation.horizontal = Plane({0.0, 0.0, 1.0}, d_rot);
    if (t.contains("normal_robot1")) {
      c.rotation.vertical_robot1 =
          Plane(read_vec3(t.at("normal_robot1"), "normal_robot1"), 0.0);
    }
    if (t.contains("normal_robot2")) {
      c.rotation.vertical_robot2 =
          Plane(read_vec3(t.at("normal_robot2"), "normal_robot2"), 0.0);
    }
  }
  if (j.contains("joint_limits")) {
    const json& t = j.at("joint_limits");
    c.joint_limits = t.value("enabled", c.joint_limits);
    c.joint_gain = t.value("gain", c.joint_gain);
  }
  for (double g : {c.safety_gain, c.rcm_gain, c.orbital_gain, c.rotation.eta,
                   c.joint_gain}) {
    if (!(g >= 0.0)) throw ConfigurationError("VFI gains must be nonnegative");
  }
  if (!(c.orbital_d_safe > 0.0)) {
    throw ConfigurationError("orbital d_safe must be positive");
  }
  return c;
}

std::string margin_error(const char* constraint, double margin) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "initial configuration violates %s (margin %.6g)", constraint,
                margin);
  return buf;
}

}  // namespace

ControlMode parse_mode(const std::string& text) {
  if (text == "fixed" || text == "fixed_rcm") return ControlMode::fixed_rcm;
  if (text == "orbital") return ControlMode::orbital;
  throw ParseError("unknown control mode '" + text +
                   "' (expected fixed or orbital)");
}

const char* to_string(ControlMode mode) {
  return mode == ControlMode::orbital ? "orbital" : "fixed_rcm";
}

Eigen::VectorXd SceneConfig::initial_q() const {
  Eigen::VectorXd q(total_dof());
  q << robots[0].q_init, robots[1].q_init;
  return q;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

SceneConfig parse_scene(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scene parse error: ") + e.what());
  }
  try {
    const EyeModel eye(j.at("eye").at("radius").get<double>());
    const json& robots = j.at("robots");
    if (!robots.is_array() || robots.size() != 2) {
      throw ConfigurationError("scene must describe exactly two robots");
    }
    SceneConfig scene{.robots = {read_robot(robots[0], 0), read_robot(robots[1], 1)}};
    scene.eye = eye;
    scene.constraints = read_constraints(j.value("constraints", json()), eye);
    if (j.contains("controller")) {
      const json& c = j.at("controller");
      scene.control.beta = c.value("beta", scene.control.beta);
      scene.control.eta = c.value("eta", scene.control.eta);
      scene.control.lambda = c.value("lambda", scene.control.lambda);
    }
    scene.control.validate();
    const std::string lg = j.value("light_guide_target", "hold");
    if (lg == "hold") {
      scene.light_guide_target = LightGuideTarget::hold_initial;
    } else if (lg == "eye_center") {
      scene.light_guide_target = LightGuideTarget::eye_center;
    } else {
      throw ParseError("light_guide_target must be 'hold' or 'eye_center'");
    }
    scene.dt = j.value("dt", scene.dt);
    if (!(scene.dt > 0.0)) throw ConfigurationError("dt must be positive");
    scene.fundus_depth = j.value("fundus_depth", scene.fundus_depth);
    if (j.contains("settle")) {
      const json& s = j.at("settle");
      scene.settle.tolerance = s.value("tolerance", scene.settle.tolerance);
      scene.settle.max_time = s.value("max_time", scene.settle.max_time);
      scene.settle.ramp_time = s.value("ramp_time", scene.settle.ramp_time);
    }
    scene.hash = fnv1a64(json_text);
    validate_initial_state(scene);
    return scene;
  } catch (const json::exception& e) {
    throw ParseError(std::string("scene schema error: ") + e.what());
  }
}

SceneConfig load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scene file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

void validate_initial_state(const SceneConfig& scene) {
  const double r = scene.eye.radius();
  const ConstraintConfig& c = scene.constraints;
  std::array<PureQuaternion, 2> tips;
  std::array<KinematicState, 2> kin;
  for (int i = 0; i < 2; ++i) {
    const RobotConfig& rc = scene.robots[i];
    for (int k = 0; k < rc.robot.dof(); ++k) {
      if (rc.q_init[k] < rc.robot.joints()[k].lower ||
          rc.q_init[k] > rc.robot.joints()[k].upper) {
        throw ConfigurationError("initial configuration violates joint limit " +
                                 std::to_string(k) + " of robot '" +
                                 rc.robot.name() + "'");
      }
    }
    kin[i] = evaluate(rc.robot, rc.q_init);
    tips[i] = kin[i].pose.t;
    if (!(tips[i].norm() < r)) {
      throw ConfigurationError("initial configuration violates tip_in_eye: tip "
                               "of robot '" + rc.robot.name() +
                               "' is outside the eye");
    }
    if (c.tip_in_eye) {
      const double margin =
          (r - c.tip_margin) * (r - c.tip_margin) - tips[i].squared_norm();
      if (margin < 0.0) {
        throw ConfigurationError(margin_error(
            i == 0 ? "tip_in_eye (robot 1)" : "tip_in_eye (robot 2)", margin));
      }
    }
  }
  if (c.light_guide_retina) {
    const double rr = r - c.retina_clearance;
    const double margin = rr * rr - tips[1].squared_norm();
    if (margin < 0.0) {
      throw ConfigurationError(margin_error("light_guide_retina", margin));
    }
  }
  const OrbitalState s = orbital_state(kin[0], kin[1], scene.eye);
  if (c.rotation_limits) {
    rotation_limit_rows(s.instruments[0].rcm, s.instruments[1].rcm,
                        s.instruments[0].J_rcm, s.instruments[1].J_rcm,
                        c.rotation);
  }
  if (s.D_om <= 0.0) {
    throw ConfigurationError("initial RCM points coincide");
  }
}

}  // namespace eyeorbit
