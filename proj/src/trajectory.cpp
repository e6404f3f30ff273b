#include "eyeorbit/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "eyeorbit/errors.hpp"
#include "eyeorbit/scene.hpp"

namespace eyeorbit {

double smootherstep(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

namespace {

PureQuaternion lerp(const PureQuaternion& a, const PureQuaternion& b,
                    double s) {
  return a + s * (b - a);
}

}  // namespace

WaypointPath::WaypointPath(std::vector<Waypoint> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw ConfigurationError("waypoint path is empty");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].time > points_[i - 1].time)) {
      throw ConfigurationError("waypoint times must be strictly increasing");
    }
  }
}

PureQuaternion WaypointPath::at(double time) const {
  if (time <= points_.front().time) return points_.front().position;
  if (time >= points_.back().time) return points_.back().position;
  const auto it = std::upper_bound(
      points_.begin(), points_.end(), time,
      [](double t, const Waypoint& w) { return t < w.time; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  return lerp(a.position, b.position, (time - a.time) / (b.time - a.time));
}

PureQuaternion FundusCircle::at(double time) const {
  const double phase = angular_rate * time;
  const double radius = 0.5 * diameter;
  const PureQuaternion on_circle =
      center + PureQuaternion(radius * std::cos(phase),
                              radius * std::sin(phase), 0.0);
  if (ramp_time <= 0.0) return on_circle;
  return lerp(start, on_circle, smootherstep(time / ramp_time));
}

PureQuaternion PositioningMove::at(double time) const {
  if (ramp_time <= 0.0) return goal;
  return lerp(start, goal, smootherstep(time / ramp_time));
}

PureQuaternion TrajectorySpec::at(double time) const {
  return std::visit([time](const auto& v) { return v.at(time); }, v_);
}

WaypointPath load_waypoints(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trajectory file '" + path + "'");
  std::vector<Waypoint> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double t = 0, x = 0, y = 0, z = 0;
    if (!(ss >> t >> x >> y >> z)) {
      if (points.empty() && line.find_first_of("0123456789") == std::string::npos) {
        continue;  // header row
      }
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected t,x,y,z");
    }
    points.push_back({t, {x, y, z}});
  }
  return WaypointPath(std::move(points));
}

FundusCircle parse_circle(const std::string& text, const SceneConfig& scene) {
  const std::string prefix = "circle:";
  if (text.rfind(prefix, 0) != 0) {
    throw ParseError("circle trajectory must look like circle:D=14");
  }
  FundusCircle c;
  c.start = forward_kinematics(scene.robots[0].robot, scene.robots[0].q_init).t;
  c.center = {0.0, 0.0, scene.fundus_depth};
  c.angular_rate = 2.0 * std::numbers::pi / kDefaultCirclePeriod;
  bool have_diameter = false;
  std::istringstream ss(text.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("bad circle option '" + item + "'");
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError("bad number in circle option '" + item + "'");
    }
    if (key == "D") {
      c.diameter = value;
      have_diameter = true;
    } else if (key == "period") {
      if (!(value > 0.0)) throw ParseError("circle period must be positive");
      c.angular_rate = 2.0 * std::numbers::pi / value;
    } else if (key == "ramp") {
      c.ramp_time = value;
    } else {
      throw ParseError("unknown circle option '" + key + "'");
    }
  }
  if (!have_diameter) throw ParseError("circle trajectory needs D=<mm>");
  const double rim = std::hypot(0.5 * c.diameter, scene.fundus_depth);
  if (!(rim < scene.eye.radius())) {
    throw ConfigurationError("circle of diameter " + std::to_string(c.diameter) +
                             " mm leaves the eye");
  }
  return c;
}

}  // namespace eyeorbit
