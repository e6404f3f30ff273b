#pragma once

#include <string>
#include <variant>
#include <vector>

#include "eyeorbit/quaternion.hpp"

namespace eyeorbit {

struct SceneConfig;

// Smooth 0 -> 1 blend with zero velocity and acceleration at both ends.
double smootherstep(double s);

struct Waypoint {
  double time = 0.0;  // s
  PureQuaternion position;
};

// Piecewise-linear interpolation between timestamped waypoints; holds the
// first/last waypoint outside the time range.
class WaypointPath {
public:
  explicit WaypointPath(std::vector<Waypoint> points);
  PureQuaternion at(double time) const;
  const std::vector<Waypoint>& points() const { return points_; }

private:
  std::vector<Waypoint> points_;
};

// Circle of `diameter` on the fundus plane around `center`, traversed at
// `angular_rate`. During the first `ramp_time` seconds the target blends
// from `start` onto the circle.
struct FundusCircle {
  PureQuaternion start;
  PureQuaternion center;
  double diameter = 14.0;       // mm
  double angular_rate = 0.0;    // rad/s
  double ramp_time = 5.0;       // s

  PureQuaternion at(double time) const;
};

// Smooth point-to-point move of duration ramp_time, then hold at goal.
struct PositioningMove {
  PureQuaternion start;
  PureQuaternion goal;
  double ramp_time = 4.0;

  PureQuaternion at(double time) const;
};

class TrajectorySpec {
public:
  using Variant = std::variant<WaypointPath, FundusCircle, PositioningMove>;
  explicit TrajectorySpec(Variant v) : v_(std::move(v)) {}

  PureQuaternion at(double time) const;
  const Variant& variant() const { return v_; }

private:
  Variant v_;
};

// Reads "t,x,y,z" rows (header optional, '#' comments allowed).
WaypointPath load_waypoints(const std::string& path);

// Parses "circle:D=14" or "circle:D=14,period=60" into a circle starting at
// the scene's initial needle tip and centered on the fundus plane.
FundusCircle parse_circle(const std::string& text, const SceneConfig& scene);

// Default full-turn period for fundus circles, s.
inline constexpr double kDefaultCirclePeriod = 60.0;

}  // namespace eyeorbit
