#include <sstream>
#include <string>

#include <doctest.h>

#include "eyeorbit/simulation.hpp"
#include "support/fixtures.hpp"

using namespace eyeorbit;

TEST_CASE("holding the current tip barely moves") {
  Simulator sim(fixture::shipped_scene(), ControlMode::orbital);
  const Eigen::VectorXd q0 = sim.q();
  const StepRecord r = sim.step(sim.tip(0));
  CHECK(r.u.norm() <= 1e-6);
  CHECK((sim.q() - q0).norm() <= 1e-8);
}

TEST_CASE("a small move reduces the tip error every step") {
  for (ControlMode mode : {ControlMode::orbital, ControlMode::fixed_rcm}) {
    Simulator sim(fixture::shipped_scene(), mode);
    const PureQuaternion goal = sim.tip(0) + PureQuaternion(0, 0, -1);
    double prev = (sim.tip(0) - goal).norm();
    for (int k = 0; k < 10; ++k) {
      sim.step(goal);
      const double e = (sim.tip(0) - goal).norm();
      CHECK(e < prev);
      prev = e;
    }
  }
}

TEST_CASE("margin layout") {
  const Simulator orbital(fixture::shipped_scene(), ControlMode::orbital);
  const Simulator fixed(fixture::shipped_scene(), ControlMode::fixed_rcm);
  CHECK(orbital.snapshot().margins.size() == orbital.margin_names().size());
  CHECK(fixed.snapshot().margins.size() == fixed.margin_names().size());
  for (double m : orbital.snapshot().margins) CHECK(m >= 0.0);
  CHECK(orbital.snapshot().eye_angle <= 1e-9);
  CHECK(orbital.constraint_ledger().size() ==
        static_cast<std::size_t>(orbital.snapshot().constraints.W.rows()));
}

TEST_CASE("zero-length trajectory holds") {
  const SceneConfig& scene = fixture::shipped_scene();
  const Simulator probe(scene, ControlMode::orbital);
  const TrajectorySpec hold(WaypointPath({{0.0, probe.tip(0)}}));
  for (ControlMode mode : {ControlMode::orbital, ControlMode::fixed_rcm}) {
    const SimLog log = run_trajectory(scene, hold, mode, 1.0);
    CHECK(log.records.size() == 251);
    CHECK(log.worst_margin() >= -1e-6);
    CHECK(log.worst_margin_name().empty());
  }
}

TEST_CASE("fundus circle in both modes") {
  const SceneConfig& scene = fixture::shipped_scene();
  const TrajectorySpec circle(parse_circle("circle:D=14", scene));
  const SimLog orbital = run_trajectory(scene, circle, ControlMode::orbital, 60.0);
  double max_orbital = 0.0;
  for (const StepRecord& r : orbital.records) max_orbital = std::max(max_orbital, r.eye_angle);
  CHECK(max_orbital > 0.0);
  CHECK(orbital.worst_margin() >= -1e-6);

  const SimLog fixed = run_trajectory(scene, circle, ControlMode::fixed_rcm, 60.0);
  double max_fixed = 0.0;
  for (const StepRecord& r : fixed.records) max_fixed = std::max(max_fixed, r.eye_angle);
  CHECK(max_fixed <= 1e-3);
  CHECK(fixed.worst_margin() >= -1e-6);
}

TEST_CASE("log format") {
  const SceneConfig& scene = fixture::shipped_scene();
  const Simulator probe(scene, ControlMode::orbital);
  const SimLog log = run_trajectory(
      scene, TrajectorySpec(WaypointPath({{0.0, probe.tip(0)}})), ControlMode::orbital, 0.008);
  std::ostringstream a, b;
  log.write_csv(a);
  log.write_csv(b);
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  std::string line, header;
  int comments = 0, rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      ++comments;
    } else if (header.empty()) {
      header = line;
    } else {
      ++rows;
    }
  }
  CHECK(comments >= 4);
  CHECK(rows == 3);
  CHECK(header.rfind("t,q_1,", 0) == 0);
  CHECK(header.find("D_OM") != std::string::npos);
  CHECK(header.find("margin_orbital_lower") != std::string::npos);
  CHECK(a.str().find("# mode=orbital") != std::string::npos);
}
