#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eyeorbit/orbital.hpp"
#include "eyeorbit/qp.hpp"
#include "eyeorbit/scene.hpp"
#include "eyeorbit/trajectory.hpp"

namespace eyeorbit {

// One logged control cycle: the state at `time` and the velocity applied.
struct StepRecord {
  double time = 0.0;
  Eigen::VectorXd q;
  Eigen::VectorXd u;
  PureQuaternion tip1;
  PureQuaternion tip2;
  double D_om = 0.0;
  std::vector<double> margins;  // same order as Simulator::margin_names()
  double eye_angle = 0.0;       // rad
};

// Everything computed from one joint configuration.
struct Snapshot {
  std::array<KinematicState, 2> kinematics;
  OrbitalState orbital;
  StackedConstraints constraints;
  std::vector<double> margins;
  double eye_angle = 0.0;
};

// Discrete velocity-level control loop for both robots. q integrates with
// explicit Euler at the scene's dt.
class Simulator {
public:
  Simulator(SceneConfig scene, ControlMode mode);

  const SceneConfig& scene() const { return scene_; }
  ControlMode mode() const { return mode_; }
  const Eigen::VectorXd& q() const { return q_; }
  double time() const { return time_; }
  double D_init() const { return D_init_; }
  const std::array<PureQuaternion, 2>& initial_rcms() const {
    return initial_rcms_;
  }
  const PureQuaternion& light_guide_goal() const { return light_guide_goal_; }

  // Margin columns logged for this mode. Each margin is >= 0 when the
  // constraint holds (mm^2 for squared distances, mm for planes, rad or mm
  // for joints).
  std::vector<std::string> margin_names() const;

  // Names of the QP rows at the current state, in stacking order.
  std::vector<std::string> constraint_ledger() const;

  Snapshot snapshot() const;
  Snapshot snapshot(const Eigen::VectorXd& q) const;

  // Solves the QP at the current state for the needle target, logs the
  // state, and integrates one step.
  StepRecord step(const PureQuaternion& needle_target);

  PureQuaternion tip(int robot) const;

private:
  std::vector<ConstraintRow> constraint_rows(const Snapshot& s,
                                             const Eigen::VectorXd& q) const;

  SceneConfig scene_;
  ControlMode mode_;
  Eigen::VectorXd q_;
  double time_ = 0.0;
  double D_init_ = 0.0;
  std::array<PureQuaternion, 2> initial_rcms_;
  PureQuaternion light_guide_goal_;
};

struct SimLog {
  std::string scene_hash;
  std::string mode;
  std::vector<std::string> constraint_ledger;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> margin_names;
  int dof = 0;
  std::vector<StepRecord> records;

  // '#' metadata lines, the column header, then one row per record with
  // 12 significant digits.
  void write_csv(std::ostream& os) const;
  void write_csv(const std::string& path) const;

  // Most negative margin over all records (0 if all hold).
  double worst_margin() const;
  // Name of the most negative margin column, empty if none is negative.
  std::string worst_margin_name() const;
};

// Runs `duration` seconds (duration / dt steps) and logs every step
// including the final state.
SimLog run_trajectory(const SceneConfig& scene, const TrajectorySpec& trajectory,
                      ControlMode mode, double duration);

struct PositioningResult {
  PureQuaternion goal;
  bool converged = false;
  double error = 0.0;      // final |t1 - goal|, mm
  double time = 0.0;       // simulated seconds used
  double eye_angle = 0.0;  // rad, at the final state
  double max_eye_angle = 0.0;
  double worst_margin = 0.0;
  Eigen::VectorXd q;       // settled configuration
  std::string failure;     // diagnostic when the rollout aborted
};

// Moves the needle tip from the initial pose to `goal` along a smooth ramp
// and runs until the error drops below the settle tolerance or the time
// budget runs out. Rollout errors are captured in `failure`.
PositioningResult position(const SceneConfig& scene, ControlMode mode,
                           const PureQuaternion& goal);

}  // namespace eyeorbit
