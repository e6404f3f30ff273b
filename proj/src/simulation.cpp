#include "eyeorbit/simulation.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include "eyeorbit/errors.hpp"

namespace eyeorbit {

namespace {

// Gross-violation guards: rows are still produced for small excursions so
// the VFI can push back; anything beyond these aborts the rollout.
constexpr double kRotationAbortTolerance = 1.0;  // mm

std::array<Eigen::VectorXd, 2> split(const SceneConfig& scene,
                                     const Eigen::VectorXd& q) {
  if (q.size() != scene.total_dof()) {
    throw DimensionError("stacked q has " + std::to_string(q.size()) +
                         " entries, expected " +
                         std::to_string(scene.total_dof()));
  }
  return {q.head(scene.dof(0)), q.tail(scene.dof(1))};
}

double joint_margin(const SerialManipulator& robot, const Eigen::VectorXd& q) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < robot.dof(); ++k) {
    m = std::min({m, q[k] - robot.joints()[k].lower,
                  robot.joints()[k].upper - q[k]});
  }
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Simulator::Simulator(SceneConfig scene, ControlMode mode)
    : scene_(std::move(scene)), mode_(mode), q_(scene_.initial_q()) {
  const auto parts = split(scene_, q_);
  const OrbitalState s =
      orbital_state(evaluate(scene_.robots[0].robot, parts[0]),
                    evaluate(scene_.robots[1].robot, parts[1]), scene_.eye);
  initial_rcms_ = {s.instruments[0].rcm, s.instruments[1].rcm};
  D_init_ = s.D_om;
  light_guide_goal_ = scene_.light_guide_target == LightGuideTarget::hold_initial
                          ? s.instruments[1].tip
                          : PureQuaternion{};
}

std::vector<std::string> Simulator::margin_names() const {
  std::vector<std::string> names;
  const ConstraintConfig& c = scene_.constraints;
  if (c.tip_in_eye) {
    names.emplace_back("tip1_in_eye");
    names.emplace_back("tip2_in_eye");
  }
  if (c.light_guide_retina) names.emplace_back("lg_retina");
  if (mode_ == ControlMode::fixed_rcm) {
    names.emplace_back("rcm1");
    names.emplace_back("rcm2");
  } else {
    names.emplace_back("orbital_lower");
    names.emplace_back("orbital_upper");
    if (c.rotation_limits) {
      for (const char* n : {"rot1_r1", "rot1_r2", "rot2_r1", "rot2_r2"}) {
        names.emplace_back(n);
      }
    }
  }
  if (c.joint_limits) {
    names.emplace_back("joints_r1");
    names.emplace_back("joints_r2");
  }
  return names;
}

std::vector<ConstraintRow> Simulator::constraint_rows(
    const Snapshot& s, const Eigen::VectorXd& q) const {
  const ConstraintConfig& c = scene_.constraints;
  const int n1 = scene_.dof(0);
  const int n = scene_.total_dof();
  const double r = scene_.eye.radius();
  const auto& geo = s.orbital.instruments;
  std::vector<ConstraintRow> rows;

  auto add_safe = [&](const DistanceJacobian& dj, double limit, double eta,
                      int offset, const std::string& name) {
    ConstraintRow row =
        safe_zone_row(embed(dj.jacobian, offset, n), limit - dj.value, eta);
    row.family = ConstraintFamily::safety;
    row.name = name;
    rows.push_back(std::move(row));
  };

  if (c.tip_in_eye) {
    const double limit = (r - c.tip_margin) * (r - c.tip_margin);
    for (int i = 0; i < 2; ++i) {
      add_safe(point_point_squared(geo[i].tip, {}, geo[i].J_t), limit,
               c.safety_gain, i == 0 ? 0 : n1,
               i == 0 ? "tip1_in_eye" : "tip2_in_eye");
    }
  }
  if (c.light_guide_retina) {
    const double rr = r - c.retina_clearance;
    add_safe(point_point_squared(geo[1].tip, {}, geo[1].J_t), rr * rr,
             c.safety_gain, n1, "lg_retina");
  }
  if (mode_ == ControlMode::fixed_rcm) {
    const double limit = c.rcm_tolerance * c.rcm_tolerance;
    for (int i = 0; i < 2; ++i) {
      add_safe(line_point_squared(geo[i].tip, geo[i].direction,
                                  initial_rcms_[i], geo[i].J_t, geo[i].J_l),
               limit, c.rcm_gain, i == 0 ? 0 : n1, i == 0 ? "rcm1" : "rcm2");
    }
  } else {
    for (ConstraintRow& row :
         orbital_vfi_rows(s.orbital.D_om, D_init_, c.orbital_d_safe,
                          c.orbital_gain, s.orbital.J_om, c.orbital_d_safe)) {
      rows.push_back(std::move(row));
    }
    if (c.rotation_limits) {
      for (ConstraintRow& row : rotation_limit_rows(
               geo[0].rcm, geo[1].rcm, geo[0].J_rcm, geo[1].J_rcm, c.rotation,
               kRotationAbortTolerance)) {
        rows.push_back(std::move(row));
      }
    }
  }
  if (c.joint_limits) {
    const auto parts = split(scene_, q);
    for (int i = 0; i < 2; ++i) {
      const SerialManipulator& robot = scene_.robots[i].robot;
      for (ConstraintRow& row :
           joint_limit_rows(parts[i], robot.lower_limits(),
                            robot.upper_limits(), c.joint_gain,
                            i == 0 ? 0 : n1, n)) {
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

Snapshot Simulator::snapshot() const { return snapshot(q_); }

Snapshot Simulator::snapshot(const Eigen::VectorXd& q) const {
  const auto parts = split(scene_, q);
  Snapshot s;
  for (int i = 0; i < 2; ++i) {
    s.kinematics[i] = evaluate(scene_.robots[i].robot, parts[i]);
  }
  s.orbital = orbital_state(s.kinematics[0], s.kinematics[1], scene_.eye);
  s.constraints = assemble(constraint_rows(s, q), scene_.total_dof());

  const ConstraintConfig& c = scene_.constraints;
  const double r = scene_.eye.radius();
  const auto& geo = s.orbital.instruments;
  if (c.tip_in_eye) {
    const double limit = (r - c.tip_margin) * (r - c.tip_margin);
    s.margins.push_back(limit - geo[0].tip.squared_norm());
    s.margins.push_back(limit - geo[1].tip.squared_norm());
  }
  if (c.light_guide_retina) {
    const double rr = r - c.retina_clearance;
    s.margins.push_back(rr * rr - geo[1].tip.squared_norm());
  }
  if (mode_ == ControlMode::fixed_rcm) {
    const double limit = c.rcm_tolerance * c.rcm_tolerance;
    for (int i = 0; i < 2; ++i) {
      const PureQuaternion e = geo[i].tip - initial_rcms_[i];
      const PureQuaternion w = e - dot(e, geo[i].direction) * geo[i].direction;
      s.margins.push_back(limit - w.squared_norm());
    }
  } else {
    s.margins.push_back(s.orbital.D_om - (D_init_ - c.orbital_d_safe));
    s.margins.push_back((D_init_ + c.orbital_d_safe) - s.orbital.D_om);
    if (c.rotation_limits) {
      const RotationLimits& rl = c.rotation;
      s.margins.push_back(dot(geo[0].rcm, rl.vertical_robot1.normal()) -
                          rl.vertical_robot1.offset());
      s.margins.push_back(dot(geo[1].rcm, rl.vertical_robot2.normal()) -
                          rl.vertical_robot2.offset());
      s.margins.push_back(dot(geo[0].rcm, rl.horizontal.normal()) -
                          rl.horizontal.offset());
      s.margins.push_back(dot(geo[1].rcm, rl.horizontal.normal()) -
                          rl.horizontal.offset());
    }
  }
  if (c.joint_limits) {
    for (int i = 0; i < 2; ++i) {
      s.margins.push_back(joint_margin(scene_.robots[i].robot, parts[i]));
    }
  }
  s.eye_angle =
      eye_rotation_estimate(initial_rcms_, {geo[0].rcm, geo[1].rcm}, r).angle();
  return s;
}

std::vector<std::string> Simulator::constraint_ledger() const {
  const Snapshot s = snapshot();
  std::vector<std::string> names;
  for (const ConstraintRow& row : s.constraints.rows) names.push_back(row.name);
  return names;
}

PureQuaternion Simulator::tip(int robot) const {
  const auto parts = split(scene_, q_);
  return forward_kinematics(scene_.robots[robot].robot, parts[robot]).t;
}

StepRecord Simulator::step(const PureQuaternion& needle_target) {
  const Snapshot s = snapshot(q_);
  const auto& geo = s.orbital.instruments;
  QuadraticProgram qp =
      build_objective(geo[0].J_t, geo[0].tip - needle_target, geo[1].J_t,
                      geo[1].tip - light_guide_goal_, scene_.control);
  qp.W = s.constraints.W;
  qp.w = s.constraints.w;
  ControlSignal signal;
  try {
    signal = solve(qp);
  } catch (const InfeasibleError& e) {
    const auto row = e.row();
    const std::string name =
        row >= 0 && row < static_cast<std::ptrdiff_t>(s.constraints.rows.size())
            ? s.constraints.rows[row].name
            : "?";
    throw InfeasibleError("t = " + fmt(time_) + " s: " + e.what() + " (" +
                              name + ")",
                          row);
  }

  StepRecord rec;
  rec.time = time_;
  rec.q = q_;
  rec.u = signal.u;
  rec.tip1 = geo[0].tip;
  rec.tip2 = geo[1].tip;
  rec.D_om = s.orbital.D_om;
  rec.margins = s.margins;
  rec.eye_angle = s.eye_angle;

  q_ += scene_.dt * signal.u;
  time_ += scene_.dt;
  return rec;
}

void SimLog::write_csv(std::ostream& os) const {
  os << "# scene_hash=" << scene_hash << "\n";
  os << "# mode=" << mode << "\n";
  os << "# constraint_count=" << constraint_ledger.size() << "\n";
  os << "# constraints=";
  for (std::size_t i = 0; i < constraint_ledger.size(); ++i) {
    os << (i ? ";" : "") << constraint_ledger[i];
  }
  os << "\n";
  for (const auto& [key, value] : parameters) {
    os << "# " << key << "=" << value << "\n";
  }
  os << "t";
  for (int k = 1; k <= dof; ++k) os << ",q_" << k;
  for (int k = 1; k <= dof; ++k) os << ",u_" << k;
  os << ",t1_x,t1_y,t1_z,t2_x,t2_y,t2_z,D_OM";
  for (const std::string& m : margin_names) os << ",margin_" << m;
  os << ",eye_angle_rad\n";

  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    os << ',' << buf;
  };
  for (const StepRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%.12g", r.time);
    os << buf;
    for (Eigen::Index k = 0; k < r.q.size(); ++k) put(r.q[k]);
    for (Eigen::Index k = 0; k < r.u.size(); ++k) put(r.u[k]);
    for (const PureQuaternion* p : {&r.tip1, &r.tip2}) {
      put(p->x());
      put(p->y());
      put(p->z());
    }
    put(r.D_om);
    for (double m : r.margins) put(m);
    put(r.eye_angle);
    os << '\n';
  }
}

void SimLog::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write log '" + path + "'");
  write_csv(out);
  if (!out) throw Error("failed writing log '" + path + "'");
}

double SimLog::worst_margin() const {
  double worst = 0.0;
  for (const StepRecord& r : records) {
    for (double m : r.margins) worst = std::min(worst, m);
  }
  return worst;
}

std::string SimLog::worst_margin_name() const {
  double worst = 0.0;
  std::string name;
  for (const StepRecord& r : records) {
    for (std::size_t i = 0; i < r.margins.size(); ++i) {
      if (r.margins[i] < worst) {
        worst = r.margins[i];
        name = margin_names[i];
      }
    }
  }
  return name;
}

SimLog run_trajectory(const SceneConfig& scene, const TrajectorySpec& trajectory,
                      ControlMode mode, double duration) {
  if (!(duration >= 0.0)) throw ConfigurationError("duration must be >= 0");
  Simulator sim(scene, mode);
  SimLog log;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, scene.hash);
  log.scene_hash = hash;
  log.mode = to_string(mode);
  log.constraint_ledger = sim.constraint_ledger();
  log.margin_names = sim.margin_names();
  log.dof = scene.total_dof();
  log.parameters = {
      {"beta", fmt(scene.control.beta)},
      {"eta", fmt(scene.control.eta)},
      {"lambda", fmt(scene.control.lambda)},
      {"dt", fmt(scene.dt)},
      {"eye_radius", fmt(scene.eye.radius())},
      {"D_init", fmt(sim.D_init())},
      {"D_safe", fmt(scene.constraints.orbital_d_safe)},
      {"eta_om", fmt(scene.constraints.orbital_gain)},
      {"eta_rot", fmt(scene.constraints.rotation.eta)},
      {"eta_safety", fmt(scene.constraints.safety_gain)},
      {"eta_rcm", fmt(scene.constraints.rcm_gain)},
      {"eta_joint", fmt(scene.constraints.joint_gain)},
      {"duration", fmt(duration)},
  };
  const long steps = std::lround(duration / scene.dt);
  log.records.reserve(static_cast<std::size_t>(steps + 1));
  for (long k = 0; k <= steps; ++k) {
    log.records.push_back(sim.step(trajectory.at(sim.time())));
  }
  return log;
}

PositioningResult position(const SceneConfig& scene, ControlMode mode,
                           const PureQuaternion& goal) {
  PositioningResult result;
  result.goal = goal;
  Simulator sim(scene, mode);
  const PositioningMove move{sim.tip(0), goal, scene.settle.ramp_time};
  const long max_steps = std::lround(scene.settle.max_time / scene.dt);
  StepRecord last;
  try {
    for (long k = 0; k <= max_steps; ++k) {
      StepRecord rec = sim.step(move.at(sim.time()));
      for (double m : rec.margins) {
        result.worst_margin = std::min(result.worst_margin, m);
      }
      result.max_eye_angle = std::max(result.max_eye_angle, rec.eye_angle);
      last = std::move(rec);
      result.error = (last.tip1 - goal).norm();
      if (last.time >= scene.settle.ramp_time &&
          result.error < scene.settle.tolerance) {
        result.converged = true;
        break;
      }
    }
  } catch (const Error& e) {
    result.failure = e.what();
  }
  result.time = last.time;
  result.eye_angle = last.eye_angle;
  result.q = last.q;
  return result;
}

}  // namespace eyeorbit
