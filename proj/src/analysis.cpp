#include "eyeorbit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "eyeorbit/errors.hpp"

namespace eyeorbit {

double manipulability(const Eigen::MatrixXd& J) {
  if (J.rows() > J.cols()) {
    throw DimensionError("manipulability needs m <= n, got " +
                         std::to_string(J.rows()) + " x " +
                         std::to_string(J.cols()));
  }
  if (J.rows() == 0) return 1.0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const Eigen::VectorXd& s = svd.singularValues();
  // Numerical rank cutoff (same convention as LAPACK-based rank tests).
  const double cutoff = s[0] * static_cast<double>(std::max(J.rows(), J.cols())) *
                        std::numeric_limits<double>::epsilon();
  double product = 1.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] <= cutoff) return 0.0;
    product *= s[i];
  }
  return product;
}

Eigen::MatrixXd translation_block(const Eigen::MatrixXd& J_t) {
  if (J_t.rows() != 4) throw DimensionError("translation Jacobian must be 4 x n");
  return J_t.bottomRows(3);
}

Eigen::MatrixXd augmented_without(const Eigen::MatrixXd& J_t1,
                                  const Eigen::MatrixXd& J_t2,
                                  const Eigen::RowVectorXd& J_cr1,
                                  const Eigen::RowVectorXd& J_cr2) {
  const Eigen::Index n1 = J_t1.cols();
  const Eigen::Index n2 = J_t2.cols();
  if (J_t1.rows() != 3 || J_t2.rows() != 3 || J_cr1.size() != n1 ||
      J_cr2.size() != n2) {
    throw DimensionError("augmented_without expects 3 x n_i and 1 x n_i blocks");
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(8, n1 + n2);
  A.block(0, 0, 3, n1) = J_t1;
  A.block(3, n1, 3, n2) = J_t2;
  A.block(6, 0, 1, n1) = J_cr1;
  A.block(7, n1, 1, n2) = J_cr2;
  return A;
}

Eigen::MatrixXd augmented_with(const Eigen::MatrixXd& J_t1,
                               const Eigen::MatrixXd& J_t2,
                               const Eigen::RowVectorXd& J_om_normalized) {
  const Eigen::Index n1 = J_t1.cols();
  const Eigen::Index n2 = J_t2.cols();
  if (J_t1.rows() != 3 || J_t2.rows() != 3 ||
      J_om_normalized.size() != n1 + n2) {
    throw DimensionError("augmented_with expects 3 x n_i and 1 x (n1 + n2) blocks");
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(7, n1 + n2);
  A.block(0, 0, 3, n1) = J_t1;
  A.block(3, n1, 3, n2) = J_t2;
  A.row(6) = J_om_normalized;
  return A;
}

Eigen::RowVectorXd normalized_orbital_jacobian(const OrbitalState& s) {
  const PureQuaternion delta = s.instruments[0].rcm - s.instruments[1].rcm;
  const double h3 = delta.norm();
  if (!(h3 > 1e-9)) {
    throw DegenerateGeometryError("RCM points coincide (h3 = 0)");
  }
  const Eigen::RowVector4d dt = vec4(delta).transpose();
  const Eigen::Index n1 = s.instruments[0].J_rcm.cols();
  const Eigen::Index n2 = s.instruments[1].J_rcm.cols();
  Eigen::RowVectorXd J(n1 + n2);
  J << dt * s.instruments[0].J_rcm, -dt * s.instruments[1].J_rcm;
  return J / h3;
}

Eigen::RowVectorXd fixed_rcm_row(const InstrumentGeometry& g) {
  return line_point_squared(g.tip, g.direction, g.rcm, g.J_t, g.J_l).jacobian;
}

namespace {

OrbitalState state_at(const SceneConfig& scene, const Eigen::VectorXd& q) {
  if (q.size() != scene.total_dof()) {
    throw DimensionError("stacked q has the wrong size");
  }
  return orbital_state(evaluate(scene.robots[0].robot, q.head(scene.dof(0))),
                       evaluate(scene.robots[1].robot, q.tail(scene.dof(1))),
                       scene.eye);
}

}  // namespace

double omega_with(const SceneConfig& scene, const Eigen::VectorXd& q) {
  const OrbitalState s = state_at(scene, q);
  return manipulability(
      augmented_with(translation_block(s.instruments[0].J_t),
                     translation_block(s.instruments[1].J_t),
                     normalized_orbital_jacobian(s)));
}

double omega_without(const SceneConfig& scene, const Eigen::VectorXd& q) {
  const OrbitalState s = state_at(scene, q);
  return manipulability(augmented_without(
      translation_block(s.instruments[0].J_t),
      translation_block(s.instruments[1].J_t), fixed_rcm_row(s.instruments[0]),
      fixed_rcm_row(s.instruments[1])));
}

std::vector<PureQuaternion> make_fundus_targets(int count, double diameter,
                                                const EyeModel& eye,
                                                double depth) {
  if (count < 1) throw ConfigurationError("target count must be >= 1");
  if (!(diameter >= 0.0)) throw ConfigurationError("diameter must be >= 0");
  const double R = 0.5 * diameter;
  if (!(std::hypot(R, depth) < eye.radius())) {
    throw ConfigurationError("fundus disc of diameter " + std::to_string(diameter) +
                             " mm at depth " + std::to_string(depth) +
                             " mm leaves the eye");
  }
  std::vector<PureQuaternion> targets;
  targets.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    targets.emplace_back(0.0, 0.0, depth);
    return targets;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double rho = R * std::sqrt(static_cast<double>(k) / (count - 1));
    const double phi = golden * k;
    targets.emplace_back(rho * std::cos(phi), rho * std::sin(phi), depth);
  }
  return targets;
}

namespace {

GridPoint run_point(const SceneConfig& scene, const PureQuaternion& target,
                    int index) {
  GridPoint p;
  p.index = index;
  p.target = target;
  p.with = position(scene, ControlMode::orbital, target);
  p.without = position(scene, ControlMode::fixed_rcm, target);
  try {
    if (p.with.q.size() == scene.total_dof()) {
      p.omega_with = omega_with(scene, p.with.q);
    }
  } catch (const Error& e) {
    p.with.failure += std::string(p.with.failure.empty() ? "" : "; ") + e.what();
  }
  try {
    if (p.without.q.size() == scene.total_dof()) {
      p.omega_without = omega_without(scene, p.without.q);
    }
  } catch (const Error& e) {
    p.without.failure +=
        std::string(p.without.failure.empty() ? "" : "; ") + e.what();
  }
  return p;
}

PureQuaternion initial_rcm_midpoint(const SceneConfig& scene) {
  const OrbitalState s = state_at(scene, scene.initial_q());
  return 0.5 * (s.instruments[0].rcm + s.instruments[1].rcm);
}

}  // namespace

ManipulabilityReport grid_study(const SceneConfig& scene,
                                const std::vector<PureQuaternion>& targets) {
  ManipulabilityReport report;
  report.rcm_midpoint = initial_rcm_midpoint(scene);
  report.points.resize(targets.size());
  const int count = static_cast<int>(targets.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < count; ++i) {
    report.points[i] = run_point(scene, targets[i], i);
  }
  return report;
}

ManipulabilityReport grid_study_serial(
    const SceneConfig& scene, const std::vector<PureQuaternion>& targets) {
  ManipulabilityReport report;
  report.rcm_midpoint = initial_rcm_midpoint(scene);
  report.points.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    report.points.push_back(run_point(scene, targets[i], static_cast<int>(i)));
  }
  return report;
}

ManipulabilitySummary ManipulabilityReport::summary() const {
  ManipulabilitySummary s;
  s.points = static_cast<int>(points.size());
  double inf = std::numeric_limits<double>::infinity();
  s.min_with = s.min_without = inf;
  s.max_with = s.max_without = -inf;
  std::vector<double> dist;
  std::vector<double> omega;
  for (const GridPoint& p : points) {
    if (p.with.converged) {
      ++s.converged_with;
      s.min_with = std::min(s.min_with, p.omega_with);
      s.max_with = std::max(s.max_with, p.omega_with);
      s.mean_with += p.omega_with;
      dist.push_back((p.target - rcm_midpoint).norm());
      omega.push_back(p.omega_with);
    }
    if (p.without.converged) {
      ++s.converged_without;
      s.min_without = std::min(s.min_without, p.omega_without);
      s.max_without = std::max(s.max_without, p.omega_without);
      s.mean_without += p.omega_without;
    }
    if (p.with.converged && p.without.converged) {
      ++s.both_converged;
      if (p.omega_with > p.omega_without) ++s.with_greater;
    }
  }
  if (s.converged_with > 0) {
    s.mean_with /= s.converged_with;
  } else {
    s.min_with = s.max_with = 0.0;
  }
  if (s.converged_without > 0) {
    s.mean_without /= s.converged_without;
  } else {
    s.min_without = s.max_without = 0.0;
  }
  if (dist.size() >= 2) {
    const double n = static_cast<double>(dist.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      mx += dist[i];
      my += omega[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      sxy += (dist[i] - mx) * (omega[i] - my);
      sxx += (dist[i] - mx) * (dist[i] - mx);
      syy += (omega[i] - my) * (omega[i] - my);
    }
    if (sxx > 0.0 && syy > 0.0) s.distance_correlation = sxy / std::sqrt(sxx * syy);
  }
  return s;
}

namespace {

std::string g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_text(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

void write_report_csv(const ManipulabilityReport& report, std::ostream& os) {
  os << "index,target_x,target_y,target_z,distance_from_rcm_midpoint,"
        "converged_with,error_with,time_with,eye_angle_with_rad,"
        "worst_margin_with,omega_with,converged_without,error_without,"
        "time_without,eye_angle_without_rad,worst_margin_without,"
        "omega_without,failure\n";
  for (const GridPoint& p : report.points) {
    std::string failure;
    if (!p.with.failure.empty()) failure += "orbital: " + p.with.failure;
    if (!p.without.failure.empty()) {
      failure += std::string(failure.empty() ? "" : " | ") +
                 "fixed_rcm: " + p.without.failure;
    }
    os << p.index << ',' << g12(p.target.x()) << ',' << g12(p.target.y())
       << ',' << g12(p.target.z()) << ','
       << g12((p.target - report.rcm_midpoint).norm()) << ','
       << (p.with.converged ? 1 : 0) << ',' << g12(p.with.error) << ','
       << g12(p.with.time) << ',' << g12(p.with.eye_angle) << ','
       << g12(p.with.worst_margin) << ',' << g12(p.omega_with) << ','
       << (p.without.converged ? 1 : 0) << ',' << g12(p.without.error) << ','
       << g12(p.without.time) << ',' << g12(p.without.eye_angle) << ','
       << g12(p.without.worst_margin) << ',' << g12(p.omega_without) << ','
       << csv_text(failure) << '\n';
  }
}

std::string report_summary_text(const ManipulabilityReport& report) {
  const ManipulabilitySummary s = report.summary();
  std::ostringstream os;
  os << "points " << s.points << "\n"
     << "converged_with " << s.converged_with << "\n"
     << "converged_without " << s.converged_without << "\n"
     << "omega_with min " << g12(s.min_with) << " max " << g12(s.max_with)
     << " mean " << g12(s.mean_with) << "\n"
     << "omega_without min " << g12(s.min_without) << " max "
     << g12(s.max_without) << " mean " << g12(s.mean_without) << "\n"
     << "omega_with > omega_without " << s.with_greater << " of "
     << s.both_converged << "\n"
     << "corr(distance from RCM midpoint, omega_with) "
     << g12(s.distance_correlation) << "\n";
  return os.str();
}

void emit_report(const ManipulabilityReport& report, const std::string& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write report '" + path + "'");
    write_report_csv(report, out);
    if (!out) throw Error("failed writing report '" + path + "'");
  }
  const std::string summary_path = path + ".summary.txt";
  std::ofstream out(summary_path, std::ios::binary);
  if (!out) throw Error("cannot write summary '" + summary_path + "'");
  out << report_summary_text(report);
}

// ---------------------------------------------------------------------------

double JacobianCheckResult::max_error() const {
  double m = 0.0;
  for (const JacobianCheckEntry& e : entries) m = std::max(m, e.max_error);
  return m;
}

namespace {

struct Quantity {
  std::string name;
  Eigen::VectorXd value;
  Eigen::MatrixXd jacobian;  // rows = value.size(), cols = n1 + n2
};

Eigen::MatrixXd embed_block(const Eigen::MatrixXd& J, Eigen::Index offset,
                            Eigen::Index total) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(J.rows(), total);
  out.middleCols(offset, J.cols()) = J;
  return out;
}

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

std::vector<Quantity> quantities(const SceneConfig& scene,
                                 const Eigen::VectorXd& q,
                                 const std::array<PureQuaternion, 2>& anchors) {
  const OrbitalState s = state_at(scene, q);
  const Eigen::Index n = scene.total_dof();
  const RotationLimits& rl = scene.constraints.rotation;
  std::vector<Quantity> out;
  for (int i = 0; i < 2; ++i) {
    const InstrumentGeometry& g = s.instruments[i];
    const Eigen::Index off = i == 0 ? 0 : scene.dof(0);
    const std::string k = std::to_string(i + 1);
    const KinematicState kin =
        evaluate(scene.robots[i].robot,
                 i == 0 ? Eigen::VectorXd(q.head(scene.dof(0)))
                        : Eigen::VectorXd(q.tail(scene.dof(1))));
    auto add = [&](const std::string& name, Eigen::VectorXd v,
                   const Eigen::MatrixXd& J) {
      out.push_back({name + k, std::move(v), embed_block(J, off, n)});
    };
    add("translation", vec4(g.tip), g.J_t);
    add("rotation", vec4(kin.pose.r), g.J_r);
    add("line", vec4(g.direction), g.J_l);
    add("h2_", scalar(dot(g.tip, g.direction)), g.depth_jacobians.J_h2);
    add("h1_", scalar(g.h1), g.depth_jacobians.J_h1);
    add("depth", scalar(g.depth), g.depth_jacobians.J_d);
    add("rcm", vec4(g.rcm), g.J_rcm);
    const DistanceJacobian pp = point_point_squared(g.tip, {}, g.J_t);
    add("tip_center_sq", scalar(pp.value), pp.jacobian);
    const DistanceJacobian lp =
        line_point_squared(g.tip, g.direction, anchors[i], g.J_t, g.J_l);
    add("line_point_sq", scalar(lp.value), lp.jacobian);
    const DistanceJacobian pv = point_plane_signed(
        g.rcm, i == 0 ? rl.vertical_robot1 : rl.vertical_robot2, g.J_rcm);
    add("plane_vertical", scalar(pv.value), pv.jacobian);
    const DistanceJacobian ph = point_plane_signed(g.rcm, rl.horizontal, g.J_rcm);
    add("plane_horizontal", scalar(ph.value), ph.jacobian);
  }
  out.push_back({"orbital_distance_sq", scalar(s.D_om), s.J_om});
  out.push_back({"orbital_distance",
                 scalar((s.instruments[0].rcm - s.instruments[1].rcm).norm()),
                 normalized_orbital_jacobian(s)});
  return out;
}

bool well_conditioned(const SceneConfig& scene, const Eigen::VectorXd& q) {
  try {
    const OrbitalState s = state_at(scene, q);
    const double r = scene.eye.radius();
    for (const InstrumentGeometry& g : s.instruments) {
      if (g.h1 < 0.1 || g.tip.norm() > r - 0.1) return false;
    }
    return std::sqrt(s.D_om) > 0.1;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

JacobianCheckResult check_jacobians(const SceneConfig& scene, int samples,
                                    std::uint64_t seed, double spread) {
  if (samples < 1) throw ConfigurationError("need at least one sample");
  constexpr double h = 1e-6;
  constexpr int kMaxDraws = 1000;
  const Eigen::VectorXd q0 = scene.initial_q();
  Eigen::VectorXd lower(q0.size()), upper(q0.size());
  lower << scene.robots[0].robot.lower_limits(), scene.robots[1].robot.lower_limits();
  upper << scene.robots[0].robot.upper_limits(), scene.robots[1].robot.upper_limits();
  const OrbitalState s0 = state_at(scene, q0);
  const std::array<PureQuaternion, 2> anchors{s0.instruments[0].rcm,
                                              s0.instruments[1].rcm};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  JacobianCheckResult result;
  int draws = 0;
  while (result.samples < samples) {
    if (++draws > kMaxDraws * samples) {
      throw DegenerateGeometryError("could not draw enough non-degenerate samples");
    }
    Eigen::VectorXd q(q0.size());
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      q[k] = std::clamp(q0[k] + spread * unit(rng), lower[k], upper[k]);
    }
    if (!well_conditioned(scene, q)) {
      ++result.rejected;
      continue;
    }
    const std::vector<Quantity> base = quantities(scene, q, anchors);
    if (result.entries.empty()) {
      for (const Quantity& qt : base) result.entries.push_back({qt.name, 0.0});
    }
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      Eigen::VectorXd qp = q, qm = q;
      qp[k] += h;
      qm[k] -= h;
      const std::vector<Quantity> plus = quantities(scene, qp, anchors);
      const std::vector<Quantity> minus = quantities(scene, qm, anchors);
      for (std::size_t b = 0; b < base.size(); ++b) {
        const Eigen::VectorXd fd = (plus[b].value - minus[b].value) / (2.0 * h);
        for (Eigen::Index row = 0; row < fd.size(); ++row) {
          const double err = std::abs(base[b].jacobian(row, k) - fd[row]) /
                             std::max(1.0, std::abs(fd[row]));
          result.entries[b].max_error = std::max(result.entries[b].max_error, err);
        }
      }
    }
    ++result.samples;
  }
  return result;
}

}  // namespace eyeorbit
