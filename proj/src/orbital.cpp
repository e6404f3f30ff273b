#include "eyeorbit/orbital.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "eyeorbit/errors.hpp"

namespace eyeorbit {

namespace {

constexpr Quaternion kK{0.0, 0.0, 0.0, 1.0};

std::string fmt_mm(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

EyeModel::EyeModel(double radius) : radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigurationError("eye radius must be positive");
  }
}

PureQuaternion shaft_direction(const UnitQuaternion& r) {
  return rotate_vector(r, kK.imag());
}

InsertionDepth insertion_depth(const PureQuaternion& t, const PureQuaternion& l,
                               double eye_radius) {
  const double tt = t.squared_norm();
  if (!(tt < eye_radius * eye_radius)) {
    throw DegenerateGeometryError("instrument tip at distance " +
                                  fmt_mm(std::sqrt(tt)) +
                                  " mm is not inside the eye");
  }
  const double tl = dot(t, l);
  const double h1 = std::sqrt(tl * tl - tt + eye_radius * eye_radius);
  if (!(h1 > kDepthEpsilon)) {
    throw DegenerateGeometryError("instrument tip is on the eye surface");
  }
  return {tl + h1, h1};
}

PureQuaternion rcm_translation(const PureQuaternion& t, double d,
                               const PureQuaternion& l) {
  return t - d * l;
}

double orbital_squared_distance(const PureQuaternion& rcm1,
                                const PureQuaternion& rcm2) {
  return (rcm1 - rcm2).squared_norm();
}

Eigen::MatrixXd line_jacobian(const UnitQuaternion& r,
                              const Eigen::MatrixXd& J_r) {
  if (J_r.rows() != 4) throw DimensionError("J_r must have 4 rows");
  const Quaternion& q = r.quaternion();
  const Eigen::Matrix4d M = hamilton_minus(kK * q.conjugate()) +
                            hamilton_plus(q * kK) * conjugation_matrix();
  return M * J_r;
}

DepthJacobians depth_jacobian(const PureQuaternion& t, const PureQuaternion& l,
                              double h1, const Eigen::MatrixXd& J_t,
                              const Eigen::MatrixXd& J_l) {
  if (!(h1 > kDepthEpsilon)) {
    throw DegenerateGeometryError("h1 = " + fmt_mm(h1) +
                                  " mm: tip is at the eye surface");
  }
  if (J_t.rows() != 4 || J_l.rows() != 4 || J_t.cols() != J_l.cols()) {
    throw DimensionError("J_t and J_l must both be 4 x n");
  }
  DepthJacobians out;
  const Eigen::RowVectorXd tJt = vec4(t).transpose() * J_t;
  out.J_h2 = vec4(l).transpose() * J_t + vec4(t).transpose() * J_l;
  out.J_h1 = (dot(t, l) * out.J_h2 - tJt) / h1;
  out.J_d = out.J_h2 + out.J_h1;
  return out;
}

Eigen::MatrixXd rcm_translation_jacobian(const Eigen::MatrixXd& J_t,
                                         const PureQuaternion& l,
                                         const Eigen::RowVectorXd& J_d,
                                         double d, const Eigen::MatrixXd& J_l) {
  if (J_t.rows() != 4 || J_l.rows() != 4 || J_t.cols() != J_l.cols() ||
      J_d.size() != J_t.cols()) {
    throw DimensionError("inconsistent Jacobian sizes for the RCM Jacobian");
  }
  return J_t - vec4(l) * J_d - d * J_l;
}

Eigen::RowVectorXd orbital_distance_jacobian(const PureQuaternion& rcm1,
                                             const PureQuaternion& rcm2,
                                             const Eigen::MatrixXd& J_rcm1,
                                             const Eigen::MatrixXd& J_rcm2) {
  if (J_rcm1.rows() != 4 || J_rcm2.rows() != 4) {
    throw DimensionError("RCM Jacobians must have 4 rows");
  }
  const Eigen::RowVector4d delta = 2.0 * vec4(rcm1 - rcm2).transpose();
  Eigen::RowVectorXd J(J_rcm1.cols() + J_rcm2.cols());
  J << delta * J_rcm1, -delta * J_rcm2;
  return J;
}

std::array<ConstraintRow, 2> orbital_vfi_rows(double D_om, double D_init,
                                              double D_safe, double eta,
                                              const Eigen::RowVectorXd& J_om,
                                              double tolerance) {
  const double lower_margin = D_om - (D_init - D_safe);
  const double upper_margin = (D_init + D_safe) - D_om;
  if (lower_margin < -tolerance || upper_margin < -tolerance) {
    throw ConfigurationError("orbital distance D_OM = " + fmt_mm(D_om) +
                             " mm^2 is outside D_init +/- D_safe = " +
                             fmt_mm(D_init) + " +/- " + fmt_mm(D_safe));
  }
  ConstraintRow lower = restricted_zone_row(J_om, lower_margin, eta);
  lower.family = ConstraintFamily::orbital;
  lower.name = "orbital_lower";
  ConstraintRow upper = safe_zone_row(J_om, upper_margin, eta);
  upper.family = ConstraintFamily::orbital;
  upper.name = "orbital_upper";
  return {std::move(lower), std::move(upper)};
}

RotationLimits RotationLimits::for_eye(const EyeModel& eye, double eta) {
  RotationLimits limits;
  limits.horizontal = Plane({0.0, 0.0, 1.0}, 0.5 * eye.radius());
  limits.eta = eta;
  return limits;
}

std::array<ConstraintRow, 4> rotation_limit_rows(
    const PureQuaternion& rcm1, const PureQuaternion& rcm2,
    const Eigen::MatrixXd& J_rcm1, const Eigen::MatrixXd& J_rcm2,
    const RotationLimits& limits, double tolerance) {
  const int n1 = static_cast<int>(J_rcm1.cols());
  const int n2 = static_cast<int>(J_rcm2.cols());
  const int n = n1 + n2;
  auto make = [&](const PureQuaternion& rcm, const Eigen::MatrixXd& J,
                  const Plane& plane, int offset, const char* name) {
    const DistanceJacobian dj = point_plane_signed(rcm, plane, J);
    if (dj.value < -tolerance) {
      throw ConfigurationError(std::string("rotation limit ") + name +
                               " violated: signed distance " +
                               fmt_mm(dj.value) + " mm");
    }
    ConstraintRow row =
        restricted_zone_row(embed(dj.jacobian, offset, n), dj.value, limits.eta);
    row.family = ConstraintFamily::rotation_limit;
    row.name = name;
    return row;
  };
  return {make(rcm1, J_rcm1, limits.vertical_robot1, 0, "rot1_r1"),
          make(rcm2, J_rcm2, limits.vertical_robot2, n1, "rot1_r2"),
          make(rcm1, J_rcm1, limits.horizontal, 0, "rot2_r1"),
          make(rcm2, J_rcm2, limits.horizontal, n1, "rot2_r2")};
}

UnitQuaternion eye_rotation_estimate(
    const std::array<PureQuaternion, 2>& initial_rcms,
    const std::array<PureQuaternion, 2>& current_rcms, double eye_radius) {
  std::array<Eigen::Vector3d, 2> a;
  std::array<Eigen::Vector3d, 2> b;
  for (int i = 0; i < 2; ++i) {
    for (const PureQuaternion* p : {&initial_rcms[i], &current_rcms[i]}) {
      if (std::abs(p->norm() - eye_radius) > 1e-6 * eye_radius) {
        throw DegenerateGeometryError("RCM point is not on the eye sphere");
      }
    }
    a[i] = initial_rcms[i].vec3().normalized();
    b[i] = current_rcms[i].vec3().normalized();
  }
  if (a[0].cross(a[1]).norm() < 1e-9) {
    throw DegenerateGeometryError(
        "initial RCM directions are collinear; eye rotation is ill-posed");
  }
  // Kabsch / SVD solution of Wahba's problem with equal weights.
  const Eigen::Matrix3d B = b[0] * a[0].transpose() + b[1] * a[1].transpose();
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      B, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d correction = Eigen::Matrix3d::Identity();
  correction(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant();
  const Eigen::Matrix3d R =
      svd.matrixU() * correction * svd.matrixV().transpose();
  const Eigen::Quaterniond q(R);
  return UnitQuaternion::normalize({q.w(), q.x(), q.y(), q.z()});
}

InstrumentGeometry instrument_geometry(const KinematicState& kin,
                                       const EyeModel& eye) {
  InstrumentGeometry g;
  g.tip = kin.pose.t;
  g.direction = shaft_direction(kin.pose.r);
  const InsertionDepth depth = insertion_depth(g.tip, g.direction, eye.radius());
  g.depth = depth.d;
  g.h1 = depth.h1;
  g.rcm = rcm_translation(g.tip, g.depth, g.direction);
  g.J_t = kin.translation_jacobian;
  g.J_r = kin.rotation_jacobian;
  g.J_l = line_jacobian(kin.pose.r, g.J_r);
  g.depth_jacobians = depth_jacobian(g.tip, g.direction, g.h1, g.J_t, g.J_l);
  g.J_rcm = rcm_translation_jacobian(g.J_t, g.direction,
                                     g.depth_jacobians.J_d, g.depth, g.J_l);
  return g;
}

OrbitalState orbital_state(const KinematicState& robot1,
                           const KinematicState& robot2, const EyeModel& eye) {
  OrbitalState s{{instrument_geometry(robot1, eye),
                  instrument_geometry(robot2, eye)},
                 0.0,
                 {}};
  s.D_om = orbital_squared_distance(s.instruments[0].rcm, s.instruments[1].rcm);
  s.J_om = orbital_distance_jacobian(s.instruments[0].rcm, s.instruments[1].rcm,
                                     s.instruments[0].J_rcm,
                                     s.instruments[1].J_rcm);
  return s;
}

}  // namespace eyeorbit
