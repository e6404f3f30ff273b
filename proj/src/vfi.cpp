#include "eyeorbit/vfi.hpp"

#include <cmath>
#include <string>

#include "eyeorbit/errors.hpp"

namespace eyeorbit {

namespace {

constexpr double kUnitTolerance = 1e-9;

void require_unit(const PureQuaternion& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > kUnitTolerance) {
    throw DegenerateGeometryError(std::string(what) + " must be a unit vector");
  }
}

void require_rows(const Eigen::MatrixXd& J, const char* what) {
  if (J.rows() != 4) {
    throw DimensionError(std::string(what) + " must have 4 rows");
  }
}

}  // namespace

Plane::Plane(const PureQuaternion& normal, double offset)
    : normal_(normal), offset_(offset) {
  require_unit(normal, "plane normal");
}

ConstraintRow safe_zone_row(const Eigen::RowVectorXd& distance_jacobian,
                            double d_tilde, double eta, double zeta_safe) {
  return {distance_jacobian, eta * d_tilde - zeta_safe, {}, {}};
}

ConstraintRow restricted_zone_row(const Eigen::RowVectorXd& distance_jacobian,
                                  double d_tilde, double eta,
                                  double zeta_safe) {
  return {-distance_jacobian, eta * d_tilde + zeta_safe, {}, {}};
}

DistanceJacobian point_point_squared(const PureQuaternion& t,
                                     const PureQuaternion& p,
                                     const Eigen::MatrixXd& J_t) {
  require_rows(J_t, "J_t");
  const PureQuaternion e = t - p;
  return {e.squared_norm(), 2.0 * vec4(e).transpose() * J_t};
}

DistanceJacobian point_plane_signed(const PureQuaternion& t, const Plane& plane,
                                    const Eigen::MatrixXd& J_t) {
  require_rows(J_t, "J_t");
  return {dot(t, plane.normal()) - plane.offset(),
          vec4(plane.normal()).transpose() * J_t};
}

DistanceJacobian line_point_squared(const PureQuaternion& t,
                                    const PureQuaternion& l,
                                    const PureQuaternion& p,
                                    const Eigen::MatrixXd& J_t,
                                    const Eigen::MatrixXd& J_l) {
  require_unit(l, "line direction");
  require_rows(J_t, "J_t");
  require_rows(J_l, "J_l");
  if (J_t.cols() != J_l.cols()) {
    throw DimensionError("J_t and J_l column counts differ");
  }
  // w = e - <e,l> l is orthogonal to l, so dD = 2 w^T (de - <e,l> dl).
  const PureQuaternion e = t - p;
  const double el = dot(e, l);
  const PureQuaternion w = e - el * l;
  Eigen::RowVectorXd J = 2.0 * vec4(w).transpose() * (J_t - el * J_l);
  return {w.squared_norm(), std::move(J)};
}

Eigen::RowVectorXd embed(const Eigen::RowVectorXd& local, int offset,
                         int total) {
  if (offset < 0 || offset + local.size() > total) {
    throw DimensionError("row of width " + std::to_string(local.size()) +
                         " does not fit at column " + std::to_string(offset) +
                         " of " + std::to_string(total));
  }
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(total);
  row.segment(offset, local.size()) = local;
  return row;
}

std::vector<ConstraintRow> joint_limit_rows(const Eigen::VectorXd& q,
                                            const Eigen::VectorXd& lower,
                                            const Eigen::VectorXd& upper,
                                            double eta, int offset,
                                            int total) {
  const int n = static_cast<int>(q.size());
  if (lower.size() != n || upper.size() != n) {
    throw DimensionError("joint limit vectors do not match q");
  }
  if (total < 0) total = offset + n;
  std::vector<ConstraintRow> rows;
  rows.reserve(2 * n);
  for (int k = 0; k < n; ++k) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e[k] = 1.0;
    rows.push_back({embed(e, offset, total), eta * (upper[k] - q[k]),
                    ConstraintFamily::joint_limit,
                    "joint_upper_" + std::to_string(offset + k)});
    rows.push_back({embed(-e, offset, total), eta * (q[k] - lower[k]),
                    ConstraintFamily::joint_limit,
                    "joint_lower_" + std::to_string(offset + k)});
  }
  return rows;
}

}  // namespace eyeorbit
