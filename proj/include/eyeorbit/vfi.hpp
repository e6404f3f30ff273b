#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eyeorbit/quaternion.hpp"

namespace eyeorbit {

// Assembly order of the constraint families in the QP.
enum class ConstraintFamily { safety, orbital, rotation_limit, joint_limit };

// One row of W qdot <= w over the stacked joint vector of both robots.
struct ConstraintRow {
  Eigen::RowVectorXd coefficients;
  double bound = 0.0;
  ConstraintFamily family = ConstraintFamily::safety;
  std::string name;
};

// A scalar distance (or squared distance) and its Jacobian.
struct DistanceJacobian {
  double value = 0.0;
  Eigen::RowVectorXd jacobian;
};

class Plane {
public:
  // `normal` must be unit to 1e-9; `offset` is the signed distance of the
  // plane from the origin along the normal.
  Plane(const PureQuaternion& normal, double offset);

  const PureQuaternion& normal() const { return normal_; }
  double offset() const { return offset_; }

private:
  PureQuaternion normal_;
  double offset_;
};

// Safe zone (stay inside): J_d qdot <= eta * d_tilde - zeta_safe,
// with d_tilde = d_safe - d.
ConstraintRow safe_zone_row(const Eigen::RowVectorXd& distance_jacobian,
                            double d_tilde, double eta, double zeta_safe = 0.0);

// Restricted zone (stay outside): -J_d qdot <= eta * d_tilde + zeta_safe,
// with d_tilde = d - d_safe.
ConstraintRow restricted_zone_row(const Eigen::RowVectorXd& distance_jacobian,
                                  double d_tilde, double eta,
                                  double zeta_safe = 0.0);

// D = |t - p|^2 for a point t moving with J_t and a static point p.
DistanceJacobian point_point_squared(const PureQuaternion& t,
                                     const PureQuaternion& p,
                                     const Eigen::MatrixXd& J_t);

// d = <t, n> - offset.
DistanceJacobian point_plane_signed(const PureQuaternion& t, const Plane& plane,
                                    const Eigen::MatrixXd& J_t);

// Squared distance between the static point p and the line through t with
// unit direction l (both moving, Jacobians J_t and J_l).
DistanceJacobian line_point_squared(const PureQuaternion& t,
                                    const PureQuaternion& l,
                                    const PureQuaternion& p,
                                    const Eigen::MatrixXd& J_t,
                                    const Eigen::MatrixXd& J_l);

// Two rows per joint: +e_k <= eta (q_max - q) and -e_k <= eta (q - q_min).
// Rows are laid out over `total` columns starting at column `offset`.
std::vector<ConstraintRow> joint_limit_rows(const Eigen::VectorXd& q,
                                            const Eigen::VectorXd& lower,
                                            const Eigen::VectorXd& upper,
                                            double eta, int offset = 0,
                                            int total = -1);

// Places a per-robot row into a zero row of width `total` at `offset`.
Eigen::RowVectorXd embed(const Eigen::RowVectorXd& local, int offset,
                         int total);

}  // namespace eyeorbit
