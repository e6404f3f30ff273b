#pragma once

// Reference implementations used only by the tests. None of them call the
// library code they are checking.

#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "eyeorbit/kinematics.hpp"
#include "eyeorbit/qp.hpp"
#include "eyeorbit/quaternion.hpp"

namespace oracle {

// Central differences of f around x with step h, one column per input.
Eigen::MatrixXd central_difference(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h = 1e-6);

// Largest |a - f| / max(1, |f|) over all entries.
double relative_error(const Eigen::MatrixXd& analytic,
                      const Eigen::MatrixXd& reference);

// Tool frame as a homogeneous matrix: base * prod(DH_k) * Tz(tool_length),
// with DH_k = Rz(theta) Tz(d) Tx(a) Rx(alpha) written out element by element.
Eigen::Matrix4d homogeneous_fk(const eyeorbit::SerialManipulator& robot,
                               const Eigen::VectorXd& q);

// Rotation quaternion (w, x, y, z) of a rotation matrix, sign chosen to have
// a nonnegative dot product with `hint`.
Eigen::Vector4d matrix_quaternion(const Eigen::Matrix3d& R,
                                  const Eigen::Vector4d& hint);

// Distance s >= 0 along the ray t - s l to the sphere |x| = radius, taking
// the larger root of the quadratic. Returns NaN when the ray misses.
double ray_sphere(const Eigen::Vector3d& t, const Eigen::Vector3d& l,
                  double radius);

// Squared distance from p to the line through t with direction l.
double line_point_squared(const Eigen::Vector3d& t, const Eigen::Vector3d& l,
                          const Eigen::Vector3d& p);

// Solution of min 1/2 u'Hu + f'u s.t. W u <= w by trying every active set
// and keeping the feasible KKT point with nonnegative multipliers and the
// lowest objective. Returns false if none exists.
bool enumerate_qp(const eyeorbit::QuadraticProgram& qp, Eigen::VectorXd& u);

// Strictly convex QP with n variables and r rows, feasible by construction
// (w = W u0 + s with s >= 0; some rows are exactly tight at u0).
eyeorbit::QuadraticProgram random_qp(std::mt19937_64& rng, int n, int r);

// Wahba by SVD: rotation R minimizing sum |b_i - R a_i|^2.
Eigen::Matrix3d wahba_svd(const std::vector<Eigen::Vector3d>& a,
                          const std::vector<Eigen::Vector3d>& b);

// Instrument quantities of one arm computed from the homogeneous chain.
struct Instrument {
  Eigen::Vector3d tip;
  Eigen::Vector4d rotation;  // (w, x, y, z)
  Eigen::Vector3d direction;
  double depth = 0.0;
  Eigen::Vector3d rcm;
};

Instrument instrument(const eyeorbit::SerialManipulator& robot,
                      const Eigen::VectorXd& q, double eye_radius,
                      const Eigen::Vector4d& rotation_hint);

eyeorbit::Quaternion random_quaternion(std::mt19937_64& rng);
eyeorbit::PureQuaternion random_pure(std::mt19937_64& rng, double scale = 1.0);
eyeorbit::UnitQuaternion random_rotation(std::mt19937_64& rng);

}  // namespace oracle
