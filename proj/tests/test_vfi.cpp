#include <random>

#include <doctest.h>

#include "eyeorbit/errors.hpp"
#include "eyeorbit/vfi.hpp"
#include "support/oracles.hpp"

using namespace eyeorbit;

namespace {

Eigen::RowVectorXd row1(double v) { return Eigen::RowVectorXd::Constant(1, v); }

}  // namespace

TEST_CASE("safe and restricted zone rows") {
  const ConstraintRow s = safe_zone_row(row1(1.0), 2.0, 0.5);
  CHECK(s.coefficients(0) == 1.0);
  CHECK(s.bound == 1.0);
  const ConstraintRow r = restricted_zone_row(row1(1.0), 2.0, 0.5);
  CHECK(r.coefficients(0) == -1.0);
  CHECK(r.bound == 1.0);
  CHECK(restricted_zone_row(row1(1.0), 2.0, 0.0).bound == 0.0);
  CHECK(safe_zone_row(row1(1.0), 2.0, 0.5, 0.25).bound == 0.75);
  CHECK(restricted_zone_row(row1(1.0), 2.0, 0.5, 0.25).bound == 1.25);
}

TEST_CASE("scalar safe zone never overshoots under Euler integration") {
  // d_dot = J u with the row active every step: d_tilde decays geometrically.
  for (double dt : {0.001, 0.004, 0.01}) {
    const double eta = 50.0, d_safe = 1.0;
    double d = 0.0;
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
      const ConstraintRow row = safe_zone_row(row1(2.0), d_safe - d, eta);
      const double u = row.bound / row.coefficients(0);  // push to the limit
      d += dt * 2.0 * u;
      worst = std::min(worst, d_safe - d);
    }
    CHECK(worst >= -1e-6);
  }
}

TEST_CASE("point distances") {
  const Eigen::MatrixXd J = Eigen::MatrixXd::Identity(4, 4);
  const DistanceJacobian a = point_point_squared({3, 0, 0}, {}, J);
  CHECK(a.value == 9.0);
  const DistanceJacobian b = point_point_squared({1, 2, 3}, {1, 2, 3}, J);
  CHECK(b.value == 0.0);
  CHECK(b.jacobian.isZero());
  const Plane plane({0, 0, 1}, 6.0);
  CHECK(point_plane_signed({0, 0, 9}, plane, J).value == 3.0);
  CHECK(point_plane_signed({4, -2, 6}, plane, J).value == 0.0);
  CHECK_THROWS_AS(Plane({0, 0, 2}, 0.0), DegenerateGeometryError);
  CHECK_THROWS_AS(point_point_squared({}, {}, Eigen::MatrixXd::Zero(3, 2)),
                  DimensionError);
}

TEST_CASE("line-point distance") {
  const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(4, 2);
  CHECK(line_point_squared({0, 0, 0}, {0, 0, 1}, {1, 0, 5}, Z, Z).value ==
        doctest::Approx(1.0));
  CHECK(line_point_squared({1, 1, 1}, {0, 1, 0}, {1, 7, 1}, Z, Z).value == 0.0);
  CHECK_THROWS_AS(line_point_squared({}, {0, 0, 2}, {}, Z, Z),
                  DegenerateGeometryError);
}

TEST_CASE("line-point Jacobian against finite differences") {
  // t(q) and l(q) follow a synthetic smooth map of three parameters.
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Matrix3d A = Eigen::Matrix3d::Random();
    const Eigen::Matrix3d B = Eigen::Matrix3d::Random();
    const Eigen::Vector3d p = oracle::random_pure(rng, 3.0).vec3();
    const Eigen::Vector3d q0 = oracle::random_pure(rng).vec3();
    auto t_of = [&](const Eigen::Vector3d& q) { return Eigen::Vector3d(A * q + q.cwiseAbs2()); };
    auto l_raw = [&](const Eigen::Vector3d& q) {
      return Eigen::Vector3d(Eigen::Vector3d(0.3, -0.2, 1.0) + B * q.array().sin().matrix());
    };
    auto l_of = [&](const Eigen::Vector3d& q) { return Eigen::Vector3d(l_raw(q).normalized()); };
    auto stack = [](const Eigen::Vector3d& v) {
      Eigen::VectorXd s = Eigen::VectorXd::Zero(4);
      s.tail<3>() = v;
      return s;
    };
    const Eigen::MatrixXd Jt = oracle::central_difference(
        [&](const Eigen::VectorXd& q) { return stack(t_of(q)); }, q0);
    const Eigen::MatrixXd Jl = oracle::central_difference(
        [&](const Eigen::VectorXd& q) { return stack(l_of(q)); }, q0);
    const DistanceJacobian d = line_point_squared(
        PureQuaternion(t_of(q0)), PureQuaternion(l_of(q0)), PureQuaternion(p), Jt, Jl);
    CHECK(d.value == doctest::Approx(oracle::line_point_squared(t_of(q0), l_of(q0), p)).epsilon(1e-12));
    const Eigen::MatrixXd fd = oracle::central_difference(
        [&](const Eigen::VectorXd& q) {
          return Eigen::VectorXd::Constant(1, oracle::line_point_squared(t_of(q), l_of(q), p));
        },
        q0);
    CHECK(oracle::relative_error(d.jacobian, fd) <= 1e-5);
  }
}

TEST_CASE("joint limit rows") {
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -1.0);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 1.0);
  const auto mid = joint_limit_rows(Eigen::VectorXd::Zero(2), lo, hi, 1.0);
  REQUIRE(mid.size() == 4);
  CHECK(mid[0].bound == mid[1].bound);
  CHECK(mid[0].coefficients == Eigen::RowVector2d(1, 0));
  CHECK(mid[1].coefficients == Eigen::RowVector2d(-1, 0));
  const auto top = joint_limit_rows(Eigen::Vector2d(1.0, 0.0), lo, hi, 1.0);
  CHECK(top[0].bound == 0.0);
  const auto placed = joint_limit_rows(Eigen::VectorXd::Zero(2), lo, hi, 1.0, 3, 6);
  CHECK(placed[2].coefficients == (Eigen::RowVectorXd(6) << 0, 0, 0, 0, 1, 0).finished());
  CHECK_THROWS_AS(joint_limit_rows(Eigen::VectorXd::Zero(3), lo, hi, 1.0), DimensionError);
  CHECK_THROWS_AS(embed(row1(1.0), 2, 2), DimensionError);
}
