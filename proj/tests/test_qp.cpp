#include <random>

#include <doctest.h>

#include "eyeorbit/errors.hpp"
#include "eyeorbit/qp.hpp"
#include "support/oracles.hpp"

using namespace eyeorbit;

namespace {

QuadraticProgram scalar_qp() {
  // (u + 1)^2 up to a constant: 1/2 * 2 u^2 + 2 u
  QuadraticProgram qp;
  qp.H = Eigen::MatrixXd::Constant(1, 1, 2.0);
  qp.f = Eigen::VectorXd::Constant(1, 2.0);
  qp.W.resize(0, 1);
  qp.w.resize(0);
  return qp;
}

Eigen::MatrixXd unit_x_jacobian() {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4, 1);
  J(1, 0) = 1.0;
  return J;
}

}  // namespace

TEST_CASE("tracking objective") {
  const ControlParams p{.beta = 0.5, .eta = 1.0, .lambda = 0.0};
  const QuadraticProgram qp =
      build_objective(unit_x_jacobian(), {1, 0, 0}, unit_x_jacobian(), {}, p);
  const ControlSignal s = solve(qp);
  CHECK(s.u[0] == doctest::Approx(-1.0));
  CHECK(s.u[1] == doctest::Approx(0.0));

  const ControlParams d;
  const QuadraticProgram z = build_objective(unit_x_jacobian(), {}, unit_x_jacobian(), {}, d);
  CHECK(solve(z).u.isZero());
  CHECK_THROWS_AS(build_objective(Eigen::MatrixXd::Zero(3, 1), {}, unit_x_jacobian(), {}, d),
                  DimensionError);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(ControlParams{}.validate());
  CHECK_THROWS_AS((ControlParams{.beta = 1.5}).validate(), ConfigurationError);
  CHECK_THROWS_AS((ControlParams{.eta = 0.0}).validate(), ConfigurationError);
  CHECK_THROWS_AS((ControlParams{.lambda = 0.0}).validate(), ConfigurationError);
}

TEST_CASE("assemble") {
  const StackedConstraints empty = assemble({}, 3);
  CHECK(empty.W.rows() == 0);
  CHECK(empty.W.cols() == 3);
  CHECK(empty.w.size() == 0);
  std::vector<ConstraintRow> rows{
      {Eigen::RowVector2d(1, 0), 1.0, ConstraintFamily::joint_limit, "j"},
      {Eigen::RowVector2d(0, 1), 2.0, ConstraintFamily::safety, "s1"},
      {Eigen::RowVector2d(1, 1), 3.0, ConstraintFamily::safety, "s2"}};
  const StackedConstraints s = assemble(rows, 2);
  CHECK(s.rows[0].name == "s1");
  CHECK(s.rows[1].name == "s2");
  CHECK(s.rows[2].name == "j");
  CHECK(s.w == Eigen::Vector3d(2, 3, 1));
  CHECK_THROWS_AS(assemble(rows, 3), DimensionError);
}

TEST_CASE("scalar problems") {
  QuadraticProgram qp = scalar_qp();
  CHECK(solve(qp).u[0] == doctest::Approx(-1.0));
  qp.W = Eigen::MatrixXd::Constant(1, 1, -1.0);  // -u <= 0.5
  qp.w = Eigen::VectorXd::Constant(1, 0.5);
  const ControlSignal s = solve(qp);
  CHECK(s.u[0] == doctest::Approx(-0.5));
  CHECK(s.multipliers[0] == doctest::Approx(1.0));
  CHECK(s.active_set == std::vector<int>{0});
}

TEST_CASE("infeasible and non-convex problems") {
  QuadraticProgram qp = scalar_qp();
  qp.W.resize(2, 1);
  qp.W << 1.0, -1.0;  // u <= -1 and u >= 1
  qp.w = Eigen::Vector2d(-1.0, -1.0);
  try {
    solve(qp);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.row() >= 0);
    CHECK(e.row() < 2);
  }
  QuadraticProgram bad = scalar_qp();
  bad.H(0, 0) = -1.0;
  CHECK_THROWS_AS(solve(bad), ConfigurationError);
}

TEST_CASE("random problems agree with active-set enumeration") {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> dn(1, 4), dr(0, 6);
  for (int i = 0; i < 300; ++i) {
    const QuadraticProgram qp = oracle::random_qp(rng, dn(rng), dr(rng));
    Eigen::VectorXd ref;
    REQUIRE(oracle::enumerate_qp(qp, ref));
    const ControlSignal s = solve(qp);
    CHECK((s.u - ref).cwiseAbs().maxCoeff() <= 1e-7);
    const KktResiduals k = kkt_residuals(qp, s);
    CHECK(k.stationarity <= 1e-8);
    CHECK(k.primal <= 1e-8);
    CHECK(k.dual <= 1e-8);
    CHECK(k.complementarity <= 1e-8);
  }
}
