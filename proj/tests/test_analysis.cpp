#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "eyeorbit/analysis.hpp"
#include "eyeorbit/errors.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace eyeorbit;

namespace {

OrbitalState state(const SceneConfig& scene, const Eigen::VectorXd& q) {
  return orbital_state(evaluate(scene.robots[0].robot, fixture::robot_q(scene, q, 0)),
                       evaluate(scene.robots[1].robot, fixture::robot_q(scene, q, 1)),
                       scene.eye);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("manipulability") {
  CHECK(manipulability(Eigen::Vector2d(2, 3).asDiagonal().toDenseMatrix()) ==
        doctest::Approx(6.0));
  Eigen::MatrixXd twin(2, 3);
  twin << 1, 2, 3, 1, 2, 3;
  CHECK(manipulability(twin) == 0.0);
  CHECK_THROWS_AS(manipulability(Eigen::MatrixXd::Ones(3, 2)), DimensionError);

  // Against sqrt(det(J J^T)) for well-conditioned random matrices.
  for (int i = 0; i < 20; ++i) {
    const Eigen::MatrixXd J = Eigen::MatrixXd::Random(3, 5);
    CHECK(manipulability(J) ==
          doctest::Approx(std::sqrt((J * J.transpose()).determinant())).epsilon(1e-10));
  }
}

TEST_CASE("augmented Jacobians") {
  const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(3, 6);
  const Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(6);
  const Eigen::MatrixXd A = augmented_without(Z, Z, z, z);
  CHECK(A.rows() == 8);
  CHECK(A.cols() == 12);
  CHECK(A.isZero());
  CHECK(manipulability(A) == 0.0);
  const Eigen::MatrixXd B = augmented_with(Z, Z, Eigen::RowVectorXd::Ones(12));
  CHECK(B.rows() == 7);
  CHECK(B.row(6).sum() == 12.0);
}

TEST_CASE("normalized orbital Jacobian") {
  const SceneConfig& scene = fixture::shipped_scene();
  const double r = scene.eye.radius();
  const int n1 = scene.dof(0);
  for (const Eigen::VectorXd& q : fixture::interior_configs(scene, 20, 61)) {
    const OrbitalState s = state(scene, q);
    const double h3 = (s.instruments[0].rcm - s.instruments[1].rcm).norm();
    const Eigen::RowVectorXd Jn = normalized_orbital_jacobian(s);
    CHECK((Jn - s.J_om / (2.0 * h3)).norm() <= 1e-12 * (1.0 + Jn.norm()));
    const Eigen::MatrixXd fd = oracle::central_difference(
        [&](const Eigen::VectorXd& x) {
          const Eigen::Vector4d h(1, 0, 0, 0);
          const Eigen::Vector3d a = oracle::instrument(scene.robots[0].robot, x.head(n1), r, h).rcm;
          const Eigen::Vector3d b =
              oracle::instrument(scene.robots[1].robot, x.tail(x.size() - n1), r, h).rcm;
          return Eigen::VectorXd::Constant(1, (a - b).norm());
        },
        q);
    CHECK(oracle::relative_error(Jn, fd) <= 1e-5);
  }
  OrbitalState same = state(scene, scene.initial_q());
  same.instruments[1].rcm = same.instruments[0].rcm;
  CHECK_THROWS_AS(normalized_orbital_jacobian(same), DegenerateGeometryError);
}

TEST_CASE("manipulability on the shipped scene") {
  const SceneConfig& scene = fixture::shipped_scene();
  CHECK(omega_with(scene, scene.initial_q()) > 0.0);
  for (const Eigen::VectorXd& q : fixture::interior_configs(scene, 50, 62)) {
    CHECK(omega_without(scene, q) <= 1e-8);
  }
}

TEST_CASE("fundus targets") {
  const SceneConfig& scene = fixture::shipped_scene();
  const auto one = make_fundus_targets(1, 14.0, scene.eye, -8.0);
  REQUIRE(one.size() == 1);
  CHECK((one[0] - PureQuaternion(0, 0, -8)).norm() == 0.0);
  const auto grid = make_fundus_targets(149, 14.0, scene.eye, -8.0);
  CHECK(grid.size() == 149);
  double rmax = 0.0;
  for (const PureQuaternion& p : grid) {
    rmax = std::max(rmax, std::hypot(p.x(), p.y()));
    CHECK(p.z() == -8.0);
  }
  CHECK(rmax == doctest::Approx(7.0));
  CHECK_THROWS_AS(make_fundus_targets(10, 30.0, scene.eye, -8.0), ConfigurationError);
  CHECK_THROWS_AS(make_fundus_targets(0, 14.0, scene.eye, -8.0), ConfigurationError);
}

TEST_CASE("single-point study at the initial tip") {
  const SceneConfig& scene = fixture::shipped_scene();
  const auto targets = make_fundus_targets(1, 14.0, scene.eye, scene.fundus_depth);
  const ManipulabilityReport report = grid_study(scene, targets);
  REQUIRE(report.points.size() == 1);
  CHECK(report.points[0].with.converged);
  CHECK(report.points[0].without.converged);
  CHECK(report.points[0].with.error <= 0.01);
  CHECK(report.points[0].without.error <= 0.01);
}

TEST_CASE("parallel study matches the serial reference") {
  const SceneConfig& scene = fixture::shipped_scene();
  const auto targets = make_fundus_targets(6, 14.0, scene.eye, scene.fundus_depth);
  const ManipulabilityReport par = grid_study(scene, targets);
  const ManipulabilityReport ser = grid_study_serial(scene, targets);
  std::ostringstream a, b;
  write_report_csv(par, a);
  write_report_csv(ser, b);
  CHECK(a.str() == b.str());
  CHECK(count_lines(a.str()) == 7);
}

TEST_CASE("report emission") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string empty_path = (dir / "eyeorbit_empty.csv").string();
  emit_report(ManipulabilityReport{}, empty_path);
  CHECK(count_lines(slurp(empty_path)) == 1);
  CHECK(std::filesystem::exists(empty_path + ".summary.txt"));

  const SceneConfig& scene = fixture::shipped_scene();
  const ManipulabilityReport report =
      grid_study(scene, make_fundus_targets(3, 14.0, scene.eye, scene.fundus_depth));
  const std::string path = (dir / "eyeorbit_report.csv").string();
  emit_report(report, path);
  const std::string first = slurp(path);
  emit_report(report, path);
  CHECK(slurp(path) == first);
  CHECK(count_lines(first) == 4);
  for (const std::string& p : {empty_path, path}) {
    std::filesystem::remove(p);
    std::filesystem::remove(p + ".summary.txt");
  }
}

TEST_CASE("library Jacobian check") {
  const JacobianCheckResult r = check_jacobians(fixture::shipped_scene(), 10, 7);
  CHECK(r.samples == 10);
  CHECK(r.max_error() <= 1e-5);
  CHECK(r.entries.size() > 20);
}
