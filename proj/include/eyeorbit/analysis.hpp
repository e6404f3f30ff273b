#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eyeorbit/orbital.hpp"
#include "eyeorbit/scene.hpp"
#include "eyeorbit/simulation.hpp"

namespace eyeorbit {

// sqrt(det(J J^T)) computed as the product of the singular values of J.
// Throws DimensionError when J has more rows than columns.
double manipulability(const Eigen::MatrixXd& J);

// [J_t1 0; 0 J_t2; J_CR1 0; 0 J_CR2] from 3-row translation Jacobians and
// the fixed-RCM line-point rows.
Eigen::MatrixXd augmented_without(const Eigen::MatrixXd& J_t1,
                                  const Eigen::MatrixXd& J_t2,
                                  const Eigen::RowVectorXd& J_cr1,
                                  const Eigen::RowVectorXd& J_cr2);

// [J_t1 0; 0 J_t2; J'_OM].
Eigen::MatrixXd augmented_with(const Eigen::MatrixXd& J_t1,
                               const Eigen::MatrixXd& J_t2,
                               const Eigen::RowVectorXd& J_om_normalized);

// J'_OM = vec4(t_OM1 - t_OM2)^T [J_tOM1, -J_tOM2] / h3, the Jacobian of
// h3 = |t_OM1 - t_OM2|. Throws DegenerateGeometryError for h3 <= 1e-9.
Eigen::RowVectorXd normalized_orbital_jacobian(const OrbitalState& s);

// Translation Jacobian without its zero real row (3 x n).
Eigen::MatrixXd translation_block(const Eigen::MatrixXd& J_t);

// Fixed-RCM row of the shaft of `g`: Jacobian of the squared distance from
// the shaft line to the point where it currently pierces the eye.
Eigen::RowVectorXd fixed_rcm_row(const InstrumentGeometry& g);

double omega_with(const SceneConfig& scene, const Eigen::VectorXd& q);
double omega_without(const SceneConfig& scene, const Eigen::VectorXd& q);

// Sunflower layout of `count` points on a disc of `diameter` at z = depth.
// Throws ConfigurationError for count < 1 or a disc rim outside the eye.
std::vector<PureQuaternion> make_fundus_targets(int count, double diameter,
                                                const EyeModel& eye,
                                                double depth);

struct GridPoint {
  int index = 0;
  PureQuaternion target;
  PositioningResult with;     // orbital mode
  PositioningResult without;  // fixed-RCM mode
  double omega_with = 0.0;
  double omega_without = 0.0;
};

struct ManipulabilitySummary {
  int points = 0;
  int converged_with = 0;
  int converged_without = 0;
  int both_converged = 0;
  int with_greater = 0;  // among points where both converged
  double min_with = 0.0, max_with = 0.0, mean_with = 0.0;
  double min_without = 0.0, max_without = 0.0, mean_without = 0.0;
  // Pearson correlation of the target distance from the initial RCM
  // midpoint against omega_with, over points converged in orbital mode.
  double distance_correlation = 0.0;
};

struct ManipulabilityReport {
  PureQuaternion rcm_midpoint;
  std::vector<GridPoint> points;

  ManipulabilitySummary summary() const;
};

// One positioning run per target and mode from the scene's initial pose.
// Points run in parallel with OpenMP.
ManipulabilityReport grid_study(const SceneConfig& scene,
                                const std::vector<PureQuaternion>& targets);
// Same result computed point by point on the calling thread.
ManipulabilityReport grid_study_serial(
    const SceneConfig& scene, const std::vector<PureQuaternion>& targets);

void write_report_csv(const ManipulabilityReport& report, std::ostream& os);
std::string report_summary_text(const ManipulabilityReport& report);
// Writes the CSV to `path` and the summary block to `path`.summary.txt.
void emit_report(const ManipulabilityReport& report, const std::string& path);

struct JacobianCheckEntry {
  std::string name;
  double max_error = 0.0;  // max over entries of |a - f| / max(1, |f|)
};

struct JacobianCheckResult {
  int samples = 0;
  int rejected = 0;  // draws discarded as degenerate
  std::vector<JacobianCheckEntry> entries;
  double max_error() const;
};

// Compares every analytic Jacobian against central differences (step 1e-6)
// at `samples` random configurations drawn around the scene's initial q.
JacobianCheckResult check_jacobians(const SceneConfig& scene, int samples,
                                    std::uint64_t seed,
                                    double spread = 0.15);

}  // namespace eyeorbit
