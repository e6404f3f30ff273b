#pragma once

#include <array>

#include <Eigen/Dense>

#include "eyeorbit/kinematics.hpp"
#include "eyeorbit/quaternion.hpp"
#include "eyeorbit/vfi.hpp"

namespace eyeorbit {

// Spherical eye centered at the world origin.
class EyeModel {
public:
  explicit EyeModel(double radius);
  double radius() const { return radius_; }

private:
  double radius_;
};

// Smallest h1 (mm) accepted before the depth Jacobian is declared degenerate.
inline constexpr double kDepthEpsilon = 1e-6;

// Instrument shaft direction l = r k r*, pointing from the RCM to the tip.
PureQuaternion shaft_direction(const UnitQuaternion& r);

struct InsertionDepth {
  double d = 0.0;   // tip to RCM along -l, mm
  double h1 = 0.0;  // sqrt(<t,l>^2 - |t|^2 + r^2), mm
};

// Positive root of the shaft-line / eye-sphere intersection behind the tip.
InsertionDepth insertion_depth(const PureQuaternion& t, const PureQuaternion& l,
                               double eye_radius);

// t_OM = t - d l, the point where the shaft pierces the eye sphere.
PureQuaternion rcm_translation(const PureQuaternion& t, double d,
                               const PureQuaternion& l);

// D_OM = |t_OM1 - t_OM2|^2
double orbital_squared_distance(const PureQuaternion& rcm1,
                                const PureQuaternion& rcm2);

// 4 x n: vec4(l_dot) = J_l qdot.
Eigen::MatrixXd line_jacobian(const UnitQuaternion& r,
                              const Eigen::MatrixXd& J_r);

struct DepthJacobians {
  Eigen::RowVectorXd J_h2;
  Eigen::RowVectorXd J_h1;
  Eigen::RowVectorXd J_d;
};

// Jacobians of h2 = <t_dot,l> + <t,l_dot>, of h1 and of the depth d.
// J_h1 comes from differentiating h1^2 = <t,l>^2 - |t|^2 + r^2 directly:
// h1 * h1_dot = <t,l> h2 - <t, t_dot>.
DepthJacobians depth_jacobian(const PureQuaternion& t, const PureQuaternion& l,
                              double h1, const Eigen::MatrixXd& J_t,
                              const Eigen::MatrixXd& J_l);

// 4 x n: J_t - vec4(l) J_d - d J_l.
Eigen::MatrixXd rcm_translation_jacobian(const Eigen::MatrixXd& J_t,
                                         const PureQuaternion& l,
                                         const Eigen::RowVectorXd& J_d,
                                         double d, const Eigen::MatrixXd& J_l);

// 1 x (n1 + n2): 2 vec4(t_OM1 - t_OM2)^T [J_tOM1, -J_tOM2].
Eigen::RowVectorXd orbital_distance_jacobian(const PureQuaternion& rcm1,
                                             const PureQuaternion& rcm2,
                                             const Eigen::MatrixXd& J_rcm1,
                                             const Eigen::MatrixXd& J_rcm2);

// Lower and upper band rows keeping D_OM within D_init +/- D_safe.
// Throws ConfigurationError when the current state is outside the band by
// more than `tolerance`.
std::array<ConstraintRow, 2> orbital_vfi_rows(double D_om, double D_init,
                                              double D_safe, double eta,
                                              const Eigen::RowVectorXd& J_om,
                                              double tolerance = 0.0);

struct RotationLimits {
  // Plane through the eye center perpendicular to x, one side per robot.
  Plane vertical_robot1{{1.0, 0.0, 0.0}, 0.0};
  Plane vertical_robot2{{-1.0, 0.0, 0.0}, 0.0};
  // Plane perpendicular to z at height d_rot above the eye center.
  Plane horizontal{{0.0, 0.0, 1.0}, 6.0};
  double eta = 1.0;

  static RotationLimits for_eye(const EyeModel& eye, double eta = 1.0);
};

// Four rows (plane 1 robot 1, plane 1 robot 2, plane 2 robot 1, plane 2
// robot 2), each -J_d qdot <= eta d for the RCM-to-plane signed distance.
// Throws ConfigurationError for a distance below -tolerance.
std::array<ConstraintRow, 4> rotation_limit_rows(
    const PureQuaternion& rcm1, const PureQuaternion& rcm2,
    const Eigen::MatrixXd& J_rcm1, const Eigen::MatrixXd& J_rcm2,
    const RotationLimits& limits, double tolerance = 0.0);

// Rotation best aligning the initial RCM directions to the current ones
// (two-vector Wahba problem). Exact for rigid motions.
UnitQuaternion eye_rotation_estimate(
    const std::array<PureQuaternion, 2>& initial_rcms,
    const std::array<PureQuaternion, 2>& current_rcms, double eye_radius);

// Everything the orbital constraints need for one instrument.
struct InstrumentGeometry {
  PureQuaternion tip;
  PureQuaternion direction;  // l
  double depth = 0.0;        // d
  double h1 = 0.0;
  PureQuaternion rcm;  // t_OM
  Eigen::MatrixXd J_t;
  Eigen::MatrixXd J_r;
  Eigen::MatrixXd J_l;
  DepthJacobians depth_jacobians;
  Eigen::MatrixXd J_rcm;
};

InstrumentGeometry instrument_geometry(const KinematicState& kin,
                                       const EyeModel& eye);

// Both instruments plus the RCM squared distance and its Jacobian.
struct OrbitalState {
  std::array<InstrumentGeometry, 2> instruments;
  double D_om = 0.0;
  Eigen::RowVectorXd J_om;
};

OrbitalState orbital_state(const KinematicState& robot1,
                           const KinematicState& robot2, const EyeModel& eye);

}  // namespace eyeorbit
