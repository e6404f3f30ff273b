#pragma once

#include <vector>

#include <Eigen/Dense>

#include "eyeorbit/quaternion.hpp"
#include "eyeorbit/vfi.hpp"

namespace eyeorbit {

struct ControlParams {
  double beta = 0.99;     // priority of robot 1 over robot 2, in [0, 1]
  double eta = 140.0;     // task gain, 1/s
  double lambda = 0.001;  // joint-velocity damping, > 0

  // Throws ConfigurationError when out of range.
  void validate() const;
};

// minimize 1/2 u^T H u + f^T u  subject to  W u <= w.
struct QuadraticProgram {
  Eigen::MatrixXd H;
  Eigen::VectorXd f;
  Eigen::MatrixXd W;
  Eigen::VectorXd w;
};

struct ControlSignal {
  Eigen::VectorXd u;
  // Lagrange multipliers, one per row of W (zero for inactive rows).
  Eigen::VectorXd multipliers;
  std::vector<int> active_set;
  int iterations = 0;
};

struct KktResiduals {
  double stationarity = 0.0;     // |H u + f + W^T mu|_inf
  double primal = 0.0;           // max(0, max(W u - w))
  double dual = 0.0;             // max(0, max(-mu))
  double complementarity = 0.0;  // max |mu_i (W u - w)_i|
};

// Objective of the two-robot tracking problem for translation errors
// e_i = t_i - t_i,d (pure quaternions) and 4 x n_i translation Jacobians.
// H is block diagonal with 2 beta (J1^T J1 + lambda I) and
// 2 (1 - beta) (J2^T J2 + lambda I); f stacks 2 beta eta J1^T vec4(e1) and
// 2 (1 - beta) eta J2^T vec4(e2).
QuadraticProgram build_objective(const Eigen::MatrixXd& J_t1,
                                 const PureQuaternion& error1,
                                 const Eigen::MatrixXd& J_t2,
                                 const PureQuaternion& error2,
                                 const ControlParams& params);

struct StackedConstraints {
  Eigen::MatrixXd W;
  Eigen::VectorXd w;
  std::vector<ConstraintRow> rows;  // in stacking order
};

// Stacks rows by family (safety, orbital, rotation limit, joint limit),
// preserving the input order within a family.
StackedConstraints assemble(std::vector<ConstraintRow> rows, int n);

// Dense dual active-set solver (Goldfarb-Idnani). Violated constraints are
// added most-violated first, lowest row index on ties. Throws
// InfeasibleError with the offending row index, or ConfigurationError when
// H is not symmetric positive definite.
ControlSignal solve(const QuadraticProgram& qp);

KktResiduals kkt_residuals(const QuadraticProgram& qp,
                           const ControlSignal& solution);

}  // namespace eyeorbit
