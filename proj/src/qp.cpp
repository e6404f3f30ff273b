#include "eyeorbit/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eyeorbit/errors.hpp"

namespace eyeorbit {

void ControlParams::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ConfigurationError("beta must lie in [0, 1]");
  }
  if (!(eta > 0.0)) throw ConfigurationError("eta must be positive");
  if (!(lambda > 0.0)) {
    throw ConfigurationError("lambda must be positive (strict convexity)");
  }
}

QuadraticProgram build_objective(const Eigen::MatrixXd& J_t1,
                                 const PureQuaternion& error1,
                                 const Eigen::MatrixXd& J_t2,
                                 const PureQuaternion& error2,
                                 const ControlParams& params) {
  if (J_t1.rows() != 4 || J_t2.rows() != 4) {
    throw DimensionError("translation Jacobians must have 4 rows");
  }
  const int n1 = static_cast<int>(J_t1.cols());
  const int n2 = static_cast<int>(J_t2.cols());
  const double w1 = params.beta;
  const double w2 = 1.0 - params.beta;

  QuadraticProgram qp;
  qp.H = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  qp.H.topLeftCorner(n1, n1) =
      2.0 * w1 *
      (J_t1.transpose() * J_t1 + params.lambda * Eigen::MatrixXd::Identity(n1, n1));
  qp.H.bottomRightCorner(n2, n2) =
      2.0 * w2 *
      (J_t2.transpose() * J_t2 + params.lambda * Eigen::MatrixXd::Identity(n2, n2));
  qp.f.resize(n1 + n2);
  qp.f.head(n1) = 2.0 * w1 * params.eta * J_t1.transpose() * vec4(error1);
  qp.f.tail(n2) = 2.0 * w2 * params.eta * J_t2.transpose() * vec4(error2);
  qp.W.resize(0, n1 + n2);
  qp.w.resize(0);
  return qp;
}

StackedConstraints assemble(std::vector<ConstraintRow> rows, int n) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].coefficients.size() != n) {
      throw DimensionError("constraint row " + std::to_string(i) + " ('" +
                           rows[i].name + "') has " +
                           std::to_string(rows[i].coefficients.size()) +
                           " columns, expected " + std::to_string(n));
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ConstraintRow& a, const ConstraintRow& b) {
                     return static_cast<int>(a.family) <
                            static_cast<int>(b.family);
                   });
  StackedConstraints out;
  out.W.resize(static_cast<Eigen::Index>(rows.size()), n);
  out.w.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.W.row(static_cast<Eigen::Index>(i)) = rows[i].coefficients;
    out.w[static_cast<Eigen::Index>(i)] = rows[i].bound;
  }
  out.rows = std::move(rows);
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem(const QuadraticProgram& qp) {
  const Eigen::Index n = qp.H.rows();
  if (qp.H.cols() != n || qp.f.size() != n) {
    throw DimensionError("H must be n x n and f of length n");
  }
  if (qp.W.cols() != n || qp.W.rows() != qp.w.size()) {
    throw DimensionError("W must be r x n and w of length r");
  }
  const double scale = std::max(1.0, qp.H.cwiseAbs().maxCoeff());
  if ((qp.H - qp.H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigurationError("H is not symmetric");
  }
}

}  // namespace

// Goldfarb & Idnani, "A numerically stable dual method for solving strictly
// convex quadratic programs", Math. Programming 27 (1983). Constraints are
// handled as s_i(u) = w_i - W_i u >= 0, i.e. normal n_i = -W_i^T.
ControlSignal solve(const QuadraticProgram& qp) {
  check_problem(qp);
  const Eigen::Index n = qp.H.rows();
  const Eigen::Index r = qp.W.rows();

  const Eigen::LLT<Eigen::MatrixXd> llt(qp.H);
  if (llt.info() != Eigen::Success) {
    throw ConfigurationError("H is not positive definite");
  }

  ControlSignal out;
  Eigen::VectorXd x = llt.solve(-qp.f);
  std::vector<int> active;
  std::vector<double> mu;  // multipliers of `active`
  const int max_iterations = 100 * static_cast<int>(n + r + 1);

  auto slack = [&](Eigen::Index i) { return qp.w[i] - qp.W.row(i).dot(x); };
  auto tolerance = [&](Eigen::Index i) {
    return 1e-12 * (1.0 + std::abs(qp.w[i]) + qp.W.row(i).cwiseAbs().sum());
  };

  while (true) {
    // Most violated constraint; strict comparison keeps the lowest index.
    Eigen::Index p = -1;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) {
      if (std::find(active.begin(), active.end(), static_cast<int>(i)) !=
          active.end()) {
        continue;
      }
      const double s = slack(i);
      if (s < -tolerance(i) && s < worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) break;

    const Eigen::VectorXd n_plus = -qp.W.row(p).transpose();
    double mu_plus = 0.0;
    while (true) {
      if (++out.iterations > max_iterations) {
        throw Error("QP solver exceeded its iteration limit");
      }
      const Eigen::Index q = static_cast<Eigen::Index>(active.size());
      const Eigen::VectorXd Hinv_n = llt.solve(n_plus);
      Eigen::VectorXd z = Hinv_n;
      Eigen::VectorXd step_mu(q);
      if (q > 0) {
        Eigen::MatrixXd N(n, q);
        for (Eigen::Index j = 0; j < q; ++j) {
          N.col(j) = -qp.W.row(active[j]).transpose();
        }
        const Eigen::MatrixXd Hinv_N = llt.solve(N);
        const Eigen::MatrixXd M = N.transpose() * Hinv_N;
        step_mu = M.ldlt().solve(N.transpose() * Hinv_n);
        z -= Hinv_N * step_mu;
      }

      // Partial step: largest t keeping active multipliers nonnegative.
      double t1 = kInf;
      Eigen::Index k = -1;
      for (Eigen::Index j = 0; j < q; ++j) {
        if (step_mu[j] > 0.0) {
          const double t = mu[j] / step_mu[j];
          if (t < t1) {
            t1 = t;
            k = j;
          }
        }
      }
      // Full step: makes constraint p active.
      const double curvature = z.dot(n_plus);
      double t2 = kInf;
      if (curvature > 1e-14 * std::max(1e-300, Hinv_n.dot(n_plus))) {
        t2 = -slack(p) / curvature;
      }

      if (t1 == kInf && t2 == kInf) {
        throw InfeasibleError(
            "QP is infeasible: constraint row " + std::to_string(p) +
                " cannot be satisfied together with the active set",
            p);
      }
      if (t2 == kInf) {
        // Dual-only step, then drop the blocking constraint.
        for (Eigen::Index j = 0; j < q; ++j) mu[j] -= t1 * step_mu[j];
        mu_plus += t1;
        active.erase(active.begin() + k);
        mu.erase(mu.begin() + k);
        continue;
      }
      const double t = std::min(t1, t2);
      x += t * z;
      for (Eigen::Index j = 0; j < q; ++j) mu[j] -= t * step_mu[j];
      mu_plus += t;
      if (t2 <= t1) {
        active.push_back(static_cast<int>(p));
        mu.push_back(mu_plus);
        break;
      }
      active.erase(active.begin() + k);
      mu.erase(mu.begin() + k);
    }
  }

  out.u = std::move(x);
  out.multipliers = Eigen::VectorXd::Zero(r);
  for (std::size_t j = 0; j < active.size(); ++j) {
    out.multipliers[active[j]] = std::max(0.0, mu[j]);
  }
  out.active_set = std::move(active);
  return out;
}

KktResiduals kkt_residuals(const QuadraticProgram& qp,
                           const ControlSignal& solution) {
  KktResiduals k;
  const Eigen::VectorXd& u = solution.u;
  const Eigen::VectorXd& mu = solution.multipliers;
  Eigen::VectorXd grad = qp.H * u + qp.f;
  if (qp.W.rows() > 0) grad += qp.W.transpose() * mu;
  k.stationarity = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < qp.W.rows(); ++i) {
    const double g = qp.W.row(i).dot(u) - qp.w[i];
    k.primal = std::max(k.primal, g);
    k.dual = std::max(k.dual, -mu[i]);
    k.complementarity = std::max(k.complementarity, std::abs(mu[i] * g));
  }
  return k;
}

}  // namespace eyeorbit
