#pragma once

#include <span>
#include <vector>

#include "noir/error.hpp"
#include "noir/types.hpp"

namespace noir {

/// Strictly convex quadratic program
///   minimize   1/2 z' H z + g' z
///   subject to G z <= h,  E z = f.
/// H must be symmetric (to 1e-12) and positive definite; validate() also
/// rejects H whose smallest eigenvalue falls below 1e-10 of its largest.
struct QpProblem {
  Matrix H;
  Vector g;
  Matrix G;
  Vector h;
  Matrix E;
  Vector f;

  int n() const { return static_cast<int>(H.rows()); }
  void validate() const;
};

enum class QpStatus { Optimal, Infeasible, IterationLimit };

const char* to_string(QpStatus s);

struct KktResiduals {
  double stationarity = 0.0;
  double primal = 0.0;
  double complementarity = 0.0;

  double max() const;
};

/// Constraint rows that together admit no solution; reported when the solver
/// proves infeasibility.
struct InfeasibilityCertificate {
  std::vector<int> ineq_rows;
  std::vector<int> eq_rows;
};

struct QpSolution {
  QpStatus status = QpStatus::IterationLimit;
  Vector z;
  double objective = 0.0;
  Vector lambda;  // inequality multipliers, >= 0, zero off the active set
  Vector nu;      // equality multipliers
  std::vector<int> active_set;  // tight inequality rows, ascending
  KktResiduals kkt;
  InfeasibilityCertificate certificate;
  int iterations = 0;
};

/// Residuals of the KKT conditions at (z, lambda, nu): stationarity
/// ||Hz + g + G'lambda + E'nu||_inf, worst primal violation, and the largest
/// complementarity product |lambda_i (G_i z - h_i)|.
KktResiduals check_kkt(const QpProblem& p, const Vector& z, const Vector& lambda,
                       const Vector& nu);

struct QpOptions {
  double tol = 1e-7;   // exposed feasibility/KKT tolerance
  int max_iter = 0;    // 0: scaled default
  std::span<const int> warm_start = {};  // inequality rows to try first
};

/// Dense active-set solve. Starts from the unconstrained minimizer, pins the
/// equalities, then adds violated inequalities one at a time with dual steps
/// that drop blocking constraints (Goldfarb-Idnani scheme, with a fresh
/// range-space KKT subsolve per iteration). Deterministic: constraint
/// selection scans rows in order, warm-start rows first.
QpSolution solve(const QpProblem& p, const QpOptions& options = {});

}  // namespace noir
