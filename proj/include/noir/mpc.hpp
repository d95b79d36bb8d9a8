#pragma once

#include <vector>

#include "noir/constraints.hpp"
#include "noir/dynamics.hpp"
#include "noir/qp.hpp"

namespace noir {

/// What to do when the compiled program has no solution.
enum class FallbackPolicy { None, RelaxPhi5, ZeroInflow };

const char* to_string(FallbackPolicy p);

struct MpcConfig {
  int n_tau = 5;
  double beta = 1.0;  // input penalty weight
  FeasibilitySpec spec;
  FallbackPolicy fallback = FallbackPolicy::RelaxPhi5;
};

/// The horizon cost sum_tau(||x[k+tau]||^2 + beta ||u[k+tau-1]||^2) condensed
/// to 1/2 U' H U + g' U + constant through the affine prediction.
struct QuadraticCost {
  Matrix H;
  Vector g;
  double constant = 0.0;

  double value(const Vector& u) const { return 0.5 * u.dot(H * u) + g.dot(u) + constant; }
};

QuadraticCost build_cost(const AffinePrediction& prediction, double beta);

struct ControlDecision {
  BoundaryInflow u;          // first horizon block, clamped to the admissible box
  Vector planned_inputs;     // full stacked U
  double predicted_cost = 0.0;
  QpStatus qp_status = QpStatus::Optimal;
  FallbackPolicy fallback_applied = FallbackPolicy::None;  // None: the nominal program solved
  std::vector<RowProvenance> active_constraints;
  int qp_iterations = 0;
};

/// Receding-horizon boundary controller: predicts under the learned action
/// held constant, compiles the feasibility conditions, condenses the cost,
/// and solves the resulting QP, warm-starting from the previous step's
/// active set.
class MpcController {
 public:
  MpcController(NoirGraph g, ActionSet actions, MpcConfig cfg);

  /// Throws QpInfeasibleNoFallback when the program is infeasible and the
  /// policy is None. RelaxPhi5 swaps the exact-demand equality for a
  /// sum-at-most-demand row and re-solves; if even that fails (or the policy
  /// is ZeroInflow) the decision is the lowest admissible inflow.
  ControlDecision decide(const TrafficState& x0, int action_id);

  const MpcConfig& config() const { return cfg_; }
  const NoirGraph& graph() const { return g_; }
  const ActionSet& actions() const { return actions_; }
  const std::vector<TendencyMatrix>& matrices() const { return matrices_; }
  const Matrix& b_matrix() const { return b_; }

 private:
  ControlDecision floor_decision(const AffinePrediction& prediction, QpStatus status);

  NoirGraph g_;
  ActionSet actions_;
  MpcConfig cfg_;
  std::vector<TendencyMatrix> matrices_;
  Matrix b_;
  std::vector<int> last_active_;
};

}  // namespace noir
