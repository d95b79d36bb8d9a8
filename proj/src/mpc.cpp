#include "noir/mpc.hpp"

#include <string>
#include <utility>

namespace noir {

const char* to_string(FallbackPolicy p) {
  switch (p) {
    case FallbackPolicy::None: return "none";
    case FallbackPolicy::RelaxPhi5: return "relax_phi5";
    case FallbackPolicy::ZeroInflow: return "zero_inflow";
  }
  return "unknown";
}

QuadraticCost build_cost(const AffinePrediction& prediction, double beta) {
  if (beta <= 0.0) fail(ErrorCode::InvalidScenario, "beta must be positive");
  const int vars = prediction.vars();
  if (vars <= 0 || prediction.m.empty()) {
    fail(ErrorCode::DimensionMismatch, "prediction covers no inputs");
  }

  QuadraticCost cost;
  cost.H = 2.0 * beta * Matrix::Identity(vars, vars);
  cost.g = Vector::Zero(vars);
  cost.constant = 0.0;
  for (int tau = 1; tau <= prediction.horizon; ++tau) {
    cost.H += 2.0 * prediction.m[tau].transpose() * prediction.m[tau];
    cost.g += 2.0 * prediction.m[tau].transpose() * prediction.c[tau];
    cost.constant += prediction.c[tau].squaredNorm();
  }
  return cost;
}

MpcController::MpcController(NoirGraph g, ActionSet actions, MpcConfig cfg)
    : g_(std::move(g)), actions_(std::move(actions)), cfg_(cfg) {
  if (cfg_.n_tau < 1) fail(ErrorCode::InvalidScenario, "horizon must be >= 1");
  cfg_.spec.horizon = cfg_.n_tau;  // single source of truth for the horizon
  cfg_.spec.validate();
  actions_.validate(g_);
  matrices_ = assemble_all(g_, actions_);
  b_ = assemble_b_matrix(g_);
}

ControlDecision MpcController::floor_decision(const AffinePrediction& prediction,
                                              QpStatus status) {
  // lowest admissible inflow everywhere; with the default box that is zero
  ControlDecision d;
  d.qp_status = status;
  d.fallback_applied = FallbackPolicy::ZeroInflow;
  d.planned_inputs = Vector::Constant(prediction.vars(), cfg_.spec.u_min);
  d.u.inflows = d.planned_inputs.head(g_.inlet_count());
  d.predicted_cost = build_cost(prediction, cfg_.beta).value(d.planned_inputs);
  return d;
}

ControlDecision MpcController::decide(const TrafficState& x0, int action_id) {
  const int idx = actions_.index_of(action_id);
  if (idx < 0) fail(ErrorCode::UnknownAction, "action id " + std::to_string(action_id));
  const TendencyAction& action = actions_.actions[static_cast<std::size_t>(idx)];
  const TendencyMatrix& tm = matrices_[static_cast<std::size_t>(idx)];

  AffinePrediction prediction = predict_affine(tm, b_, x0, cfg_.n_tau);
  AffineConstraintSet cons = compile(cfg_.spec, g_, action, prediction);
  QuadraticCost cost = build_cost(prediction, cfg_.beta);

  QpProblem problem{cost.H, cost.g, cons.g, cons.h, cons.e, cons.f};
  QpOptions options;
  options.warm_start = last_active_;
  QpSolution sol = solve(problem, options);
  FallbackPolicy applied = FallbackPolicy::None;

  if (sol.status != QpStatus::Optimal) {
    switch (cfg_.fallback) {
      case FallbackPolicy::None:
        fail(ErrorCode::QpInfeasibleNoFallback,
             "program " + std::string(to_string(sol.status)) + " and no fallback configured");
      case FallbackPolicy::ZeroInflow:
        return floor_decision(prediction, sol.status);
      case FallbackPolicy::RelaxPhi5: {
        // keep the demand as a ceiling instead of an equality
        FeasibilitySpec relaxed = cfg_.spec;
        relaxed.enforce_phi5 = false;
        AffineConstraintSet rcons = compile(relaxed, g_, action, prediction);
        const Eigen::Index base = rcons.g.rows();
        Matrix g2(base + cfg_.n_tau, rcons.g.cols());
        Vector h2(base + cfg_.n_tau);
        g2.topRows(base) = rcons.g;
        h2.head(base) = rcons.h;
        for (int h = 0; h < cfg_.n_tau; ++h) {
          Vector row = Vector::Zero(rcons.g.cols());
          row.segment(static_cast<Eigen::Index>(h) * g_.inlet_count(), g_.inlet_count()).setOnes();
          g2.row(base + h) = row.transpose();
          h2[base + h] = cfg_.spec.u0;
          rcons.ineq_provenance.push_back({Condition::Phi5, 0, 0, h});
        }
        rcons.g = std::move(g2);
        rcons.h = std::move(h2);

        QpProblem rproblem{cost.H, cost.g, rcons.g, rcons.h, rcons.e, rcons.f};
        QpSolution rsol = solve(rproblem, options);
        if (rsol.status != QpStatus::Optimal) return floor_decision(prediction, rsol.status);
        sol = std::move(rsol);
        cons = std::move(rcons);
        applied = FallbackPolicy::RelaxPhi5;
        break;
      }
    }
  }

  ControlDecision d;
  d.qp_status = sol.status;
  d.fallback_applied = applied;
  d.planned_inputs = sol.z;
  // snap solver round-off back into the admissible box
  d.u.inflows =
      sol.z.head(g_.inlet_count()).cwiseMax(cfg_.spec.u_min).cwiseMin(cfg_.spec.u_max);
  d.predicted_cost = cost.value(sol.z);
  d.qp_iterations = sol.iterations;
  for (int row : sol.active_set) {
    d.active_constraints.push_back(cons.ineq_provenance[static_cast<std::size_t>(row)]);
  }
  last_active_ = sol.active_set;
  return d;
}

}  // namespace noir
