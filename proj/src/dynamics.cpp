#include "noir/dynamics.hpp"

#include <cmath>
#include <string>

namespace noir {

namespace {

void check_vector(const Vector& v, Eigen::Index expected, const char* what) {
  if (v.size() != expected) {
    fail(ErrorCode::DimensionMismatch, std::string(what) + " has size " + std::to_string(v.size()) +
                                           ", expected " + std::to_string(expected));
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0) {
      fail(ErrorCode::InvalidState,
           std::string(what) + "[" + std::to_string(i) + "] = " + std::to_string(v[i]));
    }
  }
}

}  // namespace

StepResult step(const NoirGraph& g, const TendencyAction& action, const TendencyMatrix& tm,
                const Matrix& b_matrix, const TrafficState& state, const BoundaryInflow& u) {
  const int n = g.interior_count();
  check_vector(state.densities, n, "state");
  check_vector(u.inflows, g.inlet_count(), "inflow");
  if (tm.a.rows() != n || tm.a.cols() != n) {
    fail(ErrorCode::DimensionMismatch, "tendency matrix does not match graph");
  }
  if (b_matrix.rows() != n || b_matrix.cols() != g.inlet_count()) {
    fail(ErrorCode::DimensionMismatch, "b matrix does not match graph");
  }

  StepResult res;
  res.next.step = state.step + 1;
  res.next.densities = tm.a * state.densities + b_matrix * u.inflows;

  FlowRecord& rec = res.flows;
  rec.step = state.step;
  rec.outflow = tm.p.cwiseProduct(state.densities);
  rec.boundary_inflow = b_matrix * u.inflows;
  rec.inflow = rec.boundary_inflow;
  rec.edge_flows = Vector::Zero(static_cast<Eigen::Index>(g.flow_edges().size()));
  rec.outlet_outflow = 0.0;
  for (std::size_t e = 0; e < g.flow_edges().size(); ++e) {
    const Edge& edge = g.flow_edges()[e];
    const int src = g.state_index(edge.from);
    const double f = action.route(edge.from, edge.to) * tm.p[src] * state.densities[src];
    rec.edge_flows[static_cast<Eigen::Index>(e)] = f;
    if (g.is_interior(edge.to)) {
      rec.inflow[g.state_index(edge.to)] += f;
    } else {
      rec.outlet_outflow += f;
    }
  }
  return res;
}

std::vector<TrafficState> rollout(const NoirGraph& g, const ActionSet& actions,
                                  const std::vector<TendencyMatrix>& matrices,
                                  const Matrix& b_matrix, const TrafficState& x0,
                                  std::span<const BoundaryInflow> inputs,
                                  std::span<const int> action_ids) {
  if (inputs.size() != action_ids.size()) {
    fail(ErrorCode::DimensionMismatch, "rollout needs one action id per input");
  }
  if (matrices.size() != actions.actions.size()) {
    fail(ErrorCode::DimensionMismatch, "one assembled matrix per action required");
  }

  std::vector<TrafficState> states;
  states.reserve(inputs.size() + 1);
  states.push_back(x0);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const int idx = actions.index_of(action_ids[k]);
    if (idx < 0) fail(ErrorCode::UnknownAction, "action id " + std::to_string(action_ids[k]));
    states.push_back(
        step(g, actions.actions[idx], matrices[idx], b_matrix, states.back(), inputs[k]).next);
  }
  return states;
}

double mass_balance(const TrafficState& prev, const TrafficState& next, const FlowRecord& rec) {
  if (prev.densities.size() != next.densities.size()) {
    fail(ErrorCode::DimensionMismatch, "states of different networks");
  }
  if (rec.step != prev.step || next.step != prev.step + 1) {
    fail(ErrorCode::InvalidState, "flow record does not belong to this transition");
  }
  const double change = next.densities.sum() - prev.densities.sum();
  const double injected = rec.boundary_inflow.sum();
  return std::abs(change - injected + rec.outlet_outflow);
}

}  // namespace noir
