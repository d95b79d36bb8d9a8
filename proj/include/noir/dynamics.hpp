#pragma once

#include <span>
#include <vector>

#include "noir/graph.hpp"
#include "noir/tendency.hpp"
#include "noir/types.hpp"

namespace noir {

/// Interior densities at discrete time `step`. Entry c holds the density of
/// node c + n_out_end + 1, in vehicles. Always nonnegative and finite.
struct TrafficState {
  Vector densities;
  int step = 1;
};

/// Vehicles admitted per inlet during one step.
struct BoundaryInflow {
  Vector inflows;
};

/// Per-step flow bookkeeping. Vectors over interior elements use state
/// order; edge_flows aligns with NoirGraph::flow_edges().
struct FlowRecord {
  int step = 0;
  Vector outflow;          // z_i = p̄_i * rho_i
  Vector edge_flows;       // f on each interior-sourced edge
  Vector inflow;           // y_i: upstream sends plus boundary injection
  Vector boundary_inflow;  // (B u)_i component of y
  double outlet_outflow = 0.0;  // total mass leaving toward outlets
};

struct StepResult {
  TrafficState next;
  FlowRecord flows;
};

/// One conservation step: x[k+1] = A x[k] + B u[k], with the per-edge flow
/// decomposition recorded. The plant applies no saturation; feasibility is
/// the controller's job and violations surface in the monitor instead.
StepResult step(const NoirGraph& g, const TendencyAction& action, const TendencyMatrix& tm,
                const Matrix& b_matrix, const TrafficState& state, const BoundaryInflow& u);

/// Iterated step over per-step inputs and action ids. Returns the visited
/// states, initial state first (inputs may be empty).
std::vector<TrafficState> rollout(const NoirGraph& g, const ActionSet& actions,
                                  const std::vector<TendencyMatrix>& matrices,
                                  const Matrix& b_matrix, const TrafficState& x0,
                                  std::span<const BoundaryInflow> inputs,
                                  std::span<const int> action_ids);

/// Absolute global conservation defect of one recorded step: the change in
/// total interior density must equal boundary injection minus the mass sent
/// to outlets.
double mass_balance(const TrafficState& prev, const TrafficState& next, const FlowRecord& rec);

}  // namespace noir
