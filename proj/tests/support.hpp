#pragma once

// Shared fixtures for the constraint, controller, and acceptance suites:
// random network construction, stacked-input simulation under a held action,
// and evaluation of a compiled row's physical quantity on a realized
// trajectory.

#include <utility>
#include <vector>

#include "noir/constraints.hpp"
#include "noir/dynamics.hpp"
#include "noir/graph.hpp"
#include "noir/qp.hpp"
#include "noir/rng.hpp"
#include "noir/tendency.hpp"

namespace testsupport {

using namespace noir;

struct Net {
  NoirGraph g;
  ActionSet actions;
  std::vector<TendencyMatrix> matrices;
  Matrix b;
};

inline Net make_net(Rng& rng, int n_actions, int roads_lo = 2, int roads_hi = 8,
                    double p_low = 0.3, double p_high = 0.9) {
  TopologyParams tp;
  tp.interior_road_count = roads_lo + static_cast<int>(rng.below(roads_hi - roads_lo + 1));
  tp.elements_per_interior_road = 1 + static_cast<int>(rng.below(4));
  tp.inlet_road_count = 1 + static_cast<int>(rng.below(3));
  tp.outlet_road_count = 1 + static_cast<int>(rng.below(3));
  tp.pattern = (rng.below(2) == 0) ? ConnectionPattern::Ring : ConnectionPattern::Grid;
  Net net{generate_topology(tp, rng.raw()), {}, {}, {}};
  ActionGenParams ap;
  ap.count = n_actions;
  ap.outflow_low = p_low;
  ap.outflow_high = p_high;
  net.actions = generate_actions(net.g, ap, rng.raw());
  net.matrices = assemble_all(net.g, net.actions);
  net.b = assemble_b_matrix(net.g);
  return net;
}

struct Trajectory {
  std::vector<TrafficState> states;
  std::vector<FlowRecord> flows;
  std::vector<BoundaryInflow> inputs;
};

/// Applies the stacked input U (n_in entries per step) from x0 under one held
/// action.
inline Trajectory simulate_stacked(const Net& net, int action_index, const TrafficState& x0,
                                   const Vector& u_stacked, int n_tau) {
  Trajectory t;
  t.states.push_back(x0);
  const int n_in = net.g.inlet_count();
  for (int h = 0; h < n_tau; ++h) {
    // clamp solver round-off (entries like -1e-12) before feeding the plant
    BoundaryInflow u{
        u_stacked.segment(static_cast<Eigen::Index>(h) * n_in, n_in).cwiseMax(0.0)};
    StepResult res = step(net.g, net.actions.actions[action_index],
                          net.matrices[action_index], net.b, t.states.back(), u);
    t.inputs.push_back(u);
    t.flows.push_back(res.flows);
    t.states.push_back(res.next);
  }
  return t;
}

/// The physical quantity a compiled row guards, evaluated on a realized
/// trajectory, together with its bound. |lhs - bound| small means the
/// trajectory touches that constraint.
inline std::pair<double, double> provenance_quantity(const RowProvenance& prov, const Net& net,
                                                     int action_index, const Trajectory& t,
                                                     const FeasibilitySpec& spec) {
  const NoirGraph& g = net.g;
  const TendencyAction& action = net.actions.actions[action_index];
  switch (prov.condition) {
    case Condition::Phi1Upper:
      return {t.states[prov.offset].densities[g.state_index(prov.element)], spec.rho_max};
    case Condition::Phi1Lower:
      return {t.states[prov.offset].densities[g.state_index(prov.element)], 0.0};
    case Condition::Phi2: {
      const double share = action.route(prov.element, prov.neighbor) * action.outflow(prov.element);
      const double flow = share * t.states[prov.offset].densities[g.state_index(prov.element)];
      return {flow + t.states[prov.offset].densities[g.state_index(prov.neighbor)], spec.rho_max};
    }
    case Condition::Phi3:
      return {t.flows[prov.offset].inflow[g.state_index(prov.element)] +
                  t.states[prov.offset].densities[g.state_index(prov.element)],
              spec.rho_max};
    case Condition::Phi4Upper:
      return {t.inputs[prov.offset].inflows[prov.element - 1], spec.u_max};
    case Condition::Phi4Lower:
      return {t.inputs[prov.offset].inflows[prov.element - 1], spec.u_min};
    case Condition::Phi5:
      return {t.inputs[prov.offset].inflows.sum(), spec.u0};
  }
  return {0.0, 0.0};
}

/// A point inside the compiled polytope, found by projecting a random target
/// onto it with the QP solver. Returns an empty vector when the program is
/// infeasible.
inline Vector feasible_point(const AffineConstraintSet& set, const Vector& target) {
  QpProblem p;
  const int n = set.vars();
  p.H = 2.0 * Matrix::Identity(n, n);
  p.g = -2.0 * target;
  p.G = set.g;
  p.h = set.h;
  p.E = set.e;
  p.f = set.f;
  QpSolution sol = solve(p);
  if (sol.status != QpStatus::Optimal) return Vector();
  return sol.z;
}

}  // namespace testsupport
