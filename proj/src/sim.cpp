#include "noir/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "noir/rng.hpp"

namespace noir {

void Scenario::validate() const {
  if (steps < 1) fail(ErrorCode::InvalidScenario, "run.steps must be >= 1");
  if (window_length < 1) fail(ErrorCode::InvalidScenario, "run.window must be >= 1");
  if (noise_amplitude < 0.0) {
    fail(ErrorCode::InvalidScenario, "run.noise_amplitude must be nonnegative");
  }
  actions.validate(graph);
  mpc.spec.validate();
  if (static_cast<int>(true_actions.size()) < steps) {
    fail(ErrorCode::InvalidScenario, "run.true_actions does not cover every step");
  }
  for (int id : true_actions) {
    if (actions.index_of(id) < 0) {
      fail(ErrorCode::InvalidScenario,
           "run.true_actions references unknown action " + std::to_string(id));
    }
  }
  if (initial_densities.size() != graph.interior_count()) {
    fail(ErrorCode::InvalidScenario, "run.initial_density does not match the interior size");
  }
  if (initial_densities.size() > 0 &&
      (initial_densities.minCoeff() < 0.0 || initial_densities.maxCoeff() > mpc.spec.rho_max)) {
    fail(ErrorCode::InvalidScenario, "run.initial_density entries must lie in [0, rho_max]");
  }
  if (control_mode == ControlMode::Constant &&
      constant_inflow.size() != graph.inlet_count()) {
    fail(ErrorCode::InvalidScenario, "run.control.values does not match the inlet count");
  }
}

namespace {

int lowest_action_id(const ActionSet& set) {
  int best = set.actions.front().id;
  for (const TendencyAction& a : set.actions) best = std::min(best, a.id);
  return best;
}

}  // namespace

RunTrace run(const Scenario& s) {
  s.validate();

  RunTrace trace;
  const NoirGraph& g = s.graph;
  std::vector<TendencyMatrix> matrices = assemble_all(g, s.actions);
  const Matrix b = assemble_b_matrix(g);
  MpcController controller(g, s.actions, s.mpc);
  HistoryWindow window(s.window_length);
  Rng noise(s.seed);

  TrafficState x{s.initial_densities, 1};
  trace.states.push_back(x);

  for (int k = 1; k <= s.steps; ++k) {
    StepTrace st;
    st.step = k;
    st.true_action = s.true_actions[static_cast<std::size_t>(k - 1)];

    // estimate the active tendency from history; before any observation
    // arrives the lowest action id is the deterministic default
    if (window.empty()) {
      st.learned_action = lowest_action_id(s.actions);
    } else {
      ActionEstimate est = estimate_action(window, g, s.actions);
      st.learned_action = est.chosen_action;
      st.learn_margin = est.margin;
      st.learn_costs = est.costs;
    }

    // decide the boundary inflow
    if (s.control_mode == ControlMode::Mpc) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        ControlDecision d = controller.decide(x, st.learned_action);
        st.u = d.u;
        st.qp_status = d.qp_status;
        st.fallback_applied = d.fallback_applied;
        st.predicted_cost = d.predicted_cost;
        st.active_constraints = std::move(d.active_constraints);
      } catch (const Error& e) {
        trace.aborted = true;
        trace.abort_reason = e.what();
        break;
      }
      st.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } else {
      st.u.inflows = s.constant_inflow;
    }

    // plant advances under the hidden true action
    const int idx = s.actions.index_of(st.true_action);
    StepResult res = step(g, s.actions.actions[static_cast<std::size_t>(idx)],
                          matrices[static_cast<std::size_t>(idx)], b, x, st.u);
    st.flows = res.flows;
    st.mass_residual = mass_balance(x, res.next, res.flows);
    st.realized_stage_cost =
        res.next.densities.squaredNorm() + s.mpc.beta * st.u.inflows.squaredNorm();
    if (!trace.steps.empty()) {
      const StepTrace& prev = trace.steps.back();
      st.descent_gap = st.predicted_cost - prev.predicted_cost + prev.realized_stage_cost;
    }

    // observation: densities are measured exactly, edge flows with additive
    // uniform noise clipped at zero; element outflows stay the edge sums
    Observation obs = make_observation(x, res.flows);
    if (s.noise_amplitude > 0.0) {
      obs.outflow.setZero();
      for (std::size_t e = 0; e < g.flow_edges().size(); ++e) {
        const Eigen::Index ei = static_cast<Eigen::Index>(e);
        obs.edge_flows[ei] = std::max(
            0.0, obs.edge_flows[ei] + noise.uniform(-s.noise_amplitude, s.noise_amplitude));
        obs.outflow[g.state_index(g.flow_edges()[e].from)] += obs.edge_flows[ei];
      }
    }
    window.push(obs);

    trace.steps.push_back(std::move(st));
    x = res.next;
    trace.states.push_back(x);
  }

  // realized-feasibility audit over the whole run
  std::vector<FlowRecord> flows;
  std::vector<BoundaryInflow> inputs;
  for (const StepTrace& st : trace.steps) {
    flows.push_back(st.flows);
    inputs.push_back(st.u);
  }
  trace.violations = monitor(trace.states, flows, inputs, s.mpc.spec, g);
  return trace;
}

RunSummary summarize(const RunTrace& t) {
  if (t.states.empty()) fail(ErrorCode::InvalidState, "empty trace");

  RunSummary s;
  s.steps = static_cast<int>(t.steps.size());
  s.violation_count = static_cast<int>(t.violations.size());
  for (const TrafficState& x : t.states) {
    s.total_density.push_back(x.densities.sum());
    if (x.densities.size() > 0) s.peak_density = std::max(s.peak_density, x.densities.maxCoeff());
  }
  s.final_total_density = s.total_density.back();

  // first step after which the total changes by less than 1% per step
  int settled_from = 1;
  for (std::size_t j = 0; j + 1 < s.total_density.size(); ++j) {
    const double change = std::abs(s.total_density[j + 1] - s.total_density[j]);
    if (change > 1e-12 && change >= 0.01 * s.total_density[j]) {
      settled_from = static_cast<int>(j) + 2;
    }
  }
  s.steady_state_step = settled_from;

  int correct = 0;
  double solve_total = 0.0, input_total = 0.0;
  for (const StepTrace& st : t.steps) {
    if (st.learned_action == st.true_action) ++correct;
    solve_total += st.solve_seconds;
    input_total += st.u.inflows.norm();
  }
  if (s.steps > 0) {
    s.learner_accuracy = static_cast<double>(correct) / s.steps;
    s.mean_solve_seconds = solve_total / s.steps;
    s.mean_input_norm = input_total / s.steps;
  }
  return s;
}

}  // namespace noir
