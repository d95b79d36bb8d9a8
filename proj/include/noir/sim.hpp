#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "noir/learning.hpp"
#include "noir/mpc.hpp"

namespace noir {

enum class ControlMode { Mpc, Constant };

/// A complete closed-loop experiment: the network, the candidate actions, the
/// controller configuration, the hidden ground-truth action schedule, and the
/// observation model. Deterministic given its seed.
struct Scenario {
  std::string name;
  NoirGraph graph;
  ActionSet actions;
  MpcConfig mpc;
  std::vector<int> true_actions;  // entry k-1: action driving step k
  Vector initial_densities;
  int steps = 30;
  int window_length = 10;
  double noise_amplitude = 0.0;  // uniform, applied to observed edge flows
  std::uint64_t seed = 0;
  ControlMode control_mode = ControlMode::Mpc;
  Vector constant_inflow;  // Constant mode only

  void validate() const;
};

struct StepTrace {
  int step = 0;
  BoundaryInflow u;
  int true_action = 0;
  int learned_action = 0;
  double learn_margin = 0.0;
  std::map<int, double> learn_costs;
  QpStatus qp_status = QpStatus::Optimal;
  FallbackPolicy fallback_applied = FallbackPolicy::None;
  double predicted_cost = 0.0;
  double realized_stage_cost = 0.0;
  double descent_gap = 0.0;  // diagnostic; positive when the cost failed to descend
  std::vector<RowProvenance> active_constraints;
  double mass_residual = 0.0;
  double solve_seconds = 0.0;  // kept in memory; file output stays deterministic
  FlowRecord flows;
};

struct RunTrace {
  std::vector<TrafficState> states;  // x[1..K+1]
  std::vector<StepTrace> steps;
  std::vector<ViolationReport> violations;
  bool aborted = false;       // controller failed mid-run; trace is partial
  std::string abort_reason;
};

/// Reporting convention: one discrete step spans 30 seconds of wall time.
inline constexpr double kSecondsPerStep = 30.0;

struct RunSummary {
  int steps = 0;
  int steady_state_step = 0;  // first step after which the total changes < 1% per step
  double peak_density = 0.0;
  double learner_accuracy = 0.0;
  double final_total_density = 0.0;
  double mean_solve_seconds = 0.0;
  double mean_input_norm = 0.0;
  int violation_count = 0;
  std::vector<double> total_density;  // per recorded state
};

/// Closed loop per step: estimate the action from the window, decide the
/// boundary inflow, advance the plant under the hidden true action, then push
/// the (possibly noisy) observation. On unrecoverable controller failure the
/// loop stops and the partial trace comes back with aborted set.
RunTrace run(const Scenario& s);

RunSummary summarize(const RunTrace& t);

}  // namespace noir
