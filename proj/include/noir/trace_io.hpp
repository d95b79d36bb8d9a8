#pragma once

#include <filesystem>

#include "noir/sim.hpp"

namespace noir {

/// Writes the run artifacts into dir (created if needed):
///   densities.csv   step,element,density            (states 1..K+1)
///   inputs.csv      step,inlet,inflow
///   flows.csv       step,from,to,flow
///   elements.csv    step,element,inflow,outflow,boundary_inflow
///   learner.csv     step,true_action,learned_action,margin,cost_<id>...
///   controller.csv  step,qp_status,fallback,predicted_cost,
///                   realized_stage_cost,descent_gap,active_constraints
///   violations.csv  step,condition,element,neighbor,lhs,bound,slack
///   summary.json
/// Files are written to a temporary name and renamed into place. Timing is
/// deliberately excluded so output is byte-identical across repeat runs.
void write_trace(const RunTrace& trace, const Scenario& scenario,
                 const std::filesystem::path& dir);

}  // namespace noir
