#include "noir/learning.hpp"

#include <limits>
#include <string>

namespace noir {

Observation make_observation(const TrafficState& state, const FlowRecord& rec) {
  if (rec.step != state.step) {
    fail(ErrorCode::InvalidState, "flow record step " + std::to_string(rec.step) +
                                      " does not match state step " + std::to_string(state.step));
  }
  return Observation{state.step, state.densities, rec.edge_flows, rec.outflow};
}

HistoryWindow::HistoryWindow(int capacity) : capacity_(capacity) {
  if (capacity < 1) fail(ErrorCode::InvalidState, "window capacity must be >= 1");
}

void HistoryWindow::push(const Observation& obs) {
  if (!entries_.empty() && obs.step != entries_.back().step + 1) {
    fail(ErrorCode::NonContiguousStep, "observation at step " + std::to_string(obs.step) +
                                           " after step " + std::to_string(entries_.back().step));
  }
  if (obs.edge_flows.size() && obs.edge_flows.minCoeff() < 0.0) {
    fail(ErrorCode::InvalidState, "observed flows must be nonnegative");
  }
  entries_.push_back(obs);
  if (static_cast<int>(entries_.size()) > capacity_) entries_.pop_front();
}

double tendency_cost(const HistoryWindow& w, const NoirGraph& g, const TendencyAction& a) {
  if (w.empty()) fail(ErrorCode::EmptyWindow, "cost of an empty window");
  const auto& edges = g.flow_edges();
  double cost = 0.0;
  for (const Observation& obs : w.entries()) {
    if (obs.edge_flows.size() != static_cast<Eigen::Index>(edges.size())) {
      fail(ErrorCode::DimensionMismatch, "observation does not match graph edge list");
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const double rho = obs.densities[g.state_index(edges[e].from)];
      const double predicted = a.outflow(edges[e].from) * a.route(edges[e].from, edges[e].to) * rho;
      const double r = obs.edge_flows[static_cast<Eigen::Index>(e)] - predicted;
      cost += r * r;
    }
  }
  return cost;
}

double outflow_cost(const HistoryWindow& w, const NoirGraph& g, const TendencyAction& a) {
  if (w.empty()) fail(ErrorCode::EmptyWindow, "cost of an empty window");
  double cost = 0.0;
  for (const Observation& obs : w.entries()) {
    for (int c = 0; c < g.interior_count(); ++c) {
      const double r = obs.outflow[c] - a.outflow(g.interior_node(c)) * obs.densities[c];
      cost += r * r;
    }
  }
  return cost;
}

ActionEstimate estimate_action(const HistoryWindow& w, const NoirGraph& g, const ActionSet& actions) {
  if (actions.actions.empty()) fail(ErrorCode::InvalidScenario, "empty candidate action set");

  ActionEstimate est;
  for (const TendencyAction& a : actions.actions) est.costs[a.id] = tendency_cost(w, g, a);

  // the map iterates ids ascending, so strict < keeps the lowest id on ties
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  for (const auto& [id, c] : est.costs) {
    if (c < best) {
      second = best;
      best = c;
      est.chosen_action = id;
    } else {
      second = std::min(second, c);
    }
  }
  est.margin = est.costs.size() > 1 ? second - best : 0.0;
  return est;
}

}  // namespace noir
