#pragma once

#include <deque>
#include <map>

#include "noir/dynamics.hpp"
#include "noir/graph.hpp"
#include "noir/tendency.hpp"

namespace noir {

/// One step of observed traffic data: interior densities at step k together
/// with the flows they produced during [k, k+1].
struct Observation {
  int step = 0;
  Vector densities;   // state order
  Vector edge_flows;  // aligned with NoirGraph::flow_edges()
  Vector outflow;     // per-element z
};

Observation make_observation(const TrafficState& state, const FlowRecord& rec);

/// Ring of the last `capacity` observations with strictly contiguous steps.
/// Single-writer; concurrent readers are fine once filled.
class HistoryWindow {
 public:
  explicit HistoryWindow(int capacity);

  /// Appends an observation; evicts the oldest entry beyond capacity.
  /// Throws NonContiguousStep unless obs.step continues the recorded run.
  void push(const Observation& obs);

  bool empty() const { return entries_.empty(); }
  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  const std::deque<Observation>& entries() const { return entries_; }

 private:
  int capacity_;
  std::deque<Observation> entries_;
};

/// Empirical fit of one candidate action against the window: the summed
/// squared gap between each observed edge flow and the flow the candidate
/// would have produced from the recorded densities. Zero exactly when the
/// action reproduces every observed edge flow.
double tendency_cost(const HistoryWindow& w, const NoirGraph& g, const TendencyAction& a);

/// Coarser per-element diagnostic: fits total outflow z_i against p̄_i rho_i.
/// Cannot separate actions that share outflow probabilities.
double outflow_cost(const HistoryWindow& w, const NoirGraph& g, const TendencyAction& a);

struct ActionEstimate {
  int chosen_action = 0;
  std::map<int, double> costs;
  double margin = 0.0;  // best-to-runner-up gap; 0 for a singleton set
};

/// Minimizes tendency_cost over the candidate set. Ties break toward the
/// lowest action id for reproducibility.
ActionEstimate estimate_action(const HistoryWindow& w, const NoirGraph& g, const ActionSet& actions);

}  // namespace noir
