#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "noir/graph.hpp"
#include "noir/types.hpp"

namespace noir {

/// One traffic-tendency action: the outflow probability of every non-outlet
/// element and, per edge, the fraction of the source's outflow routed along
/// it. Route fractions out of each element must sum to 1.
struct TendencyAction {
  int id = 0;
  std::map<NodeId, double> outflow_prob;   // p̄ for i in V \ V_out
  std::map<Edge, double> tendency_prob;    // edge (i -> j) -> q̄ share of i's outflow

  double outflow(NodeId i) const;
  double route(NodeId from, NodeId to) const;
};

/// Throws MissingProbability / NormalizationViolated / UnknownEdge when the
/// action does not cover the graph or breaks the probability invariants.
void validate_action(const NoirGraph& g, const TendencyAction& a);

struct ActionSet {
  std::vector<TendencyAction> actions;

  int size() const { return static_cast<int>(actions.size()); }
  int index_of(int id) const;            // -1 when absent
  const TendencyAction& by_id(int id) const;
  void validate(const NoirGraph& g) const;
};

/// Interior-state transition data for one action: a = I - P + Q P over the
/// interior indices, together with its diagnostics. Row/column c corresponds
/// to node c + n_out_end + 1.
struct TendencyMatrix {
  int action_id = 0;
  Matrix a;              // (N - N_out) x (N - N_out)
  Matrix q;              // interior-to-interior routing fractions
  Vector p;              // diagonal of P (outflow probabilities)
  Vector column_sums;    // of a; each lies in [0, 1]
  double spectral_radius = 0.0;
};

TendencyMatrix assemble_tendency_matrix(const NoirGraph& g, const TendencyAction& a);

std::vector<TendencyMatrix> assemble_all(const NoirGraph& g, const ActionSet& actions);

/// Boundary injection matrix: entry (i, j) is 1 when inlet j feeds interior
/// element i + n_out_end + 1, else 0.
Matrix assemble_b_matrix(const NoirGraph& g);

/// Dominant-eigenvalue magnitude by power iteration from a fixed all-ones
/// start. For nonnegative matrices the iterate ratios bracket the true value
/// (Collatz-Wielandt), so the returned estimate is certified to tol whenever
/// the bracket closes; otherwise a stabilized norm-ratio estimate is used.
/// Throws NoConvergence when max_iter is exhausted.
double spectral_radius(const Matrix& m, double tol = 1e-10, int max_iter = 10000);

/// Scenario tooling: draw an action set with route fractions that differ per
/// action. With shared_outflow the per-element outflow probabilities are
/// drawn once and reused by every action.
struct ActionGenParams {
  int count = 4;
  double outflow_low = 0.3;
  double outflow_high = 0.9;
  bool shared_outflow = true;
};

ActionSet generate_actions(const NoirGraph& g, const ActionGenParams& p, std::uint64_t seed);

}  // namespace noir
