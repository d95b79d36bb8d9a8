#pragma once

#include <cstdint>
#include <vector>

#include "noir/error.hpp"
#include "noir/types.hpp"

namespace noir {

enum class NodeKind { Inlet, Outlet, Interior };

/// Directed network of interconnected road elements. Nodes are indexed
/// 1..n_total and partitioned by index: inlets occupy 1..n_in, outlets
/// n_in+1..n_out_end, interior elements n_out_end+1..n_total. Outlets have no
/// out-neighbors and inlets have no in-neighbors. Immutable after
/// construction, so instances can be shared freely across threads.
class NoirGraph {
 public:
  /// Validates the edge list and partition bounds, then derives the adjacency
  /// maps. Edges are stored in ascending (from, to) order.
  static NoirGraph build(std::vector<Edge> edges, int n_in, int n_out_end, int n_total);

  int n_in() const { return n_in_; }
  int n_out_end() const { return n_out_end_; }
  int n_total() const { return n_total_; }
  int inlet_count() const { return n_in_; }
  int outlet_count() const { return n_out_end_ - n_in_; }
  int interior_count() const { return n_total_ - n_out_end_; }

  NodeKind kind(NodeId v) const;
  bool is_inlet(NodeId v) const { return v >= 1 && v <= n_in_; }
  bool is_outlet(NodeId v) const { return v > n_in_ && v <= n_out_end_; }
  bool is_interior(NodeId v) const { return v > n_out_end_ && v <= n_total_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NodeId>& out_neighbors(NodeId v) const;
  const std::vector<NodeId>& in_neighbors(NodeId v) const;
  bool has_edge(NodeId from, NodeId to) const;

  /// Edges whose source carries a density (interior source), in ascending
  /// (from, to) order. Per-edge flow vectors across the project align with
  /// this list.
  const std::vector<Edge>& flow_edges() const { return flow_edges_; }
  /// Position of (from, to) in flow_edges(), or -1 when absent.
  int flow_edge_index(NodeId from, NodeId to) const;

  /// 0-based position of an interior node in the density state vector.
  int state_index(NodeId v) const { return v - n_out_end_ - 1; }
  NodeId interior_node(int state_index) const { return n_out_end_ + 1 + state_index; }

 private:
  NoirGraph() = default;

  void check_node(NodeId v) const;

  int n_in_ = 0;
  int n_out_end_ = 0;
  int n_total_ = 0;
  std::vector<Edge> edges_;
  std::vector<Edge> flow_edges_;
  std::vector<std::vector<NodeId>> out_;  // 1-based, index 0 unused
  std::vector<std::vector<NodeId>> in_;
};

/// Outcome of the two path conditions required for bounded dynamics:
/// every interior element must be reachable from at least one inlet, and
/// from every interior element at least one outlet must be reachable.
struct PathReport {
  bool inlet_reachability = false;
  bool outlet_reachability = false;
  std::vector<NodeId> failing_nodes;  // sorted, deduplicated

  bool ok() const { return inlet_reachability && outlet_reachability; }
};

PathReport check_path_conditions(const NoirGraph& g);

enum class ConnectionPattern { Grid, Ring };

/// Parameters for the parametric topology generator. Interior roads are
/// chains of serially-connected elements joined at their ends by a
/// junction pattern; boundary roads attach inlets and outlets to the
/// interior. elements_per_boundary_road counts the elements of each
/// boundary road: the first is the inlet/outlet element itself, any
/// further ones are interior chain elements spliced between it and the
/// interior roads.
struct TopologyParams {
  int interior_road_count = 12;
  int elements_per_interior_road = 4;
  int inlet_road_count = 8;
  int outlet_road_count = 8;
  int elements_per_boundary_road = 1;
  ConnectionPattern pattern = ConnectionPattern::Ring;
};

/// Deterministic for a given (params, seed). The generated graph always
/// satisfies both path conditions of check_path_conditions; road chains are
/// directed, junctions give every road tail at least two downstream choices
/// whenever the road count allows it.
NoirGraph generate_topology(const TopologyParams& p, std::uint64_t seed);

}  // namespace noir
