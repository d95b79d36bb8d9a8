#include "noir/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>

#include "noir/rng.hpp"

namespace noir {

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.from) + ", " + std::to_string(e.to) + ")";
}

}  // namespace

NoirGraph NoirGraph::build(std::vector<Edge> edges, int n_in, int n_out_end, int n_total) {
  if (n_total < 1 || n_in < 0 || n_in > n_out_end || n_out_end > n_total) {
    fail(ErrorCode::IndexOutOfRange,
         "partition bounds must satisfy 0 <= n_in <= n_out_end <= n_total, got n_in=" +
             std::to_string(n_in) + " n_out_end=" + std::to_string(n_out_end) +
             " n_total=" + std::to_string(n_total));
  }

  NoirGraph g;
  g.n_in_ = n_in;
  g.n_out_end_ = n_out_end;
  g.n_total_ = n_total;

  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.from < 1 || e.from > n_total || e.to < 1 || e.to > n_total) {
      fail(ErrorCode::IndexOutOfRange, "edge " + edge_str(e) + " outside 1.." + std::to_string(n_total));
    }
    if (e.from == e.to) fail(ErrorCode::SelfLoop, "edge " + edge_str(e));
    if (i > 0 && edges[i - 1] == e) fail(ErrorCode::DuplicateEdge, "edge " + edge_str(e));
    if (g.is_outlet(e.from)) {
      fail(ErrorCode::EdgeFromOutlet, "outlet " + std::to_string(e.from) + " has out-neighbor " +
                                          std::to_string(e.to));
    }
    if (g.is_inlet(e.to)) {
      fail(ErrorCode::EdgeToInlet,
           "inlet " + std::to_string(e.to) + " has in-neighbor " + std::to_string(e.from));
    }
  }

  g.edges_ = std::move(edges);
  g.out_.assign(n_total + 1, {});
  g.in_.assign(n_total + 1, {});
  for (const Edge& e : g.edges_) {
    g.out_[e.from].push_back(e.to);
    g.in_[e.to].push_back(e.from);
    if (g.is_interior(e.from)) g.flow_edges_.push_back(e);
  }
  for (auto& v : g.out_) std::sort(v.begin(), v.end());
  for (auto& v : g.in_) std::sort(v.begin(), v.end());
  return g;
}

NodeKind NoirGraph::kind(NodeId v) const {
  check_node(v);
  if (v <= n_in_) return NodeKind::Inlet;
  if (v <= n_out_end_) return NodeKind::Outlet;
  return NodeKind::Interior;
}

const std::vector<NodeId>& NoirGraph::out_neighbors(NodeId v) const {
  check_node(v);
  return out_[v];
}

const std::vector<NodeId>& NoirGraph::in_neighbors(NodeId v) const {
  check_node(v);
  return in_[v];
}

bool NoirGraph::has_edge(NodeId from, NodeId to) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

int NoirGraph::flow_edge_index(NodeId from, NodeId to) const {
  auto it = std::lower_bound(flow_edges_.begin(), flow_edges_.end(), Edge{from, to});
  if (it == flow_edges_.end() || !(*it == Edge{from, to})) return -1;
  return static_cast<int>(it - flow_edges_.begin());
}

void NoirGraph::check_node(NodeId v) const {
  if (v < 1 || v > n_total_) {
    fail(ErrorCode::IndexOutOfRange,
         "node " + std::to_string(v) + " outside 1.." + std::to_string(n_total_));
  }
}

PathReport check_path_conditions(const NoirGraph& g) {
  const int n = g.n_total();
  std::vector<char> from_inlet(n + 1, 0), to_outlet(n + 1, 0);

  // Forward sweep from all inlets.
  std::deque<NodeId> queue;
  for (NodeId v = 1; v <= g.n_in(); ++v) {
    from_inlet[v] = 1;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : g.out_neighbors(v)) {
      if (!from_inlet[w]) {
        from_inlet[w] = 1;
        queue.push_back(w);
      }
    }
  }

  // Backward sweep from all outlets.
  for (NodeId v = g.n_in() + 1; v <= g.n_out_end(); ++v) {
    to_outlet[v] = 1;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : g.in_neighbors(v)) {
      if (!to_outlet[w]) {
        to_outlet[w] = 1;
        queue.push_back(w);
      }
    }
  }

  PathReport report;
  report.inlet_reachability = true;
  report.outlet_reachability = true;
  std::set<NodeId> failing;
  for (NodeId v = g.n_out_end() + 1; v <= g.n_total(); ++v) {
    if (!from_inlet[v]) {
      report.inlet_reachability = false;
      failing.insert(v);
    }
    if (!to_outlet[v]) {
      report.outlet_reachability = false;
      failing.insert(v);
    }
  }
  report.failing_nodes.assign(failing.begin(), failing.end());
  return report;
}

namespace {

// Road chains for the generator: per road, the node ids of its serially
// connected elements in travel order.
struct RoadLayout {
  std::vector<std::vector<NodeId>> roads;
  NodeId head(int r) const { return roads[r].front(); }
  NodeId tail(int r) const { return roads[r].back(); }
};

}  // namespace

NoirGraph generate_topology(const TopologyParams& p, std::uint64_t seed) {
  if (p.interior_road_count < 1 || p.elements_per_interior_road < 1 || p.inlet_road_count < 1 ||
      p.outlet_road_count < 1 || p.elements_per_boundary_road < 1) {
    fail(ErrorCode::InfeasibleParams, "all topology counts must be >= 1");
  }

  const int roads = p.interior_road_count;
  const int per_road = p.elements_per_interior_road;
  const int n_in = p.inlet_road_count;
  const int n_out = p.outlet_road_count;
  const int stub_len = p.elements_per_boundary_road - 1;  // interior elements per boundary road
  const int n_out_end = n_in + n_out;
  const int n_total = n_out_end + roads * per_road + stub_len * (n_in + n_out);

  RoadLayout layout;
  layout.roads.resize(roads);
  NodeId next = n_out_end + 1;
  for (int r = 0; r < roads; ++r) {
    for (int e = 0; e < per_road; ++e) layout.roads[r].push_back(next++);
  }

  std::set<Edge> edges;
  auto add = [&edges](NodeId from, NodeId to) {
    if (from != to) edges.insert(Edge{from, to});
  };

  // Serial chain inside every interior road.
  for (int r = 0; r < roads; ++r) {
    for (std::size_t e = 0; e + 1 < layout.roads[r].size(); ++e) {
      add(layout.roads[r][e], layout.roads[r][e + 1]);
    }
  }

  // Junctions between road tails and road heads.
  Rng rng(seed);
  if (p.pattern == ConnectionPattern::Ring) {
    for (int r = 0; r < roads && roads >= 2; ++r) {
      const int succ = (r + 1) % roads;
      add(layout.tail(r), layout.head(succ));
      if (roads >= 3) {
        // A seeded chord gives each junction a second downstream choice.
        int chord = static_cast<int>(rng.below(static_cast<std::uint64_t>(roads)));
        while (chord == r || chord == succ) chord = (chord + 1) % roads;
        add(layout.tail(r), layout.head(chord));
      }
    }
  } else {  // Grid: roads laid out row-major on a wrapped rectangle.
    const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(roads)))));
    auto row_size = [&](int i) { return std::min(cols, roads - i * cols); };
    for (int r = 0; r < roads; ++r) {
      const int i = r / cols, j = r % cols;
      const int right = i * cols + (j + 1) % row_size(i);
      if (right != r) add(layout.tail(r), layout.head(right));
      int down = (i + 1) * cols + j;
      if (down >= roads) down = j % row_size(0);
      if (down != r) add(layout.tail(r), layout.head(down));
    }
  }

  // Boundary roads. Inlet/outlet stubs are interior chain elements spliced
  // between the boundary element and the interior roads.
  NodeId stub_next = static_cast<NodeId>(n_out_end + roads * per_road + 1);
  for (int t = 0; t < n_in; ++t) {
    const NodeId inlet = t + 1;
    const int target_road = static_cast<int>(static_cast<long long>(t) * roads / n_in);
    NodeId prev = inlet;
    for (int s = 0; s < stub_len; ++s) {
      add(prev, stub_next);
      prev = stub_next++;
    }
    add(prev, layout.head(target_road));
  }
  for (int t = 0; t < n_out; ++t) {
    const NodeId outlet = n_in + t + 1;
    const int source_road = static_cast<int>(static_cast<long long>(t) * roads / n_out);
    NodeId prev = layout.tail(source_road);
    for (int s = 0; s < stub_len; ++s) {
      add(prev, stub_next);
      prev = stub_next++;
    }
    add(prev, outlet);
  }

  NoirGraph g = NoirGraph::build(std::vector<Edge>(edges.begin(), edges.end()), n_in, n_out_end,
                                 n_total);
  if (!check_path_conditions(g).ok()) {
    fail(ErrorCode::InfeasibleParams, "generated topology violates the path conditions");
  }
  return g;
}

}  // namespace noir
