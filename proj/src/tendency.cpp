#include "noir/tendency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "noir/rng.hpp"

namespace noir {

namespace {

constexpr double kNormalizationTol = 1e-12;

std::string node_str(NodeId v) { return std::to_string(v); }
std::string edge_str(NodeId from, NodeId to) {
  return std::to_string(from) + "->" + std::to_string(to);
}

}  // namespace

double TendencyAction::outflow(NodeId i) const {
  auto it = outflow_prob.find(i);
  if (it == outflow_prob.end()) {
    fail(ErrorCode::MissingProbability, "no outflow probability for element " + node_str(i));
  }
  return it->second;
}

double TendencyAction::route(NodeId from, NodeId to) const {
  auto it = tendency_prob.find(Edge{from, to});
  if (it == tendency_prob.end()) {
    fail(ErrorCode::MissingProbability, "no tendency probability for edge " + edge_str(from, to));
  }
  return it->second;
}

void validate_action(const NoirGraph& g, const TendencyAction& a) {
  for (NodeId v = 1; v <= g.n_total(); ++v) {
    if (g.is_outlet(v)) continue;
    const double p = a.outflow(v);  // throws when missing
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorCode::NormalizationViolated,
           "outflow probability " + std::to_string(p) + " at element " + node_str(v));
    }
    const auto& outs = g.out_neighbors(v);
    if (outs.empty()) continue;
    double sum = 0.0;
    for (NodeId w : outs) {
      const double q = a.route(v, w);
      if (!(q >= 0.0 && q <= 1.0)) {
        fail(ErrorCode::NormalizationViolated,
             "tendency probability " + std::to_string(q) + " on edge " + edge_str(v, w));
      }
      sum += q;
    }
    if (std::abs(sum - 1.0) > kNormalizationTol) {
      fail(ErrorCode::NormalizationViolated, "tendency probabilities out of element " +
                                                 node_str(v) + " sum to " + std::to_string(sum));
    }
  }
  for (const auto& [edge, q] : a.tendency_prob) {
    (void)q;
    if (!g.has_edge(edge.from, edge.to)) {
      fail(ErrorCode::UnknownEdge,
           "tendency probability given for absent edge " + edge_str(edge.from, edge.to));
    }
  }
}

int ActionSet::index_of(int id) const {
  for (int i = 0; i < size(); ++i) {
    if (actions[i].id == id) return i;
  }
  return -1;
}

const TendencyAction& ActionSet::by_id(int id) const {
  const int idx = index_of(id);
  if (idx < 0) fail(ErrorCode::UnknownAction, "no action with id " + std::to_string(id));
  return actions[idx];
}

void ActionSet::validate(const NoirGraph& g) const {
  if (actions.empty()) fail(ErrorCode::InvalidScenario, "action set is empty");
  for (int i = 0; i < size(); ++i) {
    if (actions[i].id < 1) {
      fail(ErrorCode::InvalidScenario, "action ids must be positive");
    }
    for (int j = i + 1; j < size(); ++j) {
      if (actions[i].id == actions[j].id) {
        fail(ErrorCode::InvalidScenario, "duplicate action id " + std::to_string(actions[i].id));
      }
    }
    validate_action(g, actions[i]);
  }
}

TendencyMatrix assemble_tendency_matrix(const NoirGraph& g, const TendencyAction& a) {
  validate_action(g, a);
  const int n = g.interior_count();

  TendencyMatrix tm;
  tm.action_id = a.id;
  tm.p = Vector::Zero(n);
  tm.q = Matrix::Zero(n, n);
  for (int c = 0; c < n; ++c) {
    const NodeId src = g.interior_node(c);
    tm.p[c] = a.outflow(src);
    for (NodeId dst : g.out_neighbors(src)) {
      if (g.is_interior(dst)) tm.q(g.state_index(dst), c) = a.route(src, dst);
    }
    // route mass toward outlets is absent from q: it simply leaves the system
  }
  tm.a = Matrix::Identity(n, n) - Matrix(tm.p.asDiagonal()) + tm.q * Matrix(tm.p.asDiagonal());
  tm.column_sums = tm.a.colwise().sum();
  tm.spectral_radius = spectral_radius(tm.a, 1e-10, 10000);
  return tm;
}

std::vector<TendencyMatrix> assemble_all(const NoirGraph& g, const ActionSet& actions) {
  std::vector<TendencyMatrix> out;
  out.reserve(actions.actions.size());
  for (const TendencyAction& a : actions.actions) out.push_back(assemble_tendency_matrix(g, a));
  return out;
}

Matrix assemble_b_matrix(const NoirGraph& g) {
  Matrix b = Matrix::Zero(g.interior_count(), g.inlet_count());
  for (int r = 0; r < g.interior_count(); ++r) {
    for (NodeId j : g.in_neighbors(g.interior_node(r))) {
      if (g.is_inlet(j)) b(r, j - 1) = 1.0;
    }
  }
  return b;
}

double spectral_radius(const Matrix& m, double tol, int max_iter) {
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "spectral radius of a non-square matrix");
  if (tol <= 0.0) fail(ErrorCode::InvalidState, "tolerance must be positive");
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;

  const bool nonneg = (m.array() >= 0.0).all();
  Vector v = Vector::Ones(n) / static_cast<double>(n);
  double estimate = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  int stable = 0;

  for (int iter = 0; iter < max_iter; ++iter) {
    Vector w = m * v;
    const double norm = w.cwiseAbs().sum();
    if (norm == 0.0) return 0.0;  // all mass annihilated: nilpotent direction

    if (nonneg && (v.array() > 0.0).all() && (w.array() > 0.0).all()) {
      // Collatz-Wielandt bracket: min/max of (Mv)_i / v_i encloses the
      // dominant eigenvalue for any positive v, so closing it certifies the
      // estimate to tol.
      const auto ratios = w.array() / v.array();
      const double lo = ratios.minCoeff();
      const double hi = ratios.maxCoeff();
      if (hi - lo <= tol * std::max(1.0, hi)) return 0.5 * (lo + hi);
    }

    // fallback for matrices the bracket cannot certify (sign changes,
    // reducible structure): the norm-growth ratio, accepted only after a
    // long stretch of far-below-tol movement
    estimate = norm / v.cwiseAbs().sum();
    if (std::abs(estimate - previous) <= 0.01 * tol * std::max(1.0, estimate)) {
      if (++stable >= 5) return estimate;
    } else {
      stable = 0;
    }
    previous = estimate;
    v = w / norm;
  }
  fail(ErrorCode::NoConvergence,
       "power iteration did not converge in " + std::to_string(max_iter) + " iterations");
}

ActionSet generate_actions(const NoirGraph& g, const ActionGenParams& p, std::uint64_t seed) {
  if (p.count < 1) fail(ErrorCode::InvalidScenario, "action count must be >= 1");
  if (!(p.outflow_low >= 0.0 && p.outflow_low <= p.outflow_high && p.outflow_high <= 1.0)) {
    fail(ErrorCode::InvalidScenario, "outflow probability range must satisfy 0 <= low <= high <= 1");
  }

  Rng rng(seed);
  std::map<NodeId, double> shared;
  if (p.shared_outflow) {
    for (NodeId v = 1; v <= g.n_total(); ++v) {
      if (!g.is_outlet(v)) shared[v] = rng.uniform(p.outflow_low, p.outflow_high);
    }
  }

  ActionSet set;
  for (int l = 1; l <= p.count; ++l) {
    TendencyAction a;
    a.id = l;
    if (p.shared_outflow) {
      a.outflow_prob = shared;
    } else {
      for (NodeId v = 1; v <= g.n_total(); ++v) {
        if (!g.is_outlet(v)) a.outflow_prob[v] = rng.uniform(p.outflow_low, p.outflow_high);
      }
    }
    for (NodeId v = 1; v <= g.n_total(); ++v) {
      if (g.is_outlet(v)) continue;
      const auto& outs = g.out_neighbors(v);
      if (outs.empty()) continue;
      // weights bounded away from zero keep every route usable
      std::vector<double> w(outs.size());
      double sum = 0.0;
      for (double& x : w) {
        x = 0.25 + rng.uniform();
        sum += x;
      }
      for (std::size_t k = 0; k < outs.size(); ++k) a.tendency_prob[Edge{v, outs[k]}] = w[k] / sum;
    }
    set.actions.push_back(std::move(a));
  }
  set.validate(g);
  return set;
}

}  // namespace noir
