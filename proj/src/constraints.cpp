#include "noir/constraints.hpp"

#include <cmath>
#include <string>

namespace noir {

void FeasibilitySpec::validate() const {
  if (!(rho_max > 0.0)) fail(ErrorCode::InvalidScenario, "rho_max must be positive");
  if (u_min < 0.0) fail(ErrorCode::InvalidScenario, "u_min must be nonnegative");
  if (u_min > u_max) {
    fail(ErrorCode::InfeasibleBox, "u_min " + std::to_string(u_min) + " exceeds u_max " +
                                       std::to_string(u_max));
  }
  if (u0 < 0.0) fail(ErrorCode::InvalidScenario, "u0 must be nonnegative");
  if (horizon < 1) fail(ErrorCode::InvalidScenario, "horizon must be >= 1");
}

const char* to_string(Condition c) {
  switch (c) {
    case Condition::Phi1Lower: return "Phi1Lower";
    case Condition::Phi1Upper: return "Phi1Upper";
    case Condition::Phi2: return "Phi2";
    case Condition::Phi3: return "Phi3";
    case Condition::Phi4Lower: return "Phi4Lower";
    case Condition::Phi4Upper: return "Phi4Upper";
    case Condition::Phi5: return "Phi5";
  }
  return "Unknown";
}

std::string RowProvenance::describe() const {
  std::string s = to_string(condition);
  if (condition == Condition::Phi2) {
    s += " edge " + std::to_string(element) + "->" + std::to_string(neighbor);
  } else if (condition != Condition::Phi5) {
    s += " element " + std::to_string(element);
  }
  s += " offset " + std::to_string(offset);
  return s;
}

AffinePrediction predict_affine(const TendencyMatrix& tm, const Matrix& b_matrix,
                                const TrafficState& x0, int n_tau) {
  const Eigen::Index n = tm.a.rows();
  if (x0.densities.size() != n || b_matrix.rows() != n) {
    fail(ErrorCode::DimensionMismatch, "prediction inputs do not agree");
  }
  if (n_tau < 1) fail(ErrorCode::InvalidScenario, "horizon must be >= 1");

  AffinePrediction pred;
  pred.n_in = static_cast<int>(b_matrix.cols());
  pred.horizon = n_tau;
  pred.c.resize(n_tau + 1);
  pred.m.resize(n_tau + 1);
  pred.c[0] = x0.densities;
  pred.m[0] = Matrix::Zero(n, static_cast<Eigen::Index>(pred.vars()));
  for (int tau = 1; tau <= n_tau; ++tau) {
    pred.c[tau] = tm.a * pred.c[tau - 1];
    pred.m[tau] = tm.a * pred.m[tau - 1];
    pred.m[tau].middleCols(static_cast<Eigen::Index>(tau - 1) * pred.n_in, pred.n_in) += b_matrix;
  }
  return pred;
}

namespace {

// Row-wise accumulation keeps compile readable; matrices are assembled once
// at the end.
struct RowAccumulator {
  std::vector<Vector> rows;
  std::vector<double> rhs;
  std::vector<RowProvenance> provenance;

  void add(Vector row, double bound, RowProvenance prov) {
    rows.push_back(std::move(row));
    rhs.push_back(bound);
    provenance.push_back(prov);
  }

  void fill(Matrix& m, Vector& v, int vars) const {
    m = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), vars);
    v = Vector::Zero(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      m.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
      v[static_cast<Eigen::Index>(r)] = rhs[r];
    }
  }
};

}  // namespace

AffineConstraintSet compile(const FeasibilitySpec& spec, const NoirGraph& g,
                            const TendencyAction& action, const AffinePrediction& prediction) {
  spec.validate();
  if (prediction.horizon != spec.horizon) {
    fail(ErrorCode::DimensionMismatch, "prediction horizon does not match the feasibility spec");
  }
  if (prediction.n_in != g.inlet_count()) {
    fail(ErrorCode::DimensionMismatch, "prediction inlet count does not match the graph");
  }

  const int n_tau = spec.horizon;
  const int n_in = g.inlet_count();
  const int vars = prediction.vars();
  const Matrix b = assemble_b_matrix(g);

  RowAccumulator ineq, eq;

  // Phi1: predicted densities stay inside [0, rho_max].
  for (int tau = 1; tau <= n_tau; ++tau) {
    for (int r = 0; r < g.interior_count(); ++r) {
      const NodeId node = g.interior_node(r);
      ineq.add(prediction.m[tau].row(r).transpose(), spec.rho_max - prediction.c[tau][r],
               {Condition::Phi1Upper, node, 0, tau});
      ineq.add(-prediction.m[tau].row(r).transpose(), prediction.c[tau][r],
               {Condition::Phi1Lower, node, 0, tau});
    }
  }

  // Phi2: each interior-to-interior edge flow fits the receiver's spare
  // capacity. Offset-0 instances depend only on the current state and are
  // left to the monitor.
  for (int h = 1; h <= n_tau; ++h) {
    for (const Edge& edge : g.flow_edges()) {
      if (!g.is_interior(edge.to)) continue;
      const int src = g.state_index(edge.from);
      const int dst = g.state_index(edge.to);
      const double share = action.route(edge.from, edge.to) * action.outflow(edge.from);
      Vector row = (share * prediction.m[h].row(src) + prediction.m[h].row(dst)).transpose();
      const double bound = spec.rho_max - share * prediction.c[h][src] - prediction.c[h][dst];
      ineq.add(std::move(row), bound, {Condition::Phi2, edge.from, edge.to, h});
    }
  }

  // Phi3: predicted total inflow of each interior element fits its spare
  // capacity. The inflow at offset h consumes u[k+h], so offsets run to
  // n_tau - 1.
  for (int h = 0; h < n_tau; ++h) {
    for (int r = 0; r < g.interior_count(); ++r) {
      const NodeId node = g.interior_node(r);
      Vector row = prediction.m[h].row(r).transpose();  // receiver density
      double bound = spec.rho_max - prediction.c[h][r];
      for (NodeId j : g.in_neighbors(node)) {
        if (!g.is_interior(j)) continue;
        const int sender = g.state_index(j);
        const double share = action.route(j, node) * action.outflow(j);
        row += share * prediction.m[h].row(sender).transpose();
        bound -= share * prediction.c[h][sender];
      }
      row.segment(static_cast<Eigen::Index>(h) * n_in, n_in) += b.row(r).transpose();
      ineq.add(std::move(row), bound, {Condition::Phi3, node, 0, h});
    }
  }

  // Phi4: admissible box on every decided input.
  for (int h = 0; h < n_tau; ++h) {
    for (int j = 0; j < n_in; ++j) {
      Vector row = Vector::Zero(vars);
      row[static_cast<Eigen::Index>(h) * n_in + j] = 1.0;
      ineq.add(row, spec.u_max, {Condition::Phi4Upper, j + 1, 0, h});
      ineq.add(-row, -spec.u_min, {Condition::Phi4Lower, j + 1, 0, h});
    }
  }

  // Phi5: inputs of each step sum exactly to the demand.
  if (spec.enforce_phi5) {
    for (int h = 0; h < n_tau; ++h) {
      Vector row = Vector::Zero(vars);
      row.segment(static_cast<Eigen::Index>(h) * n_in, n_in).setOnes();
      eq.add(row, spec.u0, {Condition::Phi5, 0, 0, h});
    }
  }

  AffineConstraintSet set;
  ineq.fill(set.g, set.h, vars);
  set.ineq_provenance = std::move(ineq.provenance);
  eq.fill(set.e, set.f, vars);
  set.eq_provenance = std::move(eq.provenance);
  return set;
}

std::vector<ViolationReport> monitor(std::span<const TrafficState> states,
                                     std::span<const FlowRecord> flows,
                                     std::span<const BoundaryInflow> inputs,
                                     const FeasibilitySpec& spec, const NoirGraph& g, double tol) {
  spec.validate();
  if (states.empty() || flows.size() + 1 != states.size() || inputs.size() != flows.size()) {
    fail(ErrorCode::DimensionMismatch, "trajectory spans do not line up");
  }

  std::vector<ViolationReport> reports;
  auto check = [&](int step, Condition cond, NodeId element, NodeId neighbor, double lhs,
                   double bound) {
    const double slack = bound - lhs;
    if (slack < -tol) reports.push_back({step, cond, element, neighbor, lhs, bound, slack});
  };

  for (const TrafficState& x : states) {
    for (int r = 0; r < g.interior_count(); ++r) {
      const NodeId node = g.interior_node(r);
      check(x.step, Condition::Phi1Upper, node, 0, x.densities[r], spec.rho_max);
      // lower bound: lhs is the negated density so slack = density
      check(x.step, Condition::Phi1Lower, node, 0, -x.densities[r], 0.0);
    }
  }

  for (std::size_t k = 0; k < flows.size(); ++k) {
    const TrafficState& x = states[k];
    const FlowRecord& rec = flows[k];
    for (std::size_t e = 0; e < g.flow_edges().size(); ++e) {
      const Edge& edge = g.flow_edges()[e];
      if (!g.is_interior(edge.to)) continue;
      const double capacity = spec.rho_max - x.densities[g.state_index(edge.to)];
      check(rec.step, Condition::Phi2, edge.from, edge.to,
            rec.edge_flows[static_cast<Eigen::Index>(e)], capacity);
    }
    for (int r = 0; r < g.interior_count(); ++r) {
      const double capacity = spec.rho_max - x.densities[r];
      check(rec.step, Condition::Phi3, g.interior_node(r), 0, rec.inflow[r], capacity);
    }
    if (spec.enforce_phi5) {
      const double total = inputs[k].inflows.sum();
      const double gap = std::abs(total - spec.u0);
      if (gap > tol) {
        reports.push_back({rec.step, Condition::Phi5, 0, 0, total, spec.u0, -gap});
      }
    }
  }
  return reports;
}

}  // namespace noir
