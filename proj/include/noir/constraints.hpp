#pragma once

#include <span>
#include <string>
#include <vector>

#include "noir/dynamics.hpp"
#include "noir/graph.hpp"
#include "noir/tendency.hpp"

namespace noir {

/// Operating limits the boundary controller must respect.
struct FeasibilitySpec {
  double rho_max = 45.0;      // per-element capacity, vehicles
  double u_min = 0.0;         // per-inlet admissible box
  double u_max = 20.0;
  double u0 = 20.0;           // total demand per step (the exact-demand target)
  int horizon = 5;            // N_tau
  bool enforce_phi5 = true;   // exact-demand equality on each step

  void validate() const;
};

/// Affine horizon prediction under one held action:
///   x[k+tau] = c[tau] + m[tau] * U,   U = [u[k]; ...; u[k + N_tau - 1]].
/// Index 0 holds the current state (c[0] = x0, m[0] = 0) so constraint
/// compilation can anchor rows at offset zero.
struct AffinePrediction {
  std::vector<Vector> c;  // size horizon + 1
  std::vector<Matrix> m;
  int n_in = 0;
  int horizon = 0;

  int vars() const { return n_in * horizon; }
};

AffinePrediction predict_affine(const TendencyMatrix& tm, const Matrix& b_matrix,
                                const TrafficState& x0, int n_tau);

enum class Condition { Phi1Lower, Phi1Upper, Phi2, Phi3, Phi4Lower, Phi4Upper, Phi5 };

const char* to_string(Condition c);

/// Where a compiled row (or monitor violation) comes from: the condition, the
/// element or edge it guards, and the horizon offset of the constrained
/// quantity.
struct RowProvenance {
  Condition condition = Condition::Phi1Upper;
  NodeId element = 0;    // guarded element; inlet index for Phi4; 0 for Phi5
  NodeId neighbor = 0;   // receiving element for Phi2 edges, else 0
  int offset = 0;        // horizon offset of the constrained quantity

  std::string describe() const;
};

/// Stacked-input constraint system G U <= h, E U = f with full per-row
/// provenance. Density rows quantify offsets 1..N_tau, input rows offsets
/// 0..N_tau-1 (inputs beyond the decision window cannot be constrained).
struct AffineConstraintSet {
  Matrix g;
  Vector h;
  std::vector<RowProvenance> ineq_provenance;
  Matrix e;
  Vector f;
  std::vector<RowProvenance> eq_provenance;

  int vars() const { return static_cast<int>(g.cols()); }
};

/// Compiles the feasibility conditions into affine rows over the stacked
/// input, through the given prediction:
///   Phi1: 0 <= predicted density <= rho_max per interior element,
///   Phi2: per interior-to-interior edge, predicted flow fits the receiver's
///         spare capacity,
///   Phi3: per interior element, predicted total inflow fits its spare
///         capacity,
///   Phi4: per-inlet box on every decided input,
///   Phi5: (optional) inputs of each step sum exactly to u0.
/// Capacities only exist for interior elements, so boundary-element instances
/// of Phi2/Phi3 are not emitted; inlet injections are covered through Phi3.
AffineConstraintSet compile(const FeasibilitySpec& spec, const NoirGraph& g,
                            const TendencyAction& action, const AffinePrediction& prediction);

struct ViolationReport {
  int step = 0;
  Condition condition = Condition::Phi1Upper;
  NodeId element = 0;
  NodeId neighbor = 0;
  double lhs = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // bound - lhs; negative when violated
};

/// Checks the realized trajectory against Phi1-Phi3 (and Phi5 when enabled)
/// at tolerance tol. states holds x[1..K+1]; flows and inputs hold steps
/// 1..K. Returns one report per violated (condition, location, step).
std::vector<ViolationReport> monitor(std::span<const TrafficState> states,
                                     std::span<const FlowRecord> flows,
                                     std::span<const BoundaryInflow> inputs,
                                     const FeasibilitySpec& spec, const NoirGraph& g,
                                     double tol = 1e-7);

}  // namespace noir
