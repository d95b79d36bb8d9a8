// noirctl: scenario runner and diagnostics for the boundary-control library.
//
// Exit codes: 0 clean, 1 input error, 2 feasibility/validation failure,
// 3 internal failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "noir/constraints.hpp"
#include "noir/mpc.hpp"
#include "noir/scenario_io.hpp"
#include "noir/sim.hpp"
#include "noir/tendency.hpp"
#include "noir/trace_io.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitInput = 1;
constexpr int kExitFeasibility = 2;
constexpr int kExitInternal = 3;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) noir::fail(noir::ErrorCode::InvalidScenario, "cannot open scenario file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    noir::fail(noir::ErrorCode::InvalidScenario, "scenario parse error: " + std::string(e.what()));
  }
}

void dump_matrix(std::ostream& out, const std::string& name, const noir::Matrix& m) {
  out << "section " << name << " rows " << m.rows() << " cols " << m.cols() << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m(r, c);
    out << "\n";
  }
}

void dump_vector(std::ostream& out, const std::string& name, const noir::Vector& v) {
  out << "section " << name << " rows " << v.size() << " cols 1\n";
  for (Eigen::Index r = 0; r < v.size(); ++r) out << v[r] << "\n";
}

// --out falls back to the NOIR_OUT_DIR environment variable.
std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("NOIR_OUT_DIR"); env && *env) return env;
  noir::fail(noir::ErrorCode::InvalidScenario,
             "no output directory: pass --out or set NOIR_OUT_DIR");
}

int cmd_run(const std::string& scenario_path, const std::string& out_flag,
            std::optional<int> seed, std::optional<int> steps) {
  nlohmann::json doc = load_json(scenario_path);
  if (seed) doc["run"]["seed"] = *seed;
  if (steps) doc["run"]["steps"] = *steps;
  noir::Scenario s = noir::scenario_from_json(doc);
  const std::string out_dir = resolve_out_dir(out_flag);

  noir::RunTrace trace = noir::run(s);
  noir::write_trace(trace, s, out_dir);
  noir::RunSummary sum = noir::summarize(trace);

  std::cout << "scenario " << s.name << ": " << sum.steps << " steps\n"
            << "  steady-state step  " << sum.steady_state_step << " ("
            << sum.steady_state_step * noir::kSecondsPerStep << " s at "
            << noir::kSecondsPerStep << " s/step)\n"
            << "  peak density       " << sum.peak_density << "\n"
            << "  learner accuracy   " << sum.learner_accuracy << "\n"
            << "  final total        " << sum.final_total_density << "\n"
            << "  mean solve time    " << sum.mean_solve_seconds * 1e3 << " ms\n"
            << "  violations         " << sum.violation_count << "\n"
            << "trace written to " << out_dir << "\n";
  if (trace.aborted) {
    std::cerr << "run aborted: " << trace.abort_reason << "\n";
    return kExitInternal;
  }
  return trace.violations.empty() ? kExitClean : kExitFeasibility;
}

int cmd_validate(const std::string& scenario_path) {
  noir::Scenario s = noir::scenario_from_json(load_json(scenario_path));
  noir::PathReport paths = noir::check_path_conditions(s.graph);
  std::cout << "graph: " << s.graph.n_total() << " elements (" << s.graph.inlet_count()
            << " inlets, " << s.graph.outlet_count() << " outlets, "
            << s.graph.interior_count() << " interior)\n"
            << "  inlet reachability   " << (paths.inlet_reachability ? "ok" : "FAIL") << "\n"
            << "  outlet reachability  " << (paths.outlet_reachability ? "ok" : "FAIL") << "\n";
  for (noir::NodeId v : paths.failing_nodes) std::cout << "  failing element " << v << "\n";

  bool contracting = true;
  for (const noir::TendencyAction& a : s.actions.actions) {
    try {
      noir::TendencyMatrix tm = noir::assemble_tendency_matrix(s.graph, a);
      const double lo = tm.column_sums.minCoeff();
      const double hi = tm.column_sums.maxCoeff();
      const bool ok = tm.spectral_radius < 1.0 - 1e-9;
      if (!ok) contracting = false;
      std::cout << "action " << a.id << ": spectral radius " << tm.spectral_radius
                << (ok ? "" : "  ** not contracting **") << ", column sums [" << lo << ", "
                << hi << "]\n";
    } catch (const noir::Error& e) {
      contracting = false;
      std::cout << "action " << a.id << ": " << e.what() << "\n";
    }
  }
  return (paths.ok() && contracting) ? kExitClean : kExitFeasibility;
}

int cmd_sweep(const std::string& scenario_path, const std::string& vary,
              const std::vector<double>& values, const std::string& out_flag) {
  if (values.empty()) noir::fail(noir::ErrorCode::InvalidScenario, "sweep needs at least one value");
  const std::string out_dir = resolve_out_dir(out_flag);
  nlohmann::json base = load_json(scenario_path);

  std::filesystem::create_directories(out_dir);
  std::ostringstream table;
  table << "value,completed,steady_state_step,peak_density,learner_accuracy,"
           "final_total_density,mean_input_norm,violations\n";

  bool all_clean = true;
  for (double value : values) {
    nlohmann::json doc = base;
    if (vary == "beta") {
      doc["mpc"]["beta"] = value;
    } else if (vary == "n_tau") {
      doc["mpc"]["horizon"] = static_cast<int>(value);
    } else if (vary == "u0") {
      doc["spec"]["u0"] = value;
    } else {
      noir::fail(noir::ErrorCode::InvalidScenario, "--vary must be beta, n_tau, or u0");
    }

    std::ostringstream label;
    label << vary << "=" << value;
    try {
      noir::Scenario s = noir::scenario_from_json(doc);
      noir::RunTrace trace = noir::run(s);
      noir::write_trace(trace, s, std::filesystem::path(out_dir) / label.str());
      noir::RunSummary sum = noir::summarize(trace);
      if (!trace.violations.empty() || trace.aborted) all_clean = false;
      table << value << ',' << (trace.aborted ? 0 : 1) << ',' << sum.steady_state_step << ','
            << sum.peak_density << ',' << sum.learner_accuracy << ','
            << sum.final_total_density << ',' << sum.mean_input_norm << ','
            << sum.violation_count << "\n";
    } catch (const std::exception& e) {
      all_clean = false;
      std::cerr << label.str() << " failed: " << e.what() << "\n";
      table << value << ",0,,,,,,\n";
    }
  }

  std::ofstream out(std::filesystem::path(out_dir) / "sweep.csv");
  out << table.str();
  std::cout << table.str();
  return all_clean ? kExitClean : kExitFeasibility;
}

int cmd_dump_constraints(const std::string& scenario_path, const std::string& out_path) {
  noir::Scenario s = noir::scenario_from_json(load_json(scenario_path));
  int action_id = s.actions.actions.front().id;
  for (const noir::TendencyAction& a : s.actions.actions) action_id = std::min(action_id, a.id);

  const noir::TendencyAction& action = s.actions.by_id(action_id);
  noir::TendencyMatrix tm = noir::assemble_tendency_matrix(s.graph, action);
  noir::Matrix b = noir::assemble_b_matrix(s.graph);
  noir::TrafficState x0{s.initial_densities, 1};
  noir::AffinePrediction pred = noir::predict_affine(tm, b, x0, s.mpc.n_tau);
  noir::AffineConstraintSet cons = noir::compile(s.mpc.spec, s.graph, action, pred);
  noir::QuadraticCost cost = noir::build_cost(pred, s.mpc.beta);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) noir::fail(noir::ErrorCode::InvalidScenario, "cannot write " + out_path);
    out = &file;
  }
  *out << "# constraint and cost dump: scenario " << s.name << ", action " << action_id
       << ", horizon " << s.mpc.n_tau << "\n";
  dump_matrix(*out, "H", cost.H);
  dump_vector(*out, "g", cost.g);
  dump_matrix(*out, "G", cons.g);
  dump_vector(*out, "h", cons.h);
  dump_matrix(*out, "E", cons.e);
  dump_vector(*out, "f", cons.f);
  *out << "section provenance_ineq rows " << cons.ineq_provenance.size() << "\n";
  for (const noir::RowProvenance& p : cons.ineq_provenance) *out << p.describe() << "\n";
  *out << "section provenance_eq rows " << cons.eq_provenance.size() << "\n";
  for (const noir::RowProvenance& p : cons.eq_provenance) *out << p.describe() << "\n";
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven traffic boundary control: scenario runner and diagnostics"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, vary, dump_out;
  std::optional<int> seed, steps;
  std::vector<double> values;

  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario and write its trace");
  run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (default: NOIR_OUT_DIR)");
  run_cmd->add_option("--seed", seed, "Override run.seed");
  run_cmd->add_option("--steps", steps, "Override run.steps");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check path conditions and per-action spectral radii");
  validate_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run the scenario across parameter values");
  sweep_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  sweep_cmd->add_option("--vary", vary, "Parameter: beta, n_tau, or u0")->required();
  sweep_cmd->add_option("--values", values, "Values to sweep")->required()->delimiter(',');
  sweep_cmd->add_option("--out", out_dir, "Output directory (default: NOIR_OUT_DIR)");

  CLI::App* dump_cmd = app.add_subcommand(
      "dump-constraints", "Write the compiled constraint system at the initial state");
  dump_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  dump_cmd->add_option("--out", dump_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitClean : kExitInput;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(scenario_path, out_dir, seed, steps);
    if (validate_cmd->parsed()) return cmd_validate(scenario_path);
    if (sweep_cmd->parsed()) return cmd_sweep(scenario_path, vary, values, out_dir);
    if (dump_cmd->parsed()) return cmd_dump_constraints(scenario_path, dump_out);
    return kExitInput;
  } catch (const noir::Error& e) {
    const bool input_error = e.code() == noir::ErrorCode::InvalidScenario ||
                             e.code() == noir::ErrorCode::InfeasibleParams ||
                             e.code() == noir::ErrorCode::InfeasibleBox;
    std::cerr << "error: " << e.what() << "\n";
    return input_error ? kExitInput : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
