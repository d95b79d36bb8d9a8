#include "noir/scenario_io.hpp"

#include <fstream>

#include "noir/rng.hpp"

namespace noir {

namespace {

using nlohmann::json;

[[noreturn]] void missing(const std::string& path) {
  fail(ErrorCode::InvalidScenario, path + ": missing required field");
}

const json& require(const json& doc, const std::string& key, const std::string& prefix) {
  auto it = doc.find(key);
  if (it == doc.end()) missing(prefix + key);
  return *it;
}

double number(const json& doc, const std::string& key, const std::string& prefix) {
  const json& v = require(doc, key, prefix);
  if (!v.is_number()) fail(ErrorCode::InvalidScenario, prefix + key + ": expected a number");
  return v.get<double>();
}

int integer(const json& doc, const std::string& key, const std::string& prefix) {
  const json& v = require(doc, key, prefix);
  if (!v.is_number_integer()) {
    fail(ErrorCode::InvalidScenario, prefix + key + ": expected an integer");
  }
  return v.get<int>();
}

bool boolean(const json& doc, const std::string& key, const std::string& prefix) {
  const json& v = require(doc, key, prefix);
  if (!v.is_boolean()) fail(ErrorCode::InvalidScenario, prefix + key + ": expected a boolean");
  return v.get<bool>();
}

NodeId parse_node(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidScenario, where + ": bad node id '" + text + "'");
  }
}

ActionSet parse_actions(const json& doc, const NoirGraph& g) {
  ActionSet set;
  if (doc.is_object() && doc.contains("generate")) {
    const json& gen = doc["generate"];
    ActionGenParams p;
    p.count = integer(gen, "count", "actions.generate.");
    p.outflow_low = number(gen, "outflow_low", "actions.generate.");
    p.outflow_high = number(gen, "outflow_high", "actions.generate.");
    if (gen.contains("shared_outflow")) {
      p.shared_outflow = boolean(gen, "shared_outflow", "actions.generate.");
    }
    const int seed = integer(gen, "seed", "actions.generate.");
    return generate_actions(g, p, static_cast<std::uint64_t>(seed));
  }
  if (!doc.is_array() || doc.empty()) {
    fail(ErrorCode::InvalidScenario,
         "actions: expected a non-empty action array or a generate block");
  }
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string prefix = "actions[" + std::to_string(i) + "].";
    const json& a = doc[i];
    TendencyAction action;
    action.id = integer(a, "id", prefix);
    for (const auto& [key, value] : require(a, "outflow_prob", prefix).items()) {
      action.outflow_prob[parse_node(key, prefix + "outflow_prob")] = value.get<double>();
    }
    // edge keys are written receiver<-sender
    for (const auto& [key, value] : require(a, "tendency_prob", prefix).items()) {
      const auto sep = key.find("<-");
      if (sep == std::string::npos) {
        fail(ErrorCode::InvalidScenario,
             prefix + "tendency_prob: key '" + key + "' is not of the form 'to<-from'");
      }
      const NodeId to = parse_node(key.substr(0, sep), prefix + "tendency_prob");
      const NodeId from = parse_node(key.substr(sep + 2), prefix + "tendency_prob");
      action.tendency_prob[Edge{from, to}] = value.get<double>();
    }
    set.actions.push_back(std::move(action));
  }
  set.validate(g);
  return set;
}

Vector parse_initial_density(const json& doc, const NoirGraph& g, std::uint64_t seed) {
  const std::string prefix = "run.initial_density.";
  if (doc.contains("constant")) {
    return Vector::Constant(g.interior_count(), number(doc, "constant", prefix));
  }
  if (doc.contains("uniform")) {
    const json& range = doc["uniform"];
    if (!range.is_array() || range.size() != 2) {
      fail(ErrorCode::InvalidScenario, prefix + "uniform: expected [low, high]");
    }
    // a dedicated stream keeps the draw independent of the run's noise stream
    Rng rng(seed ^ 0x5DEECE66DULL);
    Vector x(g.interior_count());
    for (int i = 0; i < x.size(); ++i) {
      x[i] = rng.uniform(range[0].get<double>(), range[1].get<double>());
    }
    return x;
  }
  if (doc.contains("values")) {
    const json& values = doc["values"];
    if (!values.is_array() || static_cast<int>(values.size()) != g.interior_count()) {
      fail(ErrorCode::InvalidScenario,
           prefix + "values: expected one entry per interior element");
    }
    Vector x(g.interior_count());
    for (int i = 0; i < x.size(); ++i) x[i] = values[static_cast<std::size_t>(i)].get<double>();
    return x;
  }
  fail(ErrorCode::InvalidScenario, "run.initial_density: expected constant, uniform, or values");
}

}  // namespace

NoirGraph graph_from_json(const json& doc, const std::string& path_prefix) {
  if (doc.contains("topology")) {
    const json& t = doc["topology"];
    const std::string prefix = path_prefix + "topology.";
    TopologyParams p;
    p.interior_road_count = integer(t, "interior_roads", prefix);
    p.elements_per_interior_road = integer(t, "elements_per_interior_road", prefix);
    p.inlet_road_count = integer(t, "inlet_roads", prefix);
    p.outlet_road_count = integer(t, "outlet_roads", prefix);
    if (t.contains("elements_per_boundary_road")) {
      p.elements_per_boundary_road = integer(t, "elements_per_boundary_road", prefix);
    }
    const std::string pattern = require(t, "pattern", prefix).get<std::string>();
    if (pattern == "ring") {
      p.pattern = ConnectionPattern::Ring;
    } else if (pattern == "grid") {
      p.pattern = ConnectionPattern::Grid;
    } else {
      fail(ErrorCode::InvalidScenario, prefix + "pattern: unknown pattern '" + pattern + "'");
    }
    const int seed = integer(t, "seed", prefix);
    return generate_topology(p, static_cast<std::uint64_t>(seed));
  }
  if (doc.contains("explicit")) {
    const json& e = doc["explicit"];
    const std::string prefix = path_prefix + "explicit.";
    std::vector<Edge> edges;
    for (const json& pair : require(e, "edges", prefix)) {
      if (!pair.is_array() || pair.size() != 2) {
        fail(ErrorCode::InvalidScenario, prefix + "edges: entries must be [from, to] pairs");
      }
      edges.push_back(Edge{pair[0].get<int>(), pair[1].get<int>()});
    }
    return NoirGraph::build(edges, integer(e, "n_in", prefix), integer(e, "n_out_end", prefix),
                            integer(e, "n_total", prefix));
  }
  fail(ErrorCode::InvalidScenario, path_prefix + ": expected a topology or explicit block");
}

nlohmann::json graph_to_json(const NoirGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.from, e.to});
  return json{{"n_in", g.n_in()},
              {"n_out_end", g.n_out_end()},
              {"n_total", g.n_total()},
              {"edges", std::move(edges)}};
}

Scenario scenario_from_json(const json& doc) {
  const json& graph_doc = require(doc, "graph", "");
  NoirGraph graph = graph_from_json(graph_doc, "graph.");

  const json& spec_doc = require(doc, "spec", "");
  FeasibilitySpec spec;
  spec.rho_max = number(spec_doc, "rho_max", "spec.");
  spec.u_min = number(spec_doc, "u_min", "spec.");
  spec.u_max = number(spec_doc, "u_max", "spec.");
  spec.u0 = number(spec_doc, "u0", "spec.");
  spec.enforce_phi5 = boolean(spec_doc, "enforce_phi5", "spec.");

  const json& mpc_doc = require(doc, "mpc", "");
  MpcConfig mpc;
  mpc.n_tau = integer(mpc_doc, "horizon", "mpc.");
  mpc.beta = number(mpc_doc, "beta", "mpc.");
  mpc.spec = spec;
  mpc.spec.horizon = mpc.n_tau;
  const std::string fallback = require(mpc_doc, "fallback", "mpc.").get<std::string>();
  if (fallback == "none") {
    mpc.fallback = FallbackPolicy::None;
  } else if (fallback == "relax_phi5") {
    mpc.fallback = FallbackPolicy::RelaxPhi5;
  } else if (fallback == "zero_inflow") {
    mpc.fallback = FallbackPolicy::ZeroInflow;
  } else {
    fail(ErrorCode::InvalidScenario, "mpc.fallback: unknown policy '" + fallback + "'");
  }

  const json& run_doc = require(doc, "run", "");
  Scenario s{.name = doc.value("name", std::string("scenario")),
             .graph = std::move(graph),
             .actions = {},
             .mpc = mpc,
             .true_actions = {},
             .initial_densities = {},
             .steps = integer(run_doc, "steps", "run."),
             .window_length = integer(run_doc, "window", "run."),
             .noise_amplitude = number(run_doc, "noise_amplitude", "run."),
             .seed = static_cast<std::uint64_t>(integer(run_doc, "seed", "run.")),
             .control_mode = ControlMode::Mpc,
             .constant_inflow = {}};

  s.actions = parse_actions(require(doc, "actions", ""), s.graph);
  s.initial_densities =
      parse_initial_density(require(run_doc, "initial_density", "run."), s.graph, s.seed);

  const json& schedule = require(run_doc, "true_actions", "run.");
  if (schedule.contains("constant")) {
    s.true_actions.assign(static_cast<std::size_t>(s.steps),
                          integer(schedule, "constant", "run.true_actions."));
  } else if (schedule.contains("schedule")) {
    for (const json& v : schedule["schedule"]) s.true_actions.push_back(v.get<int>());
  } else {
    fail(ErrorCode::InvalidScenario, "run.true_actions: expected constant or schedule");
  }

  if (run_doc.contains("control")) {
    const json& control = run_doc["control"];
    const std::string mode = require(control, "mode", "run.control.").get<std::string>();
    if (mode == "mpc") {
      s.control_mode = ControlMode::Mpc;
    } else if (mode == "constant") {
      s.control_mode = ControlMode::Constant;
      const json& values = require(control, "values", "run.control.");
      s.constant_inflow = Vector(s.graph.inlet_count());
      if (static_cast<int>(values.size()) != s.graph.inlet_count()) {
        fail(ErrorCode::InvalidScenario, "run.control.values: expected one entry per inlet");
      }
      for (int i = 0; i < s.constant_inflow.size(); ++i) {
        s.constant_inflow[i] = values[static_cast<std::size_t>(i)].get<double>();
      }
    } else {
      fail(ErrorCode::InvalidScenario, "run.control.mode: unknown mode '" + mode + "'");
    }
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidScenario, "cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::InvalidScenario, "scenario parse error: " + std::string(e.what()));
  }
  return scenario_from_json(doc);
}

}  // namespace noir
