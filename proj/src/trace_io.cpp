#include "noir/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace noir {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

class AtomicFile {
 public:
  AtomicFile(const std::filesystem::path& dir, const std::string& name)
      : final_(dir / name), tmp_(dir / (name + ".tmp")), out_(tmp_) {
    if (!out_) fail(ErrorCode::InvalidState, "cannot write " + tmp_.string());
  }

  ~AtomicFile() {
    out_.close();
    std::error_code ec;
    std::filesystem::rename(tmp_, final_, ec);
  }

  std::ofstream& stream() { return out_; }

 private:
  std::filesystem::path final_;
  std::filesystem::path tmp_;
  std::ofstream out_;
};

}  // namespace

void write_trace(const RunTrace& trace, const Scenario& scenario,
                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const NoirGraph& g = scenario.graph;

  {
    AtomicFile f(dir, "densities.csv");
    f.stream() << "step,element,density\n";
    for (const TrafficState& x : trace.states) {
      for (int r = 0; r < g.interior_count(); ++r) {
        f.stream() << x.step << ',' << g.interior_node(r) << ',' << fmt(x.densities[r]) << '\n';
      }
    }
  }

  {
    AtomicFile f(dir, "inputs.csv");
    f.stream() << "step,inlet,inflow\n";
    for (const StepTrace& st : trace.steps) {
      for (int j = 0; j < g.inlet_count(); ++j) {
        f.stream() << st.step << ',' << j + 1 << ',' << fmt(st.u.inflows[j]) << '\n';
      }
    }
  }

  {
    AtomicFile f(dir, "flows.csv");
    f.stream() << "step,from,to,flow\n";
    for (const StepTrace& st : trace.steps) {
      for (std::size_t e = 0; e < g.flow_edges().size(); ++e) {
        const Edge& edge = g.flow_edges()[e];
        f.stream() << st.step << ',' << edge.from << ',' << edge.to << ','
                   << fmt(st.flows.edge_flows[static_cast<Eigen::Index>(e)]) << '\n';
      }
    }
  }

  {
    AtomicFile f(dir, "elements.csv");
    f.stream() << "step,element,inflow,outflow,boundary_inflow\n";
    for (const StepTrace& st : trace.steps) {
      for (int r = 0; r < g.interior_count(); ++r) {
        f.stream() << st.step << ',' << g.interior_node(r) << ',' << fmt(st.flows.inflow[r])
                   << ',' << fmt(st.flows.outflow[r]) << ','
                   << fmt(st.flows.boundary_inflow[r]) << '\n';
      }
    }
  }

  {
    AtomicFile f(dir, "learner.csv");
    f.stream() << "step,true_action,learned_action,margin";
    for (const TendencyAction& a : scenario.actions.actions) f.stream() << ",cost_" << a.id;
    f.stream() << '\n';
    for (const StepTrace& st : trace.steps) {
      f.stream() << st.step << ',' << st.true_action << ',' << st.learned_action << ','
                 << fmt(st.learn_margin);
      for (const TendencyAction& a : scenario.actions.actions) {
        auto it = st.learn_costs.find(a.id);
        f.stream() << ',' << (it == st.learn_costs.end() ? "" : fmt(it->second));
      }
      f.stream() << '\n';
    }
  }

  {
    AtomicFile f(dir, "controller.csv");
    f.stream() << "step,qp_status,fallback,predicted_cost,realized_stage_cost,descent_gap,"
                  "active_count,active_rows\n";
    for (const StepTrace& st : trace.steps) {
      f.stream() << st.step << ',' << to_string(st.qp_status) << ','
                 << to_string(st.fallback_applied) << ',' << fmt(st.predicted_cost) << ','
                 << fmt(st.realized_stage_cost) << ',' << fmt(st.descent_gap) << ','
                 << st.active_constraints.size() << ',';
      for (std::size_t i = 0; i < st.active_constraints.size(); ++i) {
        f.stream() << (i ? ";" : "") << st.active_constraints[i].describe();
      }
      f.stream() << '\n';
    }
  }

  {
    AtomicFile f(dir, "violations.csv");
    f.stream() << "step,condition,element,neighbor,lhs,bound,slack\n";
    for (const ViolationReport& v : trace.violations) {
      f.stream() << v.step << ',' << to_string(v.condition) << ',' << v.element << ','
                 << v.neighbor << ',' << fmt(v.lhs) << ',' << fmt(v.bound) << ','
                 << fmt(v.slack) << '\n';
    }
  }

  {
    RunSummary s = summarize(trace);
    nlohmann::json doc{{"name", scenario.name},
                       {"steps", s.steps},
                       {"seconds_per_step", kSecondsPerStep},
                       {"steady_state_step", s.steady_state_step},
                       {"steady_state_seconds", s.steady_state_step * kSecondsPerStep},
                       {"peak_density", s.peak_density},
                       {"learner_accuracy", s.learner_accuracy},
                       {"final_total_density", s.final_total_density},
                       {"mean_input_norm", s.mean_input_norm},
                       {"violation_count", s.violation_count},
                       {"aborted", trace.aborted},
                       {"total_density", s.total_density}};
    if (trace.aborted) doc["abort_reason"] = trace.abort_reason;
    AtomicFile f(dir, "summary.json");
    f.stream() << doc.dump(2) << '\n';
  }
}

}  // namespace noir
