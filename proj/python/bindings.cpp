#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "testcalc/behaviors.hpp"
#include "testcalc/graph.hpp"
#include "testcalc/io.hpp"
#include "testcalc/minilang.hpp"
#include "testcalc/proplogic.hpp"
#include "testcalc/statechart.hpp"

namespace py = pybind11;
using namespace testcalc;

namespace {

py::list id_list(const graph::ProgramGraph& g, const std::vector<graph::NodeIndex>& nodes) {
  py::list out;
  for (auto n : nodes) out.append(g.id(n));
  return out;
}

py::list set_list(const behaviors::BehaviorSet& s) {
  py::list out;
  for (const auto& id : s) out.append(id);
  return out;
}

py::dict graph_report(const graph::ProgramGraph& g) {
  const auto m = graph::metrics(g);
  py::dict d;
  d["nodes"] = m.nodes;
  d["edges"] = m.edges;
  d["components"] = m.components;
  d["circuit_rank"] = m.circuit_rank;
  d["mccabe"] = m.mccabe;
  d["sources"] = id_list(g, graph::source_nodes(g));
  d["sinks"] = id_list(g, graph::sink_nodes(g));
  const auto se = graph::single_entry_exit(g);
  d["single_entry_exit"] = se.has_value();
  if (!se) return d;
  d["entry"] = g.id(se->entry);
  d["exit"] = g.id(se->exit);
  d["structured"] = graph::is_structured(g);
  py::list paths;
  for (const auto& p : graph::basis_paths(g)) paths.append(id_list(g, p));
  d["basis_paths"] = paths;
  return d;
}

py::dict analyze_graph(const std::string& text) { return graph_report(graph::parse_graph_text(text)); }

py::dict analyze_source(const std::string& text) {
  const auto program = minilang::parse_program(text);
  auto d = graph_report(minilang::build_program_graph(program));
  const auto c = minilang::count_statements(program);
  py::dict counts;
  counts["assign"] = c.assigns;
  counts["if"] = c.ifs;
  counts["while"] = c.whiles;
  counts["goto"] = c.gotos;
  counts["label"] = c.labels;
  d["statements"] = counts;
  return d;
}

py::tuple truth_table(const std::string& expr, std::size_t max_variables) {
  const auto t = logic::truth_table(logic::parse_expr(expr), logic::TableOptions{max_variables});
  py::list rows;
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    py::list row;
    for (bool b : t.row(r)) row.append(b);
    rows.append(py::tuple(row));
  }
  return py::make_tuple(t.variables(), rows);
}

py::dict decompose(const std::string& expr) {
  const auto d = logic::decompose(logic::parse_expr(expr));
  py::dict out, corr;
  for (const auto& [name, k] : d.correspondence) corr[py::str(name)] = logic::placeholder(k);
  out["elements"] = d.elements;
  out["truth_function"] = logic::to_string(d.truth_function);
  out["correspondence"] = corr;
  return out;
}

bool entails(const std::vector<std::string>& premises, const std::string& conclusion, std::size_t max_variables) {
  std::vector<logic::BoolExpr> parsed;
  for (const auto& p : premises) parsed.push_back(logic::parse_expr(p));
  return logic::entails(parsed, logic::parse_expr(conclusion), logic::TableOptions{max_variables});
}

py::dict classify(const std::string& spt_json) {
  const auto m = io::parse_spt_json(spt_json);
  const auto r = behaviors::classify(m);
  py::dict regions;
  for (int k = 1; k <= 8; ++k) regions[py::int_(k)] = set_list(r.region(k));
  py::dict out;
  out["regions"] = regions;
  out["omission"] = set_list(behaviors::faults_of_omission(m));
  out["commission"] = set_list(behaviors::faults_of_commission(m));
  out["correct_portion"] = set_list(behaviors::correct_portion(m));
  return out;
}

py::dict flatten(const std::string& chart_json) {
  const auto fsm = statechart::flatten(io::parse_chart_json(chart_json));
  py::list transitions;
  for (const auto& t : fsm.transitions()) transitions.append(py::make_tuple(t.src, t.label, t.dst));
  py::dict out;
  out["states"] = fsm.states();
  out["initial"] = fsm.initial();
  out["transitions"] = transitions;
  return out;
}

std::vector<std::string> run_chart(const std::string& chart_json, const std::vector<std::string>& labels) {
  return statechart::run(statechart::flatten(io::parse_chart_json(chart_json)), labels);
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_testcalc, m) {
  m.doc() = "Program graph, propositional logic, behavior set and statechart analysis";

  // Later registrations are tried first, so the base class goes first.
  const auto& error = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", error);
  py::register_exception<AnalysisError>(m, "AnalysisError", error);
  py::register_exception<LimitError>(m, "LimitError", error);

  m.def("analyze_graph", &analyze_graph, py::arg("text"),
        "Metrics, structure and basis paths of a graph in the line-oriented text format.");
  m.def("analyze_source", &analyze_source, py::arg("text"), "Build and analyze the program graph of minilang source.");
  m.def("truth_table", &truth_table, py::arg("expr"), py::arg("max_variables") = 24,
        "Returns (variables, rows); each row is the assignment followed by the result.");
  m.def("decompose", &decompose, py::arg("expr"));
  m.def("entails", &entails, py::arg("premises"), py::arg("conclusion"), py::arg("max_variables") = 24);
  m.def("classify", &classify, py::arg("spt_json"));
  m.def("flatten", &flatten, py::arg("chart_json"));
  m.def("run_chart", &run_chart, py::arg("chart_json"), py::arg("labels"));
  m.def("run_cli", &run_cli, py::arg("args"), "Runs the command-line tool; returns (exit_code, stdout, stderr).");
}
