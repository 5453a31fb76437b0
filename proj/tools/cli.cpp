#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "testcalc/behaviors.hpp"
#include "testcalc/graph.hpp"
#include "testcalc/io.hpp"
#include "testcalc/minilang.hpp"
#include "testcalc/proplogic.hpp"
#include "testcalc/statechart.hpp"

namespace testcalc::cli {

namespace {

using json = nlohmann::ordered_json;

enum class Format { Text, Json, Dot };

struct Options {
  Format format = Format::Text;
  std::string out_path;
};

class UsageError : public InputError {
 public:
  using InputError::InputError;
};

std::string join(const std::vector<std::string>& items, std::string_view sep = " ") {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

std::string braces(const behaviors::BehaviorSet& s) {
  return "{" + join({s.begin(), s.end()}, ", ") + "}";
}

json to_json(const behaviors::BehaviorSet& s) { return json(std::vector<std::string>(s.begin(), s.end())); }

std::vector<std::string> names(const graph::ProgramGraph& g, const std::vector<graph::NodeIndex>& nodes) {
  std::vector<std::string> out;
  for (auto n : nodes) out.push_back(g.id(n));
  return out;
}

void require_no_dot(const Options& o, std::string_view command) {
  if (o.format == Format::Dot) throw UsageError("--format dot is not available for '" + std::string(command) + "'");
}

// ---------------------------------------------------------------------------
// Graph reports, shared by `graph` and `src`.

struct GraphFacts {
  graph::GraphMetrics metrics;
  std::vector<std::vector<std::string>> components;
  std::vector<std::string> sources, sinks;
  std::optional<graph::EntryExit> se;
  std::optional<graph::StructureReport> structure;
  std::vector<graph::Path> basis;
};

GraphFacts analyze(const graph::ProgramGraph& g) {
  GraphFacts f;
  f.metrics = graph::metrics(g);
  for (const auto& c : graph::connected_components(g)) f.components.push_back(names(g, c));
  f.sources = names(g, graph::source_nodes(g));
  f.sinks = names(g, graph::sink_nodes(g));
  f.se = graph::single_entry_exit(g);
  if (f.se) {
    f.structure = graph::reduce_structure(g);
    f.basis = graph::basis_paths(g);
  }
  return f;
}

void graph_text(const graph::ProgramGraph& g, const GraphFacts& f, std::ostream& os) {
  os << "nodes: " << f.metrics.nodes << "\n"
     << "edges: " << f.metrics.edges << "\n"
     << "components: " << f.metrics.components << "\n"
     << "circuit_rank: " << f.metrics.circuit_rank << "\n"
     << "mccabe: " << f.metrics.mccabe << "\n"
     << "sources: " << join(f.sources) << "\n"
     << "sinks: " << join(f.sinks) << "\n"
     << "single_entry_exit: " << (f.se ? "true" : "false") << "\n";
  if (!f.se) return;
  os << "entry: " << g.id(f.se->entry) << "\n"
     << "exit: " << g.id(f.se->exit) << "\n"
     << "structured: " << (f.structure->structured ? "true" : "false") << "\n"
     << "reductions: " << f.structure->trace.size() << "\n";
  for (const auto& c : f.structure->trace)
    os << "  " << graph::to_string(c.kind) << " " << c.into << " <- " << join(c.absorbed) << "\n";
  if (!f.structure->structured) {
    os << "residual:\n";
    std::istringstream lines(graph::to_graph_text(f.structure->residual));
    for (std::string line; std::getline(lines, line);) os << "  " << line << "\n";
  }
  os << "basis_paths: " << f.basis.size() << "\n";
  for (std::size_t i = 0; i < f.basis.size(); ++i) os << "  " << i + 1 << ": " << join(names(g, f.basis[i])) << "\n";
}

json graph_json(const graph::ProgramGraph& g, const GraphFacts& f) {
  json j;
  j["nodes"] = f.metrics.nodes;
  j["edges"] = f.metrics.edges;
  j["components"] = f.metrics.components;
  j["circuit_rank"] = f.metrics.circuit_rank;
  j["mccabe"] = f.metrics.mccabe;
  j["component_sets"] = f.components;
  j["sources"] = f.sources;
  j["sinks"] = f.sinks;
  j["single_entry_exit"] = f.se.has_value();
  if (!f.se) return j;
  j["entry"] = g.id(f.se->entry);
  j["exit"] = g.id(f.se->exit);
  j["structured"] = f.structure->structured;
  json trace = json::array();
  for (const auto& c : f.structure->trace)
    trace.push_back({{"kind", graph::to_string(c.kind)}, {"into", c.into}, {"absorbed", c.absorbed}});
  j["reductions"] = trace;
  if (!f.structure->structured) j["residual"] = graph::to_graph_text(f.structure->residual);
  json paths = json::array();
  for (const auto& p : f.basis) paths.push_back(names(g, p));
  j["basis_paths"] = paths;
  return j;
}

// ---------------------------------------------------------------------------
// Commands. Each returns the report text.

std::string cmd_graph(const Options& o, const std::string& path, bool require_sese) {
  const auto g = graph::parse_graph_text(io::read_file(path));
  if (require_sese && !graph::is_single_entry_single_exit(g))
    throw graph::NotSingleEntryExit("'" + path + "'");
  if (o.format == Format::Dot) return graph::to_dot(g);
  const auto facts = analyze(g);
  if (o.format == Format::Json) return graph_json(g, facts).dump(2) + "\n";
  std::ostringstream os;
  graph_text(g, facts, os);
  return os.str();
}

std::string cmd_src(const Options& o, const std::string& path, bool emit_graph, bool dot) {
  const auto program = minilang::parse_program(io::read_file(path));
  const auto g = minilang::build_program_graph(program);
  if (emit_graph && (dot || o.format == Format::Dot)) throw UsageError("choose one of --emit-graph and --dot");
  if (emit_graph) return graph::to_graph_text(g);
  if (dot || o.format == Format::Dot) return graph::to_dot(g);

  const auto counts = minilang::count_statements(program);
  const auto facts = analyze(g);
  if (o.format == Format::Json) {
    json j;
    j["statements"] = {{"assign", counts.assigns}, {"if", counts.ifs},         {"while", counts.whiles},
                       {"goto", counts.gotos},     {"label", counts.labels}};
    const json body = graph_json(g, facts);
    for (const auto& [k, v] : body.items()) j[k] = v;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "statements: assign=" << counts.assigns << " if=" << counts.ifs << " while=" << counts.whiles
     << " goto=" << counts.gotos << " label=" << counts.labels << "\n";
  graph_text(g, facts, os);
  return os.str();
}

std::vector<std::string> expression_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(line);
  }
  return out;
}

std::string tf(bool b) { return b ? "T" : "F"; }

std::string cmd_logic(const Options& o, const std::string& inline_expr, const std::string& file, bool table,
                      bool decomp, const std::string& premises_file, std::size_t max_vars) {
  require_no_dot(o, "logic");
  if (!inline_expr.empty() && !file.empty()) throw UsageError("give the expression inline or with --file, not both");
  if (inline_expr.empty() && file.empty()) throw UsageError("no expression given");
  if (static_cast<int>(table) + static_cast<int>(decomp) + static_cast<int>(!premises_file.empty()) > 1)
    throw UsageError("choose one of --table, --decompose, --entails");

  const std::string source = file.empty() ? inline_expr : join(expression_lines(io::read_file(file)), "\n");
  const auto expr = logic::parse_expr(source);
  const logic::TableOptions opts{max_vars};

  if (!premises_file.empty()) {
    std::vector<logic::BoolExpr> premises;
    for (const auto& line : expression_lines(io::read_file(premises_file))) premises.push_back(logic::parse_expr(line));
    const auto cex = logic::find_counterexample(premises, expr, opts);
    if (o.format == Format::Json) {
      json j;
      j["premises"] = json::array();
      for (const auto& p : premises) j["premises"].push_back(logic::to_string(p));
      j["conclusion"] = logic::to_string(expr);
      j["entailed"] = !cex.has_value();
      if (cex) {
        json c = json::object();
        for (std::size_t k = 0; k < cex->variables.size(); ++k) c[cex->variables[k]] = static_cast<bool>(cex->values[k]);
        j["counterexample"] = c;
      } else {
        j["counterexample"] = nullptr;
      }
      return j.dump(2) + "\n";
    }
    if (!cex) return "ENTAILED\n";
    std::vector<std::string> parts;
    for (std::size_t k = 0; k < cex->variables.size(); ++k) parts.push_back(cex->variables[k] + "=" + tf(cex->values[k]));
    return "NOT ENTAILED\ncounterexample: " + join(parts) + "\n";
  }

  if (decomp) {
    const auto d = logic::decompose(expr);
    std::vector<std::string> placeholders, pairs;
    for (std::size_t k = 1; k <= d.elements.size(); ++k) placeholders.push_back(logic::placeholder(k));
    for (const auto& e : d.elements) pairs.push_back("(" + e + ", " + logic::placeholder(d.correspondence.at(e)) + ")");
    const auto fn = logic::to_string(d.truth_function, logic::Parens::Full);
    if (o.format == Format::Json) {
      json j;
      j["elements"] = d.elements;
      j["placeholders"] = placeholders;
      j["truth_function"] = fn;
      json c = json::object();
      for (const auto& e : d.elements) c[e] = logic::placeholder(d.correspondence.at(e));
      j["correspondence"] = c;
      return j.dump(2) + "\n";
    }
    return "elements: {" + join(d.elements, ", ") + "}\n" + "function: f(" + join(placeholders, ", ") + ") = " + fn +
           "\n" + "correspondence: {" + join(pairs, ", ") + "}\n";
  }

  const auto t = logic::truth_table(expr, opts);
  if (table) {
    if (o.format == Format::Json) {
      json j;
      j["variables"] = t.variables();
      j["rows"] = json::array();
      for (std::size_t r = 0; r < t.row_count(); ++r) {
        const auto a = t.assignment(r);
        j["rows"].push_back({{"assignment", std::vector<bool>(a.begin(), a.end())}, {"result", t.result(r)}});
      }
      return j.dump(2) + "\n";
    }
    std::string out = join(t.variables()) + " result\n";
    for (std::size_t r = 0; r < t.row_count(); ++r) {
      std::vector<std::string> cells;
      for (bool b : t.row(r)) cells.push_back(tf(b));
      out += join(cells) + "\n";
    }
    return out;
  }

  const bool taut = t.true_count() == t.row_count();
  const bool sat = t.true_count() > 0;
  if (o.format == Format::Json) {
    json j;
    j["expression"] = logic::to_string(expr);
    j["variables"] = t.variables();
    j["rows"] = t.row_count();
    j["columns"] = t.column_count();
    j["true_rows"] = t.true_count();
    j["tautology"] = taut;
    j["satisfiable"] = sat;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "expression: " << logic::to_string(expr) << "\n"
     << "variables: " << join(t.variables()) << "\n"
     << "rows: " << t.row_count() << "\n"
     << "columns: " << t.column_count() << "\n"
     << "true_rows: " << t.true_count() << "\n"
     << "tautology: " << (taut ? "true" : "false") << "\n"
     << "satisfiable: " << (sat ? "true" : "false") << "\n";
  return os.str();
}

constexpr const char* kRegionNames[8] = {"S&P&T",   "S&P-T",   "P&T-S",   "S&T-P",
                                         "S-(P|T)", "P-(S|T)", "T-(S|P)", "U-(S|P|T)"};

std::string cmd_regions(const Options& o, const std::string& path) {
  require_no_dot(o, "regions");
  const auto m = io::parse_spt_json(io::read_file(path));
  const auto r = behaviors::classify(m);
  const auto omission = behaviors::faults_of_omission(m);
  const auto commission = behaviors::faults_of_commission(m);
  const auto correct = behaviors::correct_portion(m);

  std::vector<std::pair<behaviors::MethodKind, behaviors::ValidationReport>> methods;
  if (m.tests()) {
    for (auto kind : {behaviors::MethodKind::Functional, behaviors::MethodKind::Structural})
      methods.emplace_back(kind, behaviors::validate_method({std::string(behaviors::to_string(kind)), kind, *m.tests()}, m));
  }

  if (o.format == Format::Json) {
    json j;
    j["universe"] = to_json(m.universe());
    j["S"] = to_json(m.specified());
    j["P"] = to_json(m.programmed());
    j["T"] = to_json(m.tested());
    json regions = json::object();
    for (int i = 1; i <= 8; ++i) regions[std::to_string(i)] = to_json(r.region(i));
    j["regions"] = regions;
    j["omission"] = to_json(omission);
    j["commission"] = to_json(commission);
    j["correct_portion"] = to_json(correct);
    if (!methods.empty()) {
      json ms = json::object();
      for (const auto& [kind, v] : methods)
        ms[std::string(behaviors::to_string(kind))] = {{"passed", v.passed},
                                                       {"violations", to_json(v.violations)},
                                                       {"gaps", to_json(v.gaps)},
                                                       {"redundancy", to_json(v.redundancy)},
                                                       {"test_cases", v.test_cases}};
      j["methods"] = ms;
    }
    return j.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "universe: " << braces(m.universe()) << "\n"
     << "S: " << braces(m.specified()) << "\n"
     << "P: " << braces(m.programmed()) << "\n"
     << "T: " << braces(m.tested()) << "\n";
  for (int i = 1; i <= 8; ++i) os << "region " << i << " " << kRegionNames[i - 1] << ": " << braces(r.region(i)) << "\n";
  os << "omission: " << braces(omission) << "\n"
     << "commission: " << braces(commission) << "\n"
     << "correct_portion: " << braces(correct) << "\n";
  for (const auto& [kind, v] : methods) {
    os << behaviors::to_string(kind) << ": " << (v.passed ? "PASS" : "FAIL") << " violations=" << braces(v.violations)
       << " gaps=" << braces(v.gaps) << " redundancy=" << braces(v.redundancy) << " test_cases=" << v.test_cases
       << "\n";
  }
  return os.str();
}

std::string cmd_statechart(const Options& o, const std::string& path, bool run_mode,
                           const std::vector<std::string>& labels) {
  const auto chart = io::parse_chart_json(io::read_file(path));
  const auto fsm = statechart::flatten(chart);
  if (!run_mode && !labels.empty()) throw UsageError("labels given without --run");

  if (run_mode) {
    require_no_dot(o, "statechart --run");
    const auto trace = statechart::run(fsm, labels);
    if (o.format == Format::Json) return json{{"trace", trace}}.dump(2) + "\n";
    return "trace: " + join(trace) + "\n";
  }

  if (o.format == Format::Dot) {
    const auto fg = statechart::fsm_to_graph(fsm);
    return graph::to_dot(fg.graph, fg.labels);
  }
  if (o.format == Format::Json) {
    json j;
    j["states"] = fsm.states();
    j["initial"] = fsm.initial();
    j["transitions"] = json::array();
    for (std::size_t i = 0; i < fsm.transitions().size(); ++i) {
      const auto& t = fsm.transitions()[i];
      j["transitions"].push_back({{"src", t.src}, {"label", t.label}, {"dst", t.dst}, {"origin", fsm.provenance()[i]}});
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "states: " << join(fsm.states()) << "\n"
     << "initial: " << fsm.initial() << "\n"
     << "transitions: " << fsm.transitions().size() << "\n";
  for (const auto& t : fsm.transitions()) os << "  " << t.src << " -" << t.label << "-> " << t.dst << "\n";
  return os.str();
}

int exit_code(const Error& e) {
  switch (e.category()) {
    case Error::Category::Input: return kInput;
    case Error::Category::Analysis: return kAnalysis;
    case Error::Category::Limit: return kLimit;
  }
  return kAnalysis;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural, logical and set-theoretic test analysis"};
  app.name("testcalc");
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  std::string out_path;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("--out", out_path, "Write the report to this file instead of stdout");

  std::string path;
  bool require_sese = false;
  auto* graph_cmd = app.add_subcommand("graph", "Analyze a program graph file");
  graph_cmd->add_option("path", path, "Graph text file")->required();
  graph_cmd->add_flag("--require-sese", require_sese, "Fail unless the graph is single-entry/single-exit");

  bool emit_graph = false, dot = false;
  auto* src_cmd = app.add_subcommand("src", "Build and analyze the program graph of a source file");
  src_cmd->add_option("path", path, "Source file")->required();
  src_cmd->add_flag("--emit-graph", emit_graph, "Print the program graph in graph text format");
  src_cmd->add_flag("--dot", dot, "Print the program graph as DOT");

  std::string expr, expr_file, premises;
  bool table = false, decomp = false;
  std::size_t max_vars = logic::TableOptions{}.max_variables;
  auto* logic_cmd = app.add_subcommand("logic", "Truth tables, decomposition and entailment");
  logic_cmd->add_option("expr", expr, "Expression");
  logic_cmd->add_option("--file", expr_file, "Read the expression from a file");
  logic_cmd->add_flag("--table", table, "Print the truth table");
  logic_cmd->add_flag("--decompose", decomp, "Print elements, truth function and correspondence");
  logic_cmd->add_option("--entails", premises, "Premises file, one expression per line; EXPR is the conclusion");
  logic_cmd->add_option("--max-vars", max_vars, "Variable cap for table-based operations");

  auto* regions_cmd = app.add_subcommand("regions", "Classify specified/programmed/tested behaviors");
  regions_cmd->add_option("path", path, "SPT JSON file")->required();

  bool run_mode = false, flatten_mode = false;
  std::vector<std::string> labels;
  auto* chart_cmd = app.add_subcommand("statechart", "Flatten or run a statechart");
  chart_cmd->add_option("path", path, "Statechart JSON file")->required();
  chart_cmd->add_flag("--flatten", flatten_mode, "Print the flat state machine (default)");
  chart_cmd->add_flag("--run", run_mode, "Run the flat machine over LABELS");
  chart_cmd->add_option("labels", labels, "Event labels for --run");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInput;
  }

  Options o;
  o.format = format == "json" ? Format::Json : format == "dot" ? Format::Dot : Format::Text;
  o.out_path = out_path;

  try {
    std::string report;
    if (graph_cmd->parsed()) {
      report = cmd_graph(o, path, require_sese);
    } else if (src_cmd->parsed()) {
      report = cmd_src(o, path, emit_graph, dot);
    } else if (logic_cmd->parsed()) {
      report = cmd_logic(o, expr, expr_file, table, decomp, premises, max_vars);
    } else if (regions_cmd->parsed()) {
      report = cmd_regions(o, path);
    } else {
      if (run_mode && flatten_mode) throw UsageError("choose one of --flatten and --run");
      report = cmd_statechart(o, path, run_mode, labels);
    }
    if (o.out_path.empty()) {
      out << report;
    } else {
      std::ofstream file(o.out_path, std::ios::binary);
      if (!file) throw InputError("cannot write '" + o.out_path + "'");
      file << report;
    }
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kAnalysis;
  }
}

}  // namespace testcalc::cli
