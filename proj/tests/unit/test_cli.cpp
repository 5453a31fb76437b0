#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "testcalc/io.hpp"

using nlohmann::json;
using testcalc::cli::run;

namespace {

std::string fx(const std::string& name) { return std::string(TESTCALC_FIXTURES) + "/" + name; }

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("graph command") {
  const auto fig2 = call({"graph", fx("fig2.graph")});
  CHECK(fig2.code == 0);
  CHECK(fig2.out.find("components: 2\n") != std::string::npos);
  CHECK(fig2.out.find("circuit_rank: 1\n") != std::string::npos);
  CHECK(fig2.out.find("single_entry_exit: false\n") != std::string::npos);

  const auto diamond = call({"--format", "json", "graph", fx("diamond.graph")});
  REQUIRE(diamond.code == 0);
  const auto j = json::parse(diamond.out);
  CHECK(j["mccabe"] == 2);
  CHECK(j["basis_paths"].size() == 2);
  CHECK(j["entry"] == "test");
  CHECK(j["structured"] == true);

  const auto text = call({"graph", fx("diamond.graph")});
  CHECK(text.out.find("mccabe: 2\n") != std::string::npos);
  CHECK(text.out.find("basis_paths: 2\n") != std::string::npos);

  CHECK(call({"graph", fx("malformed.graph")}).code == 2);
  CHECK(call({"graph", fx("malformed.graph")}).err.find("line 3") != std::string::npos);
  CHECK(call({"graph", fx("fig2.graph"), "--require-sese"}).code == 1);
  CHECK(call({"graph", fx("no_such_file.graph")}).code == 2);

  const auto dot = call({"--format", "dot", "graph", fx("fig2.graph")});
  CHECK(dot.code == 0);
  CHECK(dot.out.rfind("digraph G {\n", 0) == 0);
}

TEST_CASE("src command") {
  const auto jump = call({"src", fx("goto_into_loop.ml")});
  CHECK(jump.code == 0);
  CHECK(jump.out.find("structured: false\n") != std::string::npos);
  CHECK(jump.out.find("residual:\n") != std::string::npos);

  CHECK(call({"src", fx("empty.ml")}).out.find("mccabe: 1\n") != std::string::npos);
  const auto j = json::parse(call({"--format", "json", "src", fx("two_ifs_one_while.ml")}).out);
  CHECK(j["mccabe"] == 4);
  CHECK(j["statements"]["if"] == 2);
  CHECK(j["statements"]["while"] == 1);

  const auto emitted = call({"src", fx("three_assign.ml"), "--emit-graph"});
  CHECK(emitted.code == 0);
  const auto g = testcalc::graph::parse_graph_text(emitted.out);
  CHECK(g.node_count() == 5);
  CHECK(call({"src", fx("three_assign.ml"), "--dot"}).out.rfind("digraph G {", 0) == 0);

  const auto bad = std::filesystem::temp_directory_path() / "testcalc_bad.ml";
  std::ofstream(bad) << "x = ;\nif (";
  CHECK(call({"src", bad.string()}).code == 2);
  std::filesystem::remove(bad);
}

TEST_CASE("logic command") {
  const auto table = call({"logic", "--file", fx("eq4.expr"), "--table"});
  REQUIRE(table.code == 0);
  CHECK(count_lines(table.out) == 33);
  CHECK(table.out.rfind("a c b e m result\n", 0) == 0);

  const auto small = call({"logic", "a & ~b", "--table"});
  CHECK(small.out == "a b result\nF F F\nF T F\nT F T\nT T F\n");

  CHECK(call({"logic", "--entails", fx("modus_ponens.premises"), "q"}).out == "ENTAILED\n");
  const auto no = call({"logic", "p", "--entails", fx("modus_ponens.premises")});
  CHECK(no.code == 0);
  CHECK(no.out.rfind("ENTAILED", 0) == 0);
  const auto cex = call({"--format", "json", "logic", "--entails", fx("modus_ponens.premises"), "r"});
  const auto cj = json::parse(cex.out);
  CHECK(cj["entailed"] == false);
  CHECK(cj["counterexample"]["r"] == false);

  const auto dec = json::parse(call({"--format", "json", "logic", "--file", fx("eq4.expr"), "--decompose"}).out);
  CHECK(dec["elements"] == json::array({"a", "c", "b", "e", "m"}));
  CHECK(dec["correspondence"]["c"] == "x2");

  const auto summary = json::parse(call({"--format", "json", "logic", "a | ~a"}).out);
  CHECK(summary["tautology"] == true);
  CHECK(summary["rows"] == 2);

  CHECK(call({"logic", "--file", fx("wide30.expr"), "--table"}).code == 3);
  CHECK(call({"logic", "a & b & c", "--table", "--max-vars", "2"}).code == 3);
  CHECK(call({"logic", "a & | b"}).code == 2);
  CHECK(call({"logic", "a", "--file", fx("eq4.expr")}).code == 2);
  CHECK(call({"logic"}).code == 2);
  CHECK(call({"--format", "dot", "logic", "a"}).code == 2);
}

TEST_CASE("regions command") {
  const auto r = call({"regions", fx("model_1_6.json")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("region 1") != std::string::npos);
  const auto j = json::parse(call({"--format", "json", "regions", fx("model_1_6.json")}).out);
  CHECK(j["regions"]["1"] == json::array({"3"}));
  CHECK(j["regions"]["5"] == json::array({"1"}));
  CHECK(j["regions"]["8"] == json::array({"6"}));
  CHECK(j["omission"] == json::array({"1"}));
  CHECK(j["commission"] == json::array({"4"}));
  CHECK(j["correct_portion"] == json::array({"2", "3"}));
  CHECK(j["methods"]["functional"]["violations"] == json::array({"4", "5"}));

  const auto eq = json::parse(call({"--format", "json", "regions", fx("spt_equal.json")}).out);
  for (int k = 2; k <= 7; ++k) CHECK(eq["regions"][std::to_string(k)].empty());
  CHECK(eq["regions"]["1"] == json::array({"a", "b"}));
  CHECK(eq["regions"]["8"] == json::array({"c", "d"}));

  CHECK(call({"regions", fx("spt_bad_universe.json")}).code == 2);
}

TEST_CASE("statechart command") {
  const auto flat = json::parse(call({"--format", "json", "statechart", fx("chart.json"), "--flatten"}).out);
  CHECK(flat["states"].size() == 3);
  CHECK(flat["transitions"].size() == 2);
  CHECK(flat["initial"] == "A1");
  const auto text = call({"statechart", fx("chart.json"), "--run", "go"});
  CHECK(text.code == 0);
  CHECK(text.out == "trace: A1 B\n");
  CHECK(call({"statechart", fx("chart.json"), "--run", "nosuchlabel"}).code == 1);
  CHECK(call({"--format", "dot", "statechart", fx("chart.json"), "--flatten"}).out.find("\"A1\" -> \"B\"") !=
        std::string::npos);

  const auto bad = std::filesystem::temp_directory_path() / "testcalc_bad_chart.json";
  std::ofstream(bad) << R"({"blobs": {"root": ["A", "B"]}, "root": "root", "transitions": []})";
  CHECK(call({"statechart", bad.string(), "--flatten"}).code == 2);
  std::filesystem::remove(bad);
}

TEST_CASE("usage errors and --out") {
  CHECK(call({}).code == 2);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({"--format", "xml", "graph", fx("fig2.graph")}).code == 2);

  const auto path = std::filesystem::temp_directory_path() / "testcalc_out.txt";
  const auto r = call({"--out", path.string(), "graph", fx("diamond.graph")});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(testcalc::io::read_file(path.string()) == call({"graph", fx("diamond.graph")}).out);
  std::filesystem::remove(path);
}
