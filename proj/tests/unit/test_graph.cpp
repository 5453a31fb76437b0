#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "oracles.hpp"
#include "testcalc/graph.hpp"
#include "testcalc/io.hpp"

using namespace testcalc::graph;

namespace {

ProgramGraph fixture(const std::string& name) {
  return parse_graph_text(testcalc::io::read_file(std::string(TESTCALC_FIXTURES) + "/" + name));
}

std::vector<std::string> names(const ProgramGraph& g, const std::vector<NodeIndex>& v) {
  std::vector<std::string> out;
  for (auto n : v) out.push_back(g.id(n));
  return out;
}

ProgramGraph line(std::size_t k) {
  ProgramGraph g;
  for (std::size_t i = 0; i < k; ++i) g.add_node("l" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < k; ++i) g.add_edge(i, i + 1);
  return g;
}

// Random graph with possible self-loops and several components.
ProgramGraph random_graph(gen::Rng& rng) {
  ProgramGraph g;
  const auto n = gen::pick(rng, 1, 9);
  for (std::size_t i = 0; i < n; ++i) g.add_node("r" + std::to_string(i));
  const auto tries = gen::pick(rng, 0, 2 * n);
  for (std::size_t k = 0; k < tries; ++k) {
    const auto a = gen::pick(rng, 0, n - 1), b = gen::pick(rng, 0, n - 1);
    if (!g.has_edge(a, b)) g.add_edge(a, b);
  }
  return g;
}

}  // namespace

TEST_CASE("fig2 components, rank and degrees") {
  const auto g = fixture("fig2.graph");
  const auto comps = connected_components(g);
  REQUIRE(comps.size() == 2);
  CHECK(names(g, comps[0]) == std::vector<std::string>{"n1", "n2", "n3", "n4", "n5", "n6"});
  CHECK(names(g, comps[1]) == std::vector<std::string>{"n7"});
  CHECK(circuit_rank(g) == 1);
  CHECK(circuit_rank(g) == static_cast<long long>(oracle::non_forest_edges(g)));
  CHECK(mccabe_complexity(g) == 3);
  CHECK(names(g, source_nodes(g)) == std::vector<std::string>{"n1", "n7"});
  CHECK(names(g, sink_nodes(g)) == std::vector<std::string>{"n5", "n6", "n7"});
  CHECK_FALSE(is_single_entry_single_exit(g));
  CHECK_THROWS_AS(basis_paths(g), NotSingleEntryExit);
  CHECK_THROWS_AS(reduce_structure(g), NotSingleEntryExit);
}

TEST_CASE("small component and rank cases") {
  ProgramGraph three;
  three.add_node("a");
  three.add_node("b");
  three.add_node("c");
  CHECK(connected_components(three).size() == 3);
  CHECK(circuit_rank(three) == 0);

  ProgramGraph loop;
  loop.add_node("a");
  loop.add_edge("a", "a");
  CHECK(connected_components(loop).size() == 1);
  CHECK(circuit_rank(loop) == 1);

  CHECK(circuit_rank(line(5)) == 0);
  CHECK(mccabe_complexity(line(3)) == 1);

  ProgramGraph cyc;
  cyc.add_node("a");
  cyc.add_node("b");
  cyc.add_edge("a", "b");
  cyc.add_edge("b", "a");
  CHECK(source_nodes(cyc).empty());
  CHECK(sink_nodes(cyc).empty());
}

TEST_CASE("diamond") {
  const auto g = fixture("diamond.graph");
  CHECK(mccabe_complexity(g) == 2);
  CHECK(oracle::enumerate_paths(g, g.at("test"), g.at("join")).size() == 2);
  CHECK(names(g, source_nodes(g)) == std::vector<std::string>{"test"});
  CHECK(names(g, sink_nodes(g)) == std::vector<std::string>{"join"});
  const auto se = single_entry_exit(g);
  REQUIRE(se);
  CHECK(g.id(se->entry) == "test");
  CHECK(g.id(se->exit) == "join");
  const auto paths = basis_paths(g);
  REQUIRE(paths.size() == 2);
  CHECK(names(g, paths[0]) == std::vector<std::string>{"test", "then", "join"});
  CHECK(names(g, paths[1]) == std::vector<std::string>{"test", "else", "join"});
  CHECK(is_structured(g));
}

TEST_CASE("straight line has one basis path") {
  const auto g = line(3);
  const auto paths = basis_paths(g);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0] == Path{0, 1, 2});
}

TEST_CASE("single node graph") {
  const auto g = line(1);
  CHECK(is_single_entry_single_exit(g));
  CHECK(basis_paths(g) == std::vector<Path>{{0}});
  CHECK(is_structured(g));
}

TEST_CASE("while loop basis paths") {
  const auto g = fixture("while.graph");
  CHECK(mccabe_complexity(g) == 2);
  const auto paths = basis_paths(g);
  REQUIRE(paths.size() == 2);
  CHECK(names(g, paths[0]) == std::vector<std::string>{"entry", "test", "exit"});
  CHECK(names(g, paths[1]) == std::vector<std::string>{"entry", "test", "body", "test", "exit"});
  std::vector<std::vector<long long>> rows;
  for (const auto& p : paths) rows.push_back(oracle::edge_counts(g, p));
  CHECK(oracle::rational_rank(rows) == 2);
  CHECK(is_structured(g));
}

TEST_CASE("two disconnected lines are not single-entry/single-exit") {
  const auto g = fixture("two_sources.graph");
  CHECK_FALSE(is_single_entry_single_exit(g));
}

TEST_CASE("node off every entry-exit path breaks single-entry/single-exit") {
  // a -> b -> c with a dead-end cycle hanging off b: d <-> e
  ProgramGraph g;
  for (auto id : {"a", "b", "c", "d", "e"}) g.add_node(id);
  g.add_edge("a", "b");
  g.add_edge("b", "c");
  g.add_edge("b", "d");
  g.add_edge("d", "e");
  g.add_edge("e", "d");
  CHECK(source_nodes(g).size() == 1);
  CHECK(sink_nodes(g).size() == 1);
  CHECK_FALSE(is_single_entry_single_exit(g));
}

TEST_CASE("while loop whose body is a diamond is structured") {
  ProgramGraph g;
  for (auto id : {"entry", "w", "t", "x", "y", "j", "exit"}) g.add_node(id);
  g.add_edge("entry", "w");
  g.add_edge("w", "t");
  g.add_edge("t", "x");
  g.add_edge("t", "y");
  g.add_edge("x", "j");
  g.add_edge("y", "j");
  g.add_edge("j", "w");
  g.add_edge("w", "exit");
  const auto r = reduce_structure(g);
  CHECK(r.structured);
  CHECK(r.residual.node_count() == 1);
  CHECK(r.predicate_collapses() == 2);
  CHECK(mccabe_complexity(g) == 3);
}

TEST_CASE("jump into a loop body is unstructured") {
  // entry -> d; d -> w (fall into loop) or d -> b (jump into body)
  // loop: w -> a -> b -> w; w -> exit
  ProgramGraph g;
  for (auto id : {"entry", "d", "w", "a", "b", "exit"}) g.add_node(id);
  g.add_edge("entry", "d");
  g.add_edge("d", "w");
  g.add_edge("d", "b");
  g.add_edge("w", "a");
  g.add_edge("a", "b");
  g.add_edge("b", "w");
  g.add_edge("w", "exit");
  const auto r = reduce_structure(g);
  CHECK_FALSE(r.structured);
  CHECK(r.residual.node_count() > 1);
}

TEST_CASE("construction errors") {
  ProgramGraph g;
  g.add_node("a");
  CHECK_THROWS_AS(g.add_node("a"), DuplicateNode);
  CHECK_THROWS_AS(g.add_edge("a", "zz"), UnknownNode);
  g.add_edge("a", "a");
  CHECK_THROWS_AS(g.add_edge("a", "a"), DuplicateEdge);
}

TEST_CASE("graph text format") {
  SUBCASE("malformed keyword reports its line") {
    try {
      fixture("malformed.graph");
      FAIL("expected a syntax error");
    } catch (const testcalc::SyntaxError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("undeclared node is an input error with line") {
    try {
      parse_graph_text("node a\nedge a b\n");
      FAIL("expected an input error");
    } catch (const testcalc::InputError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("round trip") {
    const auto g = fixture("diamond.graph");
    CHECK(parse_graph_text(to_graph_text(g)) == g);
    CHECK(g.label(g.at("then")) == std::optional<std::string>("x = 1"));
  }
}

TEST_CASE("dot output") {
  CHECK(to_dot(ProgramGraph{}) == "digraph G {\n}\n");
  ProgramGraph ab;
  ab.add_node("a");
  ab.add_node("b");
  ab.add_edge("a", "b");
  CHECK(to_dot(ab).find("\"a\" -> \"b\";") != std::string::npos);

  const auto g = fixture("fig2.graph");
  std::istringstream lines(to_dot(g));
  int node_lines = 0, edge_lines = 0;
  for (std::string l; std::getline(lines, l);) {
    if (l.find("->") != std::string::npos)
      ++edge_lines;
    else if (l.find("[label=") != std::string::npos || (l.size() > 2 && l[2] == '"'))
      ++node_lines;
  }
  CHECK(node_lines == 7);
  CHECK(edge_lines == 6);
  CHECK(to_dot(g) == to_dot(fixture("fig2.graph")));
}

TEST_CASE("property: rank laws on random graphs") {
  gen::Rng rng(11);
  for (int round = 0; round < 300; ++round) {
    auto g = random_graph(rng);
    const auto m = metrics(g);
    CHECK(m.circuit_rank == static_cast<long long>(oracle::non_forest_edges(g)));
    CHECK(m.components == oracle::forest_trees(g));
    CHECK(m.mccabe - m.circuit_rank == static_cast<long long>(m.components));
    CHECK(m.circuit_rank >= 0);

    // Adding one edge: +1 rank inside a component, else the components merge.
    std::vector<Edge> missing;
    for (NodeIndex a = 0; a < g.node_count(); ++a)
      for (NodeIndex b = 0; b < g.node_count(); ++b)
        if (!g.has_edge(a, b)) missing.push_back({a, b});
    if (missing.empty()) continue;
    const auto e = missing[gen::pick(rng, 0, missing.size() - 1)];
    const auto comps = connected_components(g);
    const bool same = std::any_of(comps.begin(), comps.end(), [&](const auto& c) {
      return std::count(c.begin(), c.end(), e.src) && std::count(c.begin(), c.end(), e.dst);
    });
    g.add_edge(e.src, e.dst);
    const auto after = metrics(g);
    CHECK(after.circuit_rank == m.circuit_rank + (same ? 1 : 0));
    CHECK(after.components == m.components - (same ? 0 : 1));
  }
}

TEST_CASE("property: basis paths of structured graphs") {
  gen::Rng rng(23);
  for (int round = 0; round < 150; ++round) {
    const auto s = gen::structured_graph(rng, static_cast<int>(gen::pick(rng, 0, 4)));
    const auto& g = s.graph;
    REQUIRE(is_single_entry_single_exit(g));
    const auto se = *single_entry_exit(g);
    const auto paths = basis_paths(g);
    CHECK(static_cast<long long>(paths.size()) == mccabe_complexity(g));
    CHECK(mccabe_complexity(g) == static_cast<long long>(1 + s.predicates));
    std::vector<std::vector<long long>> rows;
    for (const auto& p : paths) {
      CHECK(p.front() == se.entry);
      CHECK(p.back() == se.exit);
      const auto v = oracle::edge_counts(g, p);
      REQUIRE(!v.empty());
      CHECK(v == incidence_vector(g, p));
      rows.push_back(v);
    }
    CHECK(oracle::rational_rank(rows) == paths.size());

    const auto r = reduce_structure(g);
    CHECK(r.structured);
    CHECK(mccabe_complexity(g) == static_cast<long long>(1 + r.predicate_collapses()));
  }
}

TEST_CASE("property: basis paths on arbitrary single-entry/single-exit graphs") {
  // Random DAG-plus-back-edges graphs, kept only when single-entry/single-exit.
  gen::Rng rng(31);
  int checked = 0;
  for (int round = 0; round < 2000 && checked < 200; ++round) {
    ProgramGraph g;
    const auto n = gen::pick(rng, 2, 8);
    for (std::size_t i = 0; i < n; ++i) g.add_node("q" + std::to_string(i));
    for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, gen::pick(rng, i + 1, n - 1));
    const auto extra = gen::pick(rng, 0, n);
    for (std::size_t k = 0; k < extra; ++k) {
      const auto a = gen::pick(rng, 1, n - 2 > 0 ? n - 2 : 1), b = gen::pick(rng, 1, n - 1);
      if (a < n - 1 && !g.has_edge(a, b)) g.add_edge(a, b);
    }
    if (!is_single_entry_single_exit(g)) continue;
    ++checked;
    const auto paths = basis_paths(g);
    CHECK(static_cast<long long>(paths.size()) == mccabe_complexity(g));
    std::vector<std::vector<long long>> rows;
    for (const auto& p : paths) rows.push_back(oracle::edge_counts(g, p));
    CHECK(oracle::rational_rank(rows) == paths.size());
    if (is_structured(g)) CHECK(mccabe_complexity(g) == static_cast<long long>(1 + reduce_structure(g).predicate_collapses()));
  }
  CHECK(checked >= 50);
}

TEST_CASE("property: dot and text output are deterministic") {
  gen::Rng rng(5);
  for (int round = 0; round < 50; ++round) {
    const auto g = random_graph(rng);
    const auto copy = parse_graph_text(to_graph_text(g));
    CHECK(copy == g);
    CHECK(to_dot(copy) == to_dot(g));
  }
}
