#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "generators.hpp"
#include "testcalc/io.hpp"
#include "testcalc/statechart.hpp"

using namespace testcalc;
using namespace testcalc::statechart;

namespace {

Statechart worked_chart() {
  return io::parse_chart_json(io::read_file(std::string(TESTCALC_FIXTURES) + "/chart.json"));
}

bool has_kind(const std::vector<Diagnostic>& d, Diagnostic::Kind k) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.kind == k; });
}

}  // namespace

TEST_CASE("worked chart") {
  const auto chart = worked_chart();
  CHECK(validate(chart).empty());
  const auto fsm = flatten(chart);
  CHECK(fsm.states() == std::vector<std::string>{"A1", "A2", "B"});
  CHECK(fsm.initial() == "A1");
  CHECK(fsm.transitions() ==
        std::vector<FsmTransition>{{"A1", "go", "B"}, {"A2", "go", "B"}});
  CHECK(fsm.provenance() == std::vector<std::size_t>{2, 2});
  CHECK(run(fsm, {"go"}) == std::vector<std::string>{"A1", "B"});
  CHECK(run(fsm, {}) == std::vector<std::string>{"A1"});
  CHECK_THROWS_AS(run(fsm, {"nope"}), NoTransition);
  CHECK_THROWS_AS(run(fsm, {"go", "go"}), NoTransition);

  const auto g = fsm_to_graph(fsm);
  CHECK(g.graph.node_count() == 3);
  CHECK(g.graph.edge_count() == 2);
}

TEST_CASE("validation diagnostics") {
  SUBCASE("two parents") {
    Statechart c{{{"root", {"A", "B"}}, {"A", {"x"}}, {"B", {"x"}}}, "root", {{std::nullopt, "A", ""}}};
    CHECK(has_kind(validate(c), Diagnostic::Kind::MultipleParents));
    CHECK_THROWS_AS(flatten(c), InvalidChart);
  }
  SUBCASE("cycle") {
    Statechart c{{{"root", {"A"}}, {"X", {"Y"}}, {"Y", {"X"}}}, "root", {{std::nullopt, "A", ""}}};
    CHECK(has_kind(validate(c), Diagnostic::Kind::ContainmentCycle));
  }
  SUBCASE("composite destination without initial") {
    Statechart c{{{"root", {"A", "B"}}, {"A", {"A1", "A2"}}},
                 "root",
                 {{std::nullopt, "B", ""}, {"B", "A", "go"}}};
    const auto d = validate(c);
    REQUIRE(has_kind(d, Diagnostic::Kind::MissingInitial));
    CHECK(std::find_if(d.begin(), d.end(), [](const Diagnostic& x) { return x.blob == "A"; }) != d.end());
  }
  SUBCASE("two initials") {
    Statechart c{{{"root", {"A", "B"}}}, "root", {{std::nullopt, "A", ""}, {std::nullopt, "B", ""}}};
    CHECK(has_kind(validate(c), Diagnostic::Kind::ExtraInitial));
  }
  SUBCASE("root without initial") {
    Statechart c{{{"root", {"A", "B"}}}, "root", {}};
    CHECK(has_kind(validate(c), Diagnostic::Kind::MissingInitial));
  }
  SUBCASE("unknown endpoint") {
    Statechart c{{{"root", {"A"}}}, "root", {{std::nullopt, "A", ""}, {"A", "Z", "go"}}};
    CHECK(has_kind(validate(c), Diagnostic::Kind::UnknownBlob));
  }
  SUBCASE("labelled initial marker") {
    Statechart c{{{"root", {"A"}}}, "root", {{std::nullopt, "A", "go"}}};
    CHECK(has_kind(validate(c), Diagnostic::Kind::BadTransition));
  }
}

TEST_CASE("flatten small charts") {
  SUBCASE("single leaf") {
    Statechart c{{{"root", {"only"}}}, "root", {{std::nullopt, "only", ""}}};
    const auto fsm = flatten(c);
    CHECK(fsm.states() == std::vector<std::string>{"only"});
    CHECK(fsm.transitions().empty());
  }
  SUBCASE("destination composite resolves to its initial leaf") {
    auto c = worked_chart();
    c.transitions.push_back({"B", "A", "back"});
    const auto fsm = flatten(c);
    const auto* t = fsm.step("B", "back");
    REQUIRE(t);
    CHECK(t->dst == "A1");
    CHECK(run(fsm, {"go", "back", "go"}) == std::vector<std::string>{"A1", "B", "A1", "B"});
  }
  SUBCASE("composite self transition re-enters through the initial leaf") {
    auto c = worked_chart();
    c.transitions.push_back({"A", "A", "reset"});
    const auto fsm = flatten(c);
    CHECK(fsm.step("A2", "reset")->dst == "A1");
    CHECK(fsm.step("A1", "reset")->dst == "A1");
    const auto g = fsm_to_graph(fsm);
    CHECK(g.graph.has_edge(g.graph.at("A1"), g.graph.at("A1")));
  }
  SUBCASE("nondeterminism is rejected") {
    auto c = worked_chart();
    c.transitions.push_back({"A1", "A2", "go"});
    CHECK_THROWS_AS(flatten(c), NondeterministicTransition);
  }
}

TEST_CASE("parallel labels fold into one edge") {
  const auto fsm = FlatFsm::make({"A1", "B"}, "A1", {{"A1", "x", "B"}, {"A1", "y", "B"}});
  const auto g = fsm_to_graph(fsm);
  CHECK(g.graph.edge_count() == 1);
  const graph::Edge e{g.graph.at("A1"), g.graph.at("B")};
  CHECK(g.labels.at(e) == std::vector<std::string>{"x", "y"});
  CHECK(graph::to_dot(g.graph, g.labels).find("x, y") != std::string::npos);
}

TEST_CASE("FlatFsm::make checks") {
  CHECK_THROWS_AS(FlatFsm::make({"a"}, "b", {}), InputError);
  CHECK_THROWS_AS(FlatFsm::make({"a"}, "a", {{"a", "x", "z"}}), InputError);
  CHECK_THROWS_AS(FlatFsm::make({"a", "b"}, "a", {{"a", "x", "b"}, {"a", "x", "a"}}), NondeterministicTransition);
}

TEST_CASE("chart json errors") {
  CHECK_THROWS_AS(io::parse_chart_json(R"({"blobs": {}, "root": true, "transitions": []})"), InputError);
  CHECK_THROWS_AS(io::parse_chart_json(R"({"blobs": {}, "transitions": []})"), InputError);
  CHECK_THROWS_AS(io::parse_chart_json(R"({"blobs": {"r": "x"}, "root": "r", "transitions": []})"), InputError);
}

// Random containment trees. Each composite gets an initial marker on its
// first child; transitions use distinct labels so flattening stays
// deterministic.
TEST_CASE("property: flatten on random hierarchies") {
  gen::Rng rng(61);
  for (int round = 0; round < 200; ++round) {
    Statechart c;
    c.root = "root";
    std::map<std::string, std::vector<std::string>> kids;
    std::vector<std::string> all{"root"};
    const auto n = gen::pick(rng, 1, 12);
    for (std::size_t i = 0; i < n; ++i) {
      const auto parent = all[gen::pick(rng, 0, all.size() - 1)];
      const auto id = "b" + std::to_string(i);
      kids[parent].push_back(id);
      all.push_back(id);
    }
    for (const auto& [id, ch] : kids) {
      c.blobs.push_back({id, ch});
      c.transitions.push_back({std::nullopt, ch.front(), ""});
    }

    // Leaves and leaf counts by a separate walk.
    std::vector<std::string> leaves;
    std::function<std::size_t(const std::string&)> walk = [&](const std::string& b) -> std::size_t {
      if (!kids.count(b)) {
        leaves.push_back(b);
        return 1;
      }
      std::size_t total = 0;
      for (const auto& k : kids.at(b)) total += walk(k);
      return total;
    };
    walk("root");
    std::map<std::string, std::size_t> leaf_count;
    for (const auto& b : all) {
      const auto before = leaves.size();
      leaf_count[b] = walk(b);
      leaves.resize(before);
    }

    const auto markers = c.transitions.size();
    const auto m = gen::pick(rng, 0, 5);
    for (std::size_t k = 0; k < m; ++k) {
      const auto a = all[gen::pick(rng, 1, all.size() - 1)];
      const auto b = all[gen::pick(rng, 1, all.size() - 1)];
      c.transitions.push_back({a, b, "e" + std::to_string(k)});
    }

    REQUIRE(validate(c).empty());
    const auto fsm = flatten(c);
    CHECK(fsm.states() == leaves);
    REQUIRE(fsm.provenance().size() == fsm.transitions().size());
    for (std::size_t k = markers; k < c.transitions.size(); ++k) {
      const auto expanded = std::count(fsm.provenance().begin(), fsm.provenance().end(), k);
      CHECK(static_cast<std::size_t>(expanded) == leaf_count.at(*c.transitions[k].src));
    }

    std::vector<std::string> labels;
    for (int k = 0; k < 6; ++k) labels.push_back("e" + std::to_string(gen::pick(rng, 0, 5)));
    std::vector<std::string> first, second;
    try {
      first = run(fsm, labels);
    } catch (const NoTransition&) {
      first = {"stuck"};
    }
    try {
      second = run(fsm, labels);
    } catch (const NoTransition&) {
      second = {"stuck"};
    }
    CHECK(first == second);
  }
}

TEST_CASE("property: flattening a flat chart keeps its transitions") {
  gen::Rng rng(67);
  for (int round = 0; round < 100; ++round) {
    const auto n = gen::pick(rng, 1, 6);
    std::vector<std::string> states;
    for (std::size_t i = 0; i < n; ++i) states.push_back("s" + std::to_string(i));
    Statechart c{{{"root", states}}, "root", {{std::nullopt, states.front(), ""}}};
    std::vector<FsmTransition> expected;
    for (const auto& s : states)
      for (int l = 0; l < 2; ++l)
        if (gen::coin(rng)) {
          const auto d = states[gen::pick(rng, 0, n - 1)];
          c.transitions.push_back({s, d, "l" + std::to_string(l)});
          expected.push_back({s, "l" + std::to_string(l), d});
        }
    const auto fsm = flatten(c);
    CHECK(fsm.states() == states);
    CHECK(fsm.initial() == states.front());
    CHECK(fsm.transitions() == expected);
  }
}
