#include "testcalc/statechart.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace testcalc::statechart {

std::string_view to_string(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::MultipleParents: return "MultipleParents";
    case Diagnostic::Kind::ContainmentCycle: return "ContainmentCycle";
    case Diagnostic::Kind::NotUnderRoot: return "NotUnderRoot";
    case Diagnostic::Kind::UnknownBlob: return "UnknownBlob";
    case Diagnostic::Kind::BadTransition: return "BadTransition";
    case Diagnostic::Kind::MissingInitial: return "MissingInitial";
    case Diagnostic::Kind::ExtraInitial: return "ExtraInitial";
  }
  return "?";
}

namespace {

std::string summarize(const std::vector<Diagnostic>& ds) {
  std::string out = "invalid statechart";
  for (const auto& d : ds) out += "\n  " + std::string(to_string(d.kind)) + ": " + d.message;
  return out;
}

// Containment facts derived from a chart.
struct Hierarchy {
  std::vector<std::string> order;  // every blob, first mention order
  std::map<std::string, std::vector<std::string>> children;
  std::map<std::string, std::string> parent;

  bool known(const std::string& b) const { return children.contains(b); }
  bool composite(const std::string& b) const { return !children.at(b).empty(); }

  void leaves_under(const std::string& b, std::vector<std::string>& out) const {
    const auto& kids = children.at(b);
    if (kids.empty()) {
      out.push_back(b);
      return;
    }
    for (const auto& k : kids) leaves_under(k, out);
  }
};

Hierarchy build_hierarchy(const Statechart& chart, std::vector<Diagnostic>& diags) {
  Hierarchy h;
  auto mention = [&](const std::string& b) {
    if (h.children.emplace(b, std::vector<std::string>{}).second) h.order.push_back(b);
  };
  for (const auto& blob : chart.blobs) mention(blob.id);
  for (const auto& blob : chart.blobs) {
    for (const auto& c : blob.children) {
      mention(c);
      auto [it, fresh] = h.parent.emplace(c, blob.id);
      if (!fresh) {
        diags.push_back({Diagnostic::Kind::MultipleParents, c,
                         "blob '" + c + "' is contained in both '" + it->second + "' and '" + blob.id + "'"});
        continue;
      }
      h.children[blob.id].push_back(c);
    }
  }
  return h;
}

}  // namespace

InvalidChart::InvalidChart(std::vector<Diagnostic> diagnostics)
    : InputError(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<Diagnostic> validate(const Statechart& chart) {
  std::vector<Diagnostic> diags;
  const Hierarchy h = build_hierarchy(chart, diags);

  if (!h.known(chart.root)) {
    diags.push_back({Diagnostic::Kind::UnknownBlob, chart.root, "root '" + chart.root + "' is not a blob"});
    return diags;
  }

  bool tree_ok = diags.empty();
  for (const auto& b : h.order) {
    std::set<std::string> seen{b};
    std::string at = b;
    bool cyclic = false;
    while (h.parent.contains(at)) {
      at = h.parent.at(at);
      if (!seen.insert(at).second) {
        cyclic = true;
        break;
      }
    }
    if (cyclic) {
      diags.push_back({Diagnostic::Kind::ContainmentCycle, b, "blob '" + b + "' contains itself"});
      tree_ok = false;
    } else if (at != chart.root || (b == chart.root && h.parent.contains(b))) {
      diags.push_back({Diagnostic::Kind::NotUnderRoot, b, "blob '" + b + "' is not inside root '" + chart.root + "'"});
      tree_ok = false;
    }
  }

  bool transitions_ok = true;
  for (std::size_t i = 0; i < chart.transitions.size(); ++i) {
    const auto& t = chart.transitions[i];
    const std::string where = "transition " + std::to_string(i);
    auto bad = [&](Diagnostic::Kind kind, const std::string& blob, const std::string& msg) {
      diags.push_back({kind, blob, where + ": " + msg});
      transitions_ok = false;
    };
    if (!h.known(t.dst)) bad(Diagnostic::Kind::UnknownBlob, t.dst, "unknown destination '" + t.dst + "'");
    if (t.src && !h.known(*t.src)) bad(Diagnostic::Kind::UnknownBlob, *t.src, "unknown source '" + *t.src + "'");
    if (t.is_initial() && !t.label.empty()) bad(Diagnostic::Kind::BadTransition, t.dst, "initial marker has a label");
    if (!t.is_initial() && t.label.empty()) bad(Diagnostic::Kind::BadTransition, t.dst, "transition has no label");
    if (t.is_initial() && t.dst == chart.root)
      bad(Diagnostic::Kind::BadTransition, t.dst, "initial marker targets the root");
  }
  if (!tree_ok || !transitions_ok) return diags;

  std::map<std::string, std::size_t> markers;
  std::set<std::string> needs_initial;
  if (h.composite(chart.root)) needs_initial.insert(chart.root);
  for (const auto& t : chart.transitions) {
    if (t.is_initial()) ++markers[h.parent.at(t.dst)];
    if (h.composite(t.dst)) needs_initial.insert(t.dst);
  }
  for (const auto& b : h.order) {
    if (!h.composite(b)) continue;
    const auto n = markers.contains(b) ? markers.at(b) : 0;
    if (n > 1)
      diags.push_back({Diagnostic::Kind::ExtraInitial, b, "blob '" + b + "' has " + std::to_string(n) + " initial markers"});
    else if (n == 0 && needs_initial.contains(b))
      diags.push_back({Diagnostic::Kind::MissingInitial, b, "blob '" + b + "' is entered but has no initial marker"});
  }
  return diags;
}

FlatFsm FlatFsm::make(std::vector<std::string> states, std::string initial, std::vector<FsmTransition> transitions) {
  const std::set<std::string> known(states.begin(), states.end());
  if (known.size() != states.size()) throw InputError("duplicate state in flat machine");
  if (!known.contains(initial)) throw InputError("initial state '" + initial + "' is not a state");
  std::map<std::pair<std::string, std::string>, std::string> seen;
  for (const auto& t : transitions) {
    if (!known.contains(t.src) || !known.contains(t.dst))
      throw InputError("transition '" + t.src + "' -> '" + t.dst + "' uses an unknown state");
    auto [it, fresh] = seen.emplace(std::pair{t.src, t.label}, t.dst);
    if (!fresh) throw NondeterministicTransition(t.src, t.label);
  }
  FlatFsm fsm;
  fsm.states_ = std::move(states);
  fsm.initial_ = std::move(initial);
  fsm.transitions_ = std::move(transitions);
  return fsm;
}

const FsmTransition* FlatFsm::step(const std::string& state, const std::string& label) const {
  for (const auto& t : transitions_)
    if (t.src == state && t.label == label) return &t;
  return nullptr;
}

FlatFsm flatten(const Statechart& chart) {
  if (auto diags = validate(chart); !diags.empty()) throw InvalidChart(std::move(diags));
  std::vector<Diagnostic> unused;
  const Hierarchy h = build_hierarchy(chart, unused);

  std::map<std::string, std::string> initial_child;
  for (const auto& t : chart.transitions)
    if (t.is_initial()) initial_child[h.parent.at(t.dst)] = t.dst;
  auto enter = [&](std::string b) {
    while (h.composite(b)) b = initial_child.at(b);
    return b;
  };

  std::vector<std::string> states;
  h.leaves_under(chart.root, states);

  std::vector<FsmTransition> flat;
  std::vector<std::size_t> provenance;
  std::map<std::pair<std::string, std::string>, std::string> chosen;
  for (std::size_t i = 0; i < chart.transitions.size(); ++i) {
    const auto& t = chart.transitions[i];
    if (t.is_initial()) continue;
    std::vector<std::string> sources;
    h.leaves_under(*t.src, sources);
    const auto dst = enter(t.dst);
    for (const auto& s : sources) {
      auto [it, fresh] = chosen.emplace(std::pair{s, t.label}, dst);
      if (!fresh) {
        // Identical expansions from different chart transitions collapse;
        // differing destinations are a conflict.
        if (it->second != dst) throw NondeterministicTransition(s, t.label);
        continue;
      }
      flat.push_back({s, t.label, dst});
      provenance.push_back(i);
    }
  }

  FlatFsm fsm = FlatFsm::make(std::move(states), enter(chart.root), std::move(flat));
  fsm.provenance_ = std::move(provenance);
  return fsm;
}

std::vector<std::string> run(const FlatFsm& fsm, const std::vector<std::string>& labels) {
  std::vector<std::string> trace{fsm.initial()};
  for (const auto& label : labels) {
    const auto* t = fsm.step(trace.back(), label);
    if (!t) throw NoTransition(trace.back(), label);
    trace.push_back(t->dst);
  }
  return trace;
}

FsmGraph fsm_to_graph(const FlatFsm& fsm) {
  FsmGraph out;
  for (const auto& s : fsm.states()) out.graph.add_node(s);
  for (const auto& t : fsm.transitions()) {
    const graph::Edge e{out.graph.at(t.src), out.graph.at(t.dst)};
    if (!out.graph.has_edge(e.src, e.dst)) out.graph.add_edge(e.src, e.dst);
    out.labels[e].push_back(t.label);
  }
  return out;
}

}  // namespace testcalc::statechart
