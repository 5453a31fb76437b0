#include "testcalc/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace testcalc::graph {

NodeIndex ProgramGraph::add_node(std::string id, std::optional<std::string> label) {
  if (id.empty()) throw InputError("node id must be nonempty");
  if (index_.contains(id)) throw DuplicateNode(id);
  const NodeIndex n = ids_.size();
  index_.emplace(id, n);
  ids_.push_back(std::move(id));
  labels_.push_back(std::move(label));
  succ_.emplace_back();
  pred_.emplace_back();
  return n;
}

void ProgramGraph::add_edge(std::string_view src, std::string_view dst) { add_edge(at(src), at(dst)); }

void ProgramGraph::add_edge(NodeIndex src, NodeIndex dst) {
  if (src >= ids_.size() || dst >= ids_.size()) throw std::out_of_range("edge endpoint out of range");
  if (has_edge(src, dst)) throw DuplicateEdge(ids_[src], ids_[dst]);
  edges_.push_back({src, dst});
  succ_[src].push_back(dst);
  pred_[dst].push_back(src);
}

std::optional<NodeIndex> ProgramGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex ProgramGraph::at(std::string_view id) const {
  if (auto n = find(id)) return *n;
  throw UnknownNode(std::string(id));
}

bool ProgramGraph::has_edge(NodeIndex src, NodeIndex dst) const {
  const auto& s = succ_.at(src);
  return std::find(s.begin(), s.end(), dst) != s.end();
}

// ---------------------------------------------------------------------------
// Components and counts

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller index wins so roots are stable.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<std::vector<NodeIndex>> connected_components(const ProgramGraph& g) {
  UnionFind uf(g.node_count());
  for (const auto& e : g.edges()) uf.unite(e.src, e.dst);

  std::vector<std::vector<NodeIndex>> out;
  std::vector<std::size_t> slot(g.node_count(), SIZE_MAX);
  for (NodeIndex n = 0; n < g.node_count(); ++n) {
    const auto root = uf.find(n);
    if (slot[root] == SIZE_MAX) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(n);
  }
  return out;
}

GraphMetrics metrics(const ProgramGraph& g) {
  GraphMetrics m;
  m.nodes = g.node_count();
  m.edges = g.edge_count();
  m.components = connected_components(g).size();
  const auto e = static_cast<long long>(m.edges);
  const auto n = static_cast<long long>(m.nodes);
  const auto p = static_cast<long long>(m.components);
  m.circuit_rank = e - n + p;
  m.mccabe = e - n + 2 * p;
  return m;
}

long long circuit_rank(const ProgramGraph& g) { return metrics(g).circuit_rank; }

long long mccabe_complexity(const ProgramGraph& g) { return metrics(g).mccabe; }

std::vector<NodeIndex> source_nodes(const ProgramGraph& g) {
  std::vector<NodeIndex> out;
  for (NodeIndex n = 0; n < g.node_count(); ++n)
    if (g.predecessors(n).empty()) out.push_back(n);
  return out;
}

std::vector<NodeIndex> sink_nodes(const ProgramGraph& g) {
  std::vector<NodeIndex> out;
  for (NodeIndex n = 0; n < g.node_count(); ++n)
    if (g.successors(n).empty()) out.push_back(n);
  return out;
}

namespace {

std::vector<bool> reach(const ProgramGraph& g, NodeIndex start, bool forward) {
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeIndex> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const auto n = stack.back();
    stack.pop_back();
    for (auto m : forward ? g.successors(n) : g.predecessors(n)) {
      if (!seen[m]) {
        seen[m] = true;
        stack.push_back(m);
      }
    }
  }
  return seen;
}

std::string why_not_single_entry_exit(const ProgramGraph& g) {
  if (g.empty()) return "graph is empty";
  const auto sources = source_nodes(g);
  const auto sinks = sink_nodes(g);
  if (sources.size() != 1) return std::to_string(sources.size()) + " source nodes";
  if (sinks.size() != 1) return std::to_string(sinks.size()) + " sink nodes";
  if (sources[0] == sinks[0] && g.node_count() != 1) return "source and sink coincide";
  const auto fwd = reach(g, sources[0], true);
  for (NodeIndex n = 0; n < g.node_count(); ++n)
    if (!fwd[n]) return "node '" + g.id(n) + "' is unreachable from the entry";
  const auto bwd = reach(g, sinks[0], false);
  for (NodeIndex n = 0; n < g.node_count(); ++n)
    if (!bwd[n]) return "node '" + g.id(n) + "' cannot reach the exit";
  return {};
}

}  // namespace

std::optional<EntryExit> single_entry_exit(const ProgramGraph& g) {
  if (!why_not_single_entry_exit(g).empty()) return std::nullopt;
  return EntryExit{source_nodes(g).front(), sink_nodes(g).front()};
}

// ---------------------------------------------------------------------------
// Basis paths

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Row space kept in reduced row echelon form so that a single pass over the
// rows fully reduces a candidate.
class RationalRowSpace {
 public:
  explicit RationalRowSpace(std::size_t width) : width_(width) {}

  std::size_t rank() const noexcept { return rows_.size(); }

  bool add_if_independent(const std::vector<long long>& v) {
    std::vector<Rational> row(v.begin(), v.end());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational f = row[pivots_[r]];
      if (f == 0) continue;
      for (std::size_t c = 0; c < width_; ++c) row[c] -= f * rows_[r][c];
    }
    std::size_t pivot = 0;
    while (pivot < width_ && row[pivot] == 0) ++pivot;
    if (pivot == width_) return false;

    const Rational lead = row[pivot];
    for (auto& x : row) x /= lead;
    for (auto& other : rows_) {
      const Rational f = other[pivot];
      if (f == 0) continue;
      for (std::size_t c = 0; c < width_; ++c) other[c] -= f * row[c];
    }
    rows_.push_back(std::move(row));
    pivots_.push_back(pivot);
    return true;
  }

 private:
  std::size_t width_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> pivots_;
};

Path baseline_path(const ProgramGraph& g, NodeIndex entry, NodeIndex exit) {
  std::vector<bool> visited(g.node_count(), false);
  // (node, index of next successor to try)
  std::vector<std::pair<NodeIndex, std::size_t>> stack{{entry, 0}};
  visited[entry] = true;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (node == exit) break;
    const auto& succ = g.successors(node);
    if (next == succ.size()) {
      stack.pop_back();
      continue;
    }
    const auto m = succ[next++];
    if (!visited[m]) {
      visited[m] = true;
      stack.emplace_back(m, 0);
    }
  }
  Path path;
  for (const auto& frame : stack) path.push_back(frame.first);
  return path;
}

// next_hop[v] is the node that follows v on its fixed route to exit. The
// baseline is part of the tree; every other node hangs off it by a reverse
// breadth-first search.
std::vector<NodeIndex> exit_tree(const ProgramGraph& g, const Path& baseline) {
  constexpr auto none = SIZE_MAX;
  std::vector<NodeIndex> next_hop(g.node_count(), none);
  std::vector<bool> done(g.node_count(), false);
  std::deque<NodeIndex> queue;
  for (auto it = baseline.rbegin(); it != baseline.rend(); ++it) {
    done[*it] = true;
    queue.push_back(*it);
  }
  for (std::size_t i = 0; i + 1 < baseline.size(); ++i) next_hop[baseline[i]] = baseline[i + 1];

  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto p : g.predecessors(u)) {
      if (done[p]) continue;
      done[p] = true;
      next_hop[p] = u;
      queue.push_back(p);
    }
  }
  return next_hop;
}

}  // namespace

std::vector<long long> incidence_vector(const ProgramGraph& g, const Path& path) {
  std::map<Edge, std::size_t> column;
  for (std::size_t k = 0; k < g.edges().size(); ++k) column.emplace(g.edges()[k], k);
  std::vector<long long> v(g.edge_count(), 0);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto it = column.find({path[i], path[i + 1]});
    if (it == column.end())
      throw std::invalid_argument("path step '" + g.id(path[i]) + "' -> '" + g.id(path[i + 1]) +
                                  "' is not an edge");
    ++v[it->second];
  }
  return v;
}

std::vector<Path> basis_paths(const ProgramGraph& g) {
  if (auto why = why_not_single_entry_exit(g); !why.empty()) throw NotSingleEntryExit(why);
  const auto [entry, exit] = *single_entry_exit(g);
  const auto target = static_cast<std::size_t>(mccabe_complexity(g));

  const Path baseline = baseline_path(g, entry, exit);
  // A lone node has an all-zero incidence vector but still one path.
  if (g.edge_count() == 0) return {baseline};
  const auto next_hop = exit_tree(g, baseline);

  RationalRowSpace space(g.edge_count());
  std::vector<Path> accepted;
  auto accept = [&](Path p) {
    if (!space.add_if_independent(incidence_vector(g, p))) return;
    accepted.push_back(std::move(p));
  };
  accept(baseline);

  for (std::size_t i = 0; i < accepted.size() && accepted.size() < target; ++i) {
    const std::size_t length = accepted[i].size();
    for (std::size_t k = 0; k + 1 < length && accepted.size() < target; ++k) {
      const NodeIndex v = accepted[i][k];
      for (const auto w : g.successors(v)) {
        Path candidate(accepted[i].begin(), accepted[i].begin() + static_cast<std::ptrdiff_t>(k) + 1);
        for (NodeIndex x = w;; x = next_hop[x]) {
          candidate.push_back(x);
          if (x == exit) break;
        }
        accept(std::move(candidate));
        if (accepted.size() == target) break;
      }
    }
  }
  if (accepted.size() != target)
    throw std::logic_error("basis path search found " + std::to_string(accepted.size()) + " of " +
                           std::to_string(target) + " paths");
  return accepted;
}

// ---------------------------------------------------------------------------
// Structuredness

std::string_view to_string(Collapse::Kind kind) {
  switch (kind) {
    case Collapse::Kind::Sequence: return "sequence";
    case Collapse::Kind::IfThenElse: return "if-then-else";
    case Collapse::Kind::IfThen: return "if-then";
    case Collapse::Kind::Loop: return "loop";
    case Collapse::Kind::SelfLoop: return "self-loop";
  }
  return "?";
}

std::size_t StructureReport::predicate_collapses() const {
  return static_cast<std::size_t>(
      std::count_if(trace.begin(), trace.end(), [](const Collapse& c) { return c.is_predicate(); }));
}

namespace {

class Reducer {
 public:
  explicit Reducer(const ProgramGraph& g)
      : names_(g.ids()), succ_(g.node_count()), pred_(g.node_count()), alive_(g.node_count(), true) {
    for (const auto& e : g.edges()) link(e.src, e.dst);
  }

  // Applies the first pattern found, scanning nodes in index order.
  std::optional<Collapse> step() {
    for (NodeIndex t = 0; t < alive_.size(); ++t) {
      if (!alive_[t]) continue;
      if (auto c = try_self_loop(t)) return c;
      if (auto c = try_sequence(t)) return c;
      if (auto c = try_if_then_else(t)) return c;
      if (auto c = try_if_then(t)) return c;
      if (auto c = try_loop(t)) return c;
    }
    return std::nullopt;
  }

  ProgramGraph residual(const ProgramGraph& original) const {
    ProgramGraph out;
    for (NodeIndex n = 0; n < alive_.size(); ++n)
      if (alive_[n]) out.add_node(names_[n], original.label(n));
    for (NodeIndex n = 0; n < alive_.size(); ++n) {
      if (!alive_[n]) continue;
      for (auto m : succ_[n]) out.add_edge(names_[n], names_[m]);
    }
    return out;
  }

 private:
  void link(NodeIndex a, NodeIndex b) {
    succ_[a].insert(b);
    pred_[b].insert(a);
  }
  void unlink(NodeIndex a, NodeIndex b) {
    succ_[a].erase(b);
    pred_[b].erase(a);
  }
  void remove(NodeIndex n) {
    for (auto s : std::set<NodeIndex>(succ_[n])) unlink(n, s);
    for (auto p : std::set<NodeIndex>(pred_[n])) unlink(p, n);
    alive_[n] = false;
  }

  static bool is(const std::set<NodeIndex>& s, NodeIndex a) { return s.size() == 1 && *s.begin() == a; }

  Collapse make(Collapse::Kind kind, std::vector<NodeIndex> absorbed, NodeIndex into) const {
    Collapse c{kind, {}, names_[into]};
    for (auto n : absorbed) c.absorbed.push_back(names_[n]);
    return c;
  }

  std::optional<Collapse> try_self_loop(NodeIndex t) {
    if (!succ_[t].contains(t) || succ_[t].size() != 2) return std::nullopt;
    unlink(t, t);
    return make(Collapse::Kind::SelfLoop, {}, t);
  }

  // a -> b with a's only successor b and b's only predecessor a.
  std::optional<Collapse> try_sequence(NodeIndex a) {
    if (succ_[a].size() != 1) return std::nullopt;
    const auto b = *succ_[a].begin();
    if (b == a || !is(pred_[b], a)) return std::nullopt;
    const auto outs = succ_[b];
    remove(b);
    for (auto s : outs) link(a, s == b ? a : s);
    return make(Collapse::Kind::Sequence, {b}, a);
  }

  std::optional<Collapse> try_if_then_else(NodeIndex t) {
    if (succ_[t].size() != 2) return std::nullopt;
    const auto x = *succ_[t].begin();
    const auto y = *std::next(succ_[t].begin());
    if (x == t || y == t) return std::nullopt;
    if (!is(pred_[x], t) || !is(pred_[y], t) || succ_[x].size() != 1 || succ_[x] != succ_[y])
      return std::nullopt;
    const auto j = *succ_[x].begin();
    if (j == t || j == x || j == y) return std::nullopt;
    remove(x);
    remove(y);
    link(t, j);
    return make(Collapse::Kind::IfThenElse, {x, y}, t);
  }

  std::optional<Collapse> try_if_then(NodeIndex t) {
    if (succ_[t].size() != 2 || succ_[t].contains(t)) return std::nullopt;
    for (auto x : succ_[t]) {
      const auto j = *std::find_if(succ_[t].begin(), succ_[t].end(), [&](auto n) { return n != x; });
      if (is(pred_[x], t) && is(succ_[x], j)) {
        remove(x);
        return make(Collapse::Kind::IfThen, {x}, t);
      }
    }
    return std::nullopt;
  }

  std::optional<Collapse> try_loop(NodeIndex t) {
    if (succ_[t].size() != 2 || succ_[t].contains(t)) return std::nullopt;
    for (auto b : succ_[t]) {
      if (is(pred_[b], t) && is(succ_[b], t)) {
        remove(b);
        return make(Collapse::Kind::Loop, {b}, t);
      }
    }
    return std::nullopt;
  }

  std::vector<std::string> names_;
  std::vector<std::set<NodeIndex>> succ_;
  std::vector<std::set<NodeIndex>> pred_;
  std::vector<bool> alive_;
};

}  // namespace

StructureReport reduce_structure(const ProgramGraph& g) {
  if (auto why = why_not_single_entry_exit(g); !why.empty()) throw NotSingleEntryExit(why);
  Reducer reducer(g);
  StructureReport report;
  while (auto c = reducer.step()) report.trace.push_back(std::move(*c));
  report.residual = reducer.residual(g);
  report.structured = report.residual.node_count() == 1 && report.residual.edge_count() == 0;
  return report;
}

// ---------------------------------------------------------------------------
// Text forms

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const ProgramGraph& g, const EdgeLabels& edge_labels) {
  std::ostringstream out;
  out << "digraph G {\n";
  for (NodeIndex n = 0; n < g.node_count(); ++n) {
    out << "  " << dot_quote(g.id(n));
    if (const auto& label = g.label(n)) out << " [label=" << dot_quote(*label) << "]";
    out << ";\n";
  }
  for (const auto& e : g.edges()) {
    out << "  " << dot_quote(g.id(e.src)) << " -> " << dot_quote(g.id(e.dst));
    if (auto it = edge_labels.find(e); it != edge_labels.end() && !it->second.empty()) {
      std::string text;
      for (const auto& l : it->second) text += (text.empty() ? "" : ", ") + l;
      out << " [label=" << dot_quote(text) << "]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

ProgramGraph parse_graph_text(std::string_view text) {
  ProgramGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string keyword;
    if (!(words >> keyword)) continue;
    try {
      if (keyword == "node") {
        std::string id;
        if (!(words >> id)) throw SyntaxError(lineno, 0, "node id");
        std::string rest;
        std::getline(words, rest);
        const auto first = rest.find_first_not_of(" \t\r");
        const auto last = rest.find_last_not_of(" \t\r");
        std::optional<std::string> label;
        if (first != std::string::npos) label = rest.substr(first, last - first + 1);
        g.add_node(std::move(id), std::move(label));
      } else if (keyword == "edge") {
        std::string src, dst, extra;
        if (!(words >> src >> dst)) throw SyntaxError(lineno, 0, "edge <src> <dst>");
        if (words >> extra) throw SyntaxError(lineno, 0, "end of line after edge endpoints");
        g.add_edge(src, dst);
      } else {
        throw SyntaxError(lineno, 0, "'node' or 'edge', found '" + keyword + "'");
      }
    } catch (const SyntaxError&) {
      throw;
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return g;
}

std::string to_graph_text(const ProgramGraph& g) {
  std::string out;
  for (NodeIndex n = 0; n < g.node_count(); ++n) {
    out += "node " + g.id(n);
    if (const auto& label = g.label(n)) out += " " + *label;
    out += '\n';
  }
  for (const auto& e : g.edges()) out += "edge " + g.id(e.src) + " " + g.id(e.dst) + '\n';
  return out;
}

}  // namespace testcalc::graph
