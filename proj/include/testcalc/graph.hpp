#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "testcalc/error.hpp"

namespace testcalc::graph {

using NodeIndex = std::size_t;

struct Edge {
  NodeIndex src;
  NodeIndex dst;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class DuplicateNode : public InputError {
 public:
  explicit DuplicateNode(const std::string& id) : InputError("duplicate node '" + id + "'") {}
};

class DuplicateEdge : public InputError {
 public:
  DuplicateEdge(const std::string& src, const std::string& dst)
      : InputError("duplicate edge '" + src + "' -> '" + dst + "'") {}
};

class UnknownNode : public InputError {
 public:
  explicit UnknownNode(const std::string& id) : InputError("unknown node '" + id + "'") {}
};

class NotSingleEntryExit : public AnalysisError {
 public:
  explicit NotSingleEntryExit(const std::string& why)
      : AnalysisError("graph is not single-entry/single-exit: " + why) {}
};

// Directed program graph. Nodes and edges keep insertion order, which every
// deterministic output (DOT, basis paths, reports) follows. Edges form a set:
// adding the same (src, dst) twice is rejected.
class ProgramGraph {
 public:
  ProgramGraph() = default;

  NodeIndex add_node(std::string id, std::optional<std::string> label = std::nullopt);
  void add_edge(std::string_view src, std::string_view dst);
  void add_edge(NodeIndex src, NodeIndex dst);

  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  const std::string& id(NodeIndex n) const { return ids_.at(n); }
  const std::optional<std::string>& label(NodeIndex n) const { return labels_.at(n); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::optional<NodeIndex> find(std::string_view id) const;
  NodeIndex at(std::string_view id) const;
  bool has_edge(NodeIndex src, NodeIndex dst) const;

  // Successors/predecessors in edge insertion order.
  const std::vector<NodeIndex>& successors(NodeIndex n) const { return succ_.at(n); }
  const std::vector<NodeIndex>& predecessors(NodeIndex n) const { return pred_.at(n); }

  friend bool operator==(const ProgramGraph& a, const ProgramGraph& b) {
    return a.ids_ == b.ids_ && a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<std::optional<std::string>> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeIndex>> succ_;
  std::vector<std::vector<NodeIndex>> pred_;
  std::unordered_map<std::string, NodeIndex> index_;
};

using Path = std::vector<NodeIndex>;

struct GraphMetrics {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t components = 0;
  long long circuit_rank = 0;
  long long mccabe = 0;
};

// Components of the undirected view, each sorted by node index; components
// are ordered by their smallest member.
std::vector<std::vector<NodeIndex>> connected_components(const ProgramGraph& g);

// e - n + p, the number of independent cycles.
long long circuit_rank(const ProgramGraph& g);

// e - n + 2p.
long long mccabe_complexity(const ProgramGraph& g);

GraphMetrics metrics(const ProgramGraph& g);

// In-degree 0 / out-degree 0 nodes, in index order. An isolated node is both.
std::vector<NodeIndex> source_nodes(const ProgramGraph& g);
std::vector<NodeIndex> sink_nodes(const ProgramGraph& g);

struct EntryExit {
  NodeIndex entry;
  NodeIndex exit;
};

// Present iff g has one source, one sink, they differ (unless g is a single
// node) and every node lies on some entry->exit path.
std::optional<EntryExit> single_entry_exit(const ProgramGraph& g);

inline bool is_single_entry_single_exit(const ProgramGraph& g) {
  return single_entry_exit(g).has_value();
}

// Baseline method. The first path is the depth-first entry->exit path that
// prefers earlier-inserted edges. Further paths flip one decision of an
// already accepted path and then return to exit along a fixed next-hop tree
// that contains the baseline; a candidate is kept only when its edge
// incidence vector is linearly independent of those already kept. Returns
// exactly mccabe_complexity(g) paths.
// Throws NotSingleEntryExit.
std::vector<Path> basis_paths(const ProgramGraph& g);

// Edge-incidence vector of a path: entry k counts traversals of edges()[k].
std::vector<long long> incidence_vector(const ProgramGraph& g, const Path& path);

struct Collapse {
  enum class Kind { Sequence, IfThenElse, IfThen, Loop, SelfLoop };
  Kind kind;
  // Node ids removed by the collapse; `into` is the surviving node.
  std::vector<std::string> absorbed;
  std::string into;

  bool is_predicate() const noexcept { return kind != Kind::Sequence; }
};

std::string_view to_string(Collapse::Kind kind);

struct StructureReport {
  bool structured = false;
  std::vector<Collapse> trace;
  // Whatever remains once no pattern applies; a single node when structured.
  ProgramGraph residual;

  std::size_t predicate_collapses() const;
};

// Throws NotSingleEntryExit.
StructureReport reduce_structure(const ProgramGraph& g);

inline bool is_structured(const ProgramGraph& g) { return reduce_structure(g).structured; }

using EdgeLabels = std::map<Edge, std::vector<std::string>>;

std::string to_dot(const ProgramGraph& g, const EdgeLabels& edge_labels = {});

// Line-oriented text form: `node <id> [label...]`, `edge <src> <dst>`,
// '#' comments and blank lines ignored. Errors carry the 1-based line.
ProgramGraph parse_graph_text(std::string_view text);
std::string to_graph_text(const ProgramGraph& g);

}  // namespace testcalc::graph
