#include "testcalc/minilang.hpp"

#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

namespace testcalc::minilang {

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool is_keyword(std::string_view w) { return w == "if" || w == "else" || w == "while" || w == "goto"; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Program parse() {
    Program p;
    skip_space();
    while (!at_end()) {
      p.stmts.push_back(statement());
      skip_space();
    }
    return p;
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[i_]; }
  SourcePos here() const { return {line_, col_}; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else if (text_.substr(i_, 2) == "//") {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& expected) const { throw SyntaxError(line_, col_, expected); }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("'") + c + "'");
    advance();
  }

  std::string name() {
    skip_space();
    if (!is_name_start(peek())) fail("a name");
    const auto start = i_;
    while (!at_end() && is_name_char(peek())) advance();
    return std::string(text_.substr(start, i_ - start));
  }

  std::string condition() {
    expect('(');
    const auto start = i_;
    int depth = 1;
    while (true) {
      if (at_end()) fail("')' closing the condition");
      if (peek() == '(') ++depth;
      if (peek() == ')' && --depth == 0) break;
      advance();
    }
    auto cond = trim(text_.substr(start, i_ - start));
    advance();
    if (cond.empty()) fail("a nonempty condition");
    return cond;
  }

  StmtList block() {
    expect('{');
    StmtList out;
    skip_space();
    while (peek() != '}') {
      if (at_end()) fail("'}'");
      out.push_back(statement());
      skip_space();
    }
    advance();
    return out;
  }

  Stmt statement() {
    skip_space();
    const SourcePos pos = here();
    const auto word = name();
    if (word == "if") {
      If node{condition(), block(), std::nullopt};
      const auto save_i = i_, save_line = line_, save_col = col_;
      skip_space();
      if (is_name_start(peek())) {
        const auto start = i_;
        while (!at_end() && is_name_char(peek())) advance();
        if (text_.substr(start, i_ - start) == "else") {
          node.else_branch = block();
        } else {
          i_ = save_i;
          line_ = save_line;
          col_ = save_col;
        }
      }
      return {std::move(node), pos};
    }
    if (word == "while") {
      auto cond = condition();
      return {While{std::move(cond), block()}, pos};
    }
    if (word == "goto") {
      auto target = name();
      expect(';');
      return {Goto{std::move(target)}, pos};
    }
    if (is_keyword(word)) fail("a statement, found '" + word + "'");

    skip_space();
    if (peek() == ':') {
      advance();
      return {Label{word}, pos};
    }
    if (peek() != '=') fail("'=' or ':' after '" + word + "'");
    advance();
    const auto start = i_;
    while (!at_end() && peek() != ';') {
      if (peek() == '\n') fail("';' before end of line");
      advance();
    }
    if (at_end()) fail("';'");
    auto value = trim(text_.substr(start, i_ - start));
    advance();
    if (value.empty()) fail("an expression after '='");
    return {Assign{word, std::move(value)}, pos};
  }

  std::string_view text_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

template <typename Fn>
void walk(const StmtList& list, Fn&& fn) {
  for (const auto& s : list) {
    fn(s);
    if (const auto* i = std::get_if<If>(&s.node)) {
      walk(i->then_branch, fn);
      if (i->else_branch) walk(*i->else_branch, fn);
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      walk(w->body, fn);
    }
  }
}

void check_labels(const Program& p) {
  std::set<std::string> labels;
  walk(p.stmts, [&](const Stmt& s) {
    if (const auto* l = std::get_if<Label>(&s.node))
      if (!labels.insert(l->name).second) throw DuplicateLabel(l->name, s.pos);
  });
  walk(p.stmts, [&](const Stmt& s) {
    if (const auto* g = std::get_if<Goto>(&s.node))
      if (!labels.contains(g->label)) throw UndefinedGotoTarget(g->label, s.pos);
  });
}

void print(const StmtList& list, int depth, std::string& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  for (const auto& s : list) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Assign>) {
            out += indent + n.text() + ";\n";
          } else if constexpr (std::is_same_v<T, If>) {
            out += indent + "if (" + n.cond + ") {\n";
            print(n.then_branch, depth + 1, out);
            out += indent + "}";
            if (n.else_branch) {
              out += " else {\n";
              print(*n.else_branch, depth + 1, out);
              out += indent + "}";
            }
            out += "\n";
          } else if constexpr (std::is_same_v<T, While>) {
            out += indent + "while (" + n.cond + ") {\n";
            print(n.body, depth + 1, out);
            out += indent + "}\n";
          } else if constexpr (std::is_same_v<T, Goto>) {
            out += indent + "goto " + n.label + ";\n";
          } else {
            out += indent + n.name + ":\n";
          }
        },
        s.node);
  }
}

// A control-flow target is either a concrete node or "wherever label X
// binds", resolved after the whole program has been walked.
using Target = std::variant<graph::NodeIndex, std::string>;

class CfgBuilder {
 public:
  explicit CfgBuilder(const Program& p) : program_(p) {}

  graph::ProgramGraph build() {
    entry_ = add_node(std::string(kEntryId), std::nullopt, {});
    walk(program_.stmts, [&](const Stmt& s) {
      if (const auto* a = std::get_if<Assign>(&s.node)) {
        index_[&s] = add_node("s" + std::to_string(++stmt_no_), a->text(), s.pos);
      } else if (const auto* i = std::get_if<If>(&s.node)) {
        index_[&s] = add_node("s" + std::to_string(++stmt_no_), "if (" + i->cond + ")", s.pos);
      } else if (const auto* w = std::get_if<While>(&s.node)) {
        index_[&s] = add_node("s" + std::to_string(++stmt_no_), "while (" + w->cond + ")", s.pos);
      }
    });
    exit_ = add_node(std::string(kExitId), std::nullopt, {});

    out_[entry_].push_back(lower(program_.stmts, exit_));

    graph::ProgramGraph g;
    for (std::size_t n = 0; n < ids_.size(); ++n) g.add_node(ids_[n], labels_[n]);
    for (std::size_t n = 0; n < ids_.size(); ++n) {
      for (const auto& t : out_[n]) {
        const auto dst = resolve(t);
        if (!g.has_edge(n, dst)) g.add_edge(n, dst);
      }
    }
    check_flow(g);
    return g;
  }

 private:
  graph::NodeIndex add_node(std::string id, std::optional<std::string> label, SourcePos pos) {
    ids_.push_back(std::move(id));
    labels_.push_back(std::move(label));
    positions_.push_back(pos);
    out_.emplace_back();
    return ids_.size() - 1;
  }

  // Wires `list` so that falling off its end continues at `follow`; returns
  // the target control reaches on entering the list.
  Target lower(const StmtList& list, Target follow) {
    Target next = std::move(follow);
    for (auto it = list.rbegin(); it != list.rend(); ++it) {
      const Stmt& s = *it;
      if (std::holds_alternative<Assign>(s.node)) {
        const auto n = index_.at(&s);
        out_[n].push_back(next);
        next = n;
      } else if (const auto* i = std::get_if<If>(&s.node)) {
        const auto n = index_.at(&s);
        out_[n].push_back(lower(i->then_branch, next));
        out_[n].push_back(i->else_branch ? lower(*i->else_branch, next) : next);
        next = n;
      } else if (const auto* w = std::get_if<While>(&s.node)) {
        const auto n = index_.at(&s);
        out_[n].push_back(lower(w->body, n));
        out_[n].push_back(next);
        next = n;
      } else if (const auto* g = std::get_if<Goto>(&s.node)) {
        next = g->label;
      } else {
        bindings_[std::get<Label>(s.node).name] = next;
      }
    }
    return next;
  }

  graph::NodeIndex resolve(Target t) const {
    std::set<std::string> seen;
    while (const auto* label = std::get_if<std::string>(&t)) {
      if (!seen.insert(*label).second)
        throw IllFormedProgram("goto cycle through label '" + *label + "' executes no statement");
      t = bindings_.at(*label);
    }
    return std::get<graph::NodeIndex>(t);
  }

  void check_flow(const graph::ProgramGraph& g) const {
    auto reach = [&](graph::NodeIndex start, bool forward) {
      std::vector<bool> seen(g.node_count(), false);
      std::vector<graph::NodeIndex> stack{start};
      seen[start] = true;
      while (!stack.empty()) {
        const auto n = stack.back();
        stack.pop_back();
        for (auto m : forward ? g.successors(n) : g.predecessors(n))
          if (!seen[m]) seen[m] = true, stack.push_back(m);
      }
      return seen;
    };
    const auto from_entry = reach(entry_, true);
    for (std::size_t n = 0; n < g.node_count(); ++n)
      if (!from_entry[n])
        throw IllFormedProgram("statement '" + labels_[n].value_or(ids_[n]) + "' at line " +
                               std::to_string(positions_[n].line) + " is unreachable");
    const auto to_exit = reach(exit_, false);
    for (std::size_t n = 0; n < g.node_count(); ++n)
      if (!to_exit[n])
        throw IllFormedProgram("statement '" + labels_[n].value_or(ids_[n]) + "' at line " +
                               std::to_string(positions_[n].line) + " never reaches the end of the program");
  }

  const Program& program_;
  std::vector<std::string> ids_;
  std::vector<std::optional<std::string>> labels_;
  std::vector<SourcePos> positions_;
  std::vector<std::vector<Target>> out_;
  std::unordered_map<const Stmt*, graph::NodeIndex> index_;
  std::map<std::string, Target> bindings_;
  graph::NodeIndex entry_ = 0;
  graph::NodeIndex exit_ = 0;
  std::size_t stmt_no_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) {
  Program p = Parser(text).parse();
  check_labels(p);
  return p;
}

std::string pretty_print(const Program& p) {
  std::string out;
  print(p.stmts, 0, out);
  return out;
}

StatementCounts count_statements(const Program& p) {
  StatementCounts c;
  walk(p.stmts, [&](const Stmt& s) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Assign>) ++c.assigns;
          if constexpr (std::is_same_v<T, If>) ++c.ifs;
          if constexpr (std::is_same_v<T, While>) ++c.whiles;
          if constexpr (std::is_same_v<T, Goto>) ++c.gotos;
          if constexpr (std::is_same_v<T, Label>) ++c.labels;
        },
        s.node);
  });
  return c;
}

graph::ProgramGraph build_program_graph(const Program& p) { return CfgBuilder(p).build(); }

SourceAnalysis analyze_source(std::string_view text) {
  SourceAnalysis a;
  a.program = parse_program(text);
  a.graph = build_program_graph(a.program);
  a.metrics = graph::metrics(a.graph);
  a.structure = graph::reduce_structure(a.graph);
  a.basis = graph::basis_paths(a.graph);
  return a;
}

}  // namespace testcalc::minilang
