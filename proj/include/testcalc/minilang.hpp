#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "testcalc/error.hpp"
#include "testcalc/graph.hpp"

// A tiny imperative language whose only purpose is to produce program graphs.
//
//   program  := stmt*
//   stmt     := NAME '=' <text up to ';'> ';'
//             | 'if' '(' COND ')' block ('else' block)?
//             | 'while' '(' COND ')' block
//             | 'goto' NAME ';'
//             | NAME ':'
//   block    := '{' stmt* '}'
//
// Conditions and right-hand sides are opaque text. '//' starts a comment.
namespace testcalc::minilang {

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Stmt;
using StmtList = std::vector<Stmt>;

struct Assign {
  std::string target;
  std::string value;

  std::string text() const { return target + " = " + value; }
  friend bool operator==(const Assign&, const Assign&) = default;
};

struct If {
  std::string cond;
  StmtList then_branch;
  std::optional<StmtList> else_branch;
  friend bool operator==(const If&, const If&) = default;
};

struct While {
  std::string cond;
  StmtList body;
  friend bool operator==(const While&, const While&) = default;
};

struct Goto {
  std::string label;
  friend bool operator==(const Goto&, const Goto&) = default;
};

struct Label {
  std::string name;
  friend bool operator==(const Label&, const Label&) = default;
};

struct Stmt {
  std::variant<Assign, If, While, Goto, Label> node;
  SourcePos pos;

  // Structural equality; positions are ignored.
  friend bool operator==(const Stmt& a, const Stmt& b) { return a.node == b.node; }
};

struct Program {
  StmtList stmts;
  friend bool operator==(const Program&, const Program&) = default;
};

class DuplicateLabel : public InputError {
 public:
  DuplicateLabel(const std::string& name, SourcePos pos)
      : InputError("duplicate label '" + name + "' at line " + std::to_string(pos.line)) {}
};

class UndefinedGotoTarget : public InputError {
 public:
  UndefinedGotoTarget(const std::string& name, SourcePos pos)
      : InputError("goto target '" + name + "' is not defined (line " + std::to_string(pos.line) + ")") {}
};

// Raised when the control flow cannot form a single-entry/single-exit graph:
// a statement no path reaches, or a goto cycle with no way out.
class IllFormedProgram : public AnalysisError {
 public:
  explicit IllFormedProgram(const std::string& why) : AnalysisError(why) {}
};

// Throws SyntaxError, DuplicateLabel, UndefinedGotoTarget.
Program parse_program(std::string_view text);

std::string pretty_print(const Program& p);

struct StatementCounts {
  std::size_t assigns = 0;
  std::size_t ifs = 0;
  std::size_t whiles = 0;
  std::size_t gotos = 0;
  std::size_t labels = 0;

  std::size_t executable() const { return assigns + ifs + whiles; }
};

StatementCounts count_statements(const Program& p);

inline constexpr std::string_view kEntryId = "ENTRY";
inline constexpr std::string_view kExitId = "EXIT";

// One node per assignment, if-test and while-test (ids s1, s2, ... in source
// order, labelled with the statement text) plus ENTRY and EXIT. A goto is an
// edge from whatever precedes it to the labelled statement; a label with no
// statement after it in its block binds to whatever follows the block.
// Throws IllFormedProgram.
graph::ProgramGraph build_program_graph(const Program& p);

struct SourceAnalysis {
  Program program;
  graph::ProgramGraph graph;
  graph::GraphMetrics metrics;
  graph::StructureReport structure;
  std::vector<graph::Path> basis;
};

SourceAnalysis analyze_source(std::string_view text);

}  // namespace testcalc::minilang
