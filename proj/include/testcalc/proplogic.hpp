#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "testcalc/error.hpp"

namespace testcalc::logic {

// Immutable propositional formula. Copies share structure.
class BoolExpr {
 public:
  enum class Op { Var, Not, And, Or, Implies, Iff };

  static BoolExpr var(std::string name);
  static BoolExpr negate(BoolExpr operand);
  static BoolExpr binary(Op op, BoolExpr lhs, BoolExpr rhs);

  Op op() const noexcept;
  const std::string& name() const;       // Var only
  const BoolExpr& operand() const;       // Not only
  const BoolExpr& lhs() const;           // binary only
  const BoolExpr& rhs() const;           // binary only

  // Distinct variable names in order of first (leftmost) occurrence.
  std::vector<std::string> variables() const;

  friend bool operator==(const BoolExpr& a, const BoolExpr& b);

 private:
  struct Node;
  explicit BoolExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class UnboundVariable : public InputError {
 public:
  explicit UnboundVariable(const std::string& name)
      : InputError("variable '" + name + "' has no value"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class VariableLimitExceeded : public LimitError {
 public:
  VariableLimitExceeded(std::size_t count, std::size_t cap)
      : LimitError(std::to_string(count) + " variables exceed the limit of " + std::to_string(cap)) {}
};

// Precedence, loosest first: <==>, ==>, |, &, ~. '&' and '|' associate to the
// left, '==>' and '<==>' to the right. Throws SyntaxError.
BoolExpr parse_expr(std::string_view text);

enum class Parens { Minimal, Full };

// parse_expr(to_string(e, style)) == e for either style. Full brackets every
// binary subexpression below the top level.
std::string to_string(const BoolExpr& e, Parens style = Parens::Minimal);

// Throws UnboundVariable.
bool evaluate(const BoolExpr& e, const std::map<std::string, bool>& assignment);

struct TableOptions {
  std::size_t max_variables = 24;
};

// 2^n rows in binary counting order: row r assigns variable k the bit
// (r >> (n - 1 - k)) & 1, so the first variable is most significant and false
// precedes true. Results are stored as a bitset.
class TruthTable {
 public:
  TruthTable(std::vector<std::string> variables, std::vector<std::uint64_t> bits);

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  std::size_t row_count() const noexcept { return std::size_t{1} << variables_.size(); }
  std::size_t column_count() const noexcept { return variables_.size() + 1; }

  std::vector<bool> assignment(std::size_t row) const;
  bool result(std::size_t row) const { return (bits_.at(row / 64) >> (row % 64)) & 1U; }
  // The n assignment entries followed by the result.
  std::vector<bool> row(std::size_t row) const;

  std::size_t true_count() const;
  const std::vector<std::uint64_t>& bits() const noexcept { return bits_; }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  std::vector<std::string> variables_;
  std::vector<std::uint64_t> bits_;
};

// Throws VariableLimitExceeded.
TruthTable truth_table(const BoolExpr& e, const TableOptions& options = {});

// Table over an explicit ordering; `order` must contain every variable of e.
TruthTable truth_table(const BoolExpr& e, std::span<const std::string> order, const TableOptions& options = {});

bool is_tautology(const BoolExpr& e, const TableOptions& options = {});
bool is_satisfiable(const BoolExpr& e, const TableOptions& options = {});

// True iff every assignment satisfying all premises satisfies the conclusion.
// Variables are ordered by first occurrence across premises then conclusion.
bool entails(std::span<const BoolExpr> premises, const BoolExpr& conclusion, const TableOptions& options = {});

struct Counterexample {
  std::vector<std::string> variables;
  std::vector<bool> values;
};

// First row (in table order) where all premises hold and the conclusion
// fails; empty when the conclusion is entailed.
std::optional<Counterexample> find_counterexample(std::span<const BoolExpr> premises, const BoolExpr& conclusion,
                                                  const TableOptions& options = {});

// An expression viewed as (element set, truth function over x1..xN,
// one-to-one correspondence element -> placeholder index).
struct Decomposition {
  std::vector<std::string> elements;
  BoolExpr truth_function;
  std::map<std::string, std::size_t> correspondence;  // 1-based
};

std::string placeholder(std::size_t index);

Decomposition decompose(const BoolExpr& e);

// Puts the elements back in place of their placeholders.
BoolExpr substitute(const Decomposition& d);

}  // namespace testcalc::logic
