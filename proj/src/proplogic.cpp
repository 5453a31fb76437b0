#include "testcalc/proplogic.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>

namespace testcalc::logic {

struct BoolExpr::Node {
  Op op;
  std::string name;
  std::vector<BoolExpr> children;
};

BoolExpr BoolExpr::var(std::string name) {
  if (name.empty()) throw std::invalid_argument("variable name must be nonempty");
  return BoolExpr(std::make_shared<const Node>(Node{Op::Var, std::move(name), {}}));
}

BoolExpr BoolExpr::negate(BoolExpr operand) {
  return BoolExpr(std::make_shared<const Node>(Node{Op::Not, {}, {std::move(operand)}}));
}

BoolExpr BoolExpr::binary(Op op, BoolExpr lhs, BoolExpr rhs) {
  if (op == Op::Var || op == Op::Not) throw std::invalid_argument("not a binary operator");
  return BoolExpr(std::make_shared<const Node>(Node{op, {}, {std::move(lhs), std::move(rhs)}}));
}

BoolExpr::Op BoolExpr::op() const noexcept { return node_->op; }

const std::string& BoolExpr::name() const {
  if (node_->op != Op::Var) throw std::logic_error("name() on a non-variable");
  return node_->name;
}

const BoolExpr& BoolExpr::operand() const {
  if (node_->op != Op::Not) throw std::logic_error("operand() on a non-negation");
  return node_->children[0];
}

const BoolExpr& BoolExpr::lhs() const {
  if (node_->children.size() != 2) throw std::logic_error("lhs() on a non-binary node");
  return node_->children[0];
}

const BoolExpr& BoolExpr::rhs() const {
  if (node_->children.size() != 2) throw std::logic_error("rhs() on a non-binary node");
  return node_->children[1];
}

std::vector<std::string> BoolExpr::variables() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::function<void(const BoolExpr&)> visit = [&](const BoolExpr& e) {
    if (e.op() == Op::Var) {
      if (seen.insert(e.name()).second) out.push_back(e.name());
      return;
    }
    for (const auto& c : e.node_->children) visit(c);
  };
  visit(*this);
  return out;
}

bool operator==(const BoolExpr& a, const BoolExpr& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->op == b.node_->op && a.node_->name == b.node_->name && a.node_->children == b.node_->children;
}

// ---------------------------------------------------------------------------
// Parsing and printing

namespace {

enum class Tok { Name, Not, And, Or, Implies, Iff, LParen, RParen, End };

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Name: return "a variable";
    case Tok::Not: return "'~'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Implies: return "'==>'";
    case Tok::Iff: return "'<==>'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto step = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      step(1);
      continue;
    }
    const auto l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Name, std::string(s.substr(i, j - i)), l, cl});
      step(j - i);
      continue;
    }
    if (s.substr(i, 4) == "<==>") {
      out.push_back({Tok::Iff, "<==>", l, cl});
      step(4);
      continue;
    }
    if (s.substr(i, 3) == "==>") {
      out.push_back({Tok::Implies, "==>", l, cl});
      step(3);
      continue;
    }
    Tok kind;
    switch (c) {
      case '~': kind = Tok::Not; break;
      case '&': kind = Tok::And; break;
      case '|': kind = Tok::Or; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      default: throw SyntaxError(l, cl, std::string("an operator or variable, found '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), l, cl});
    step(1);
  }
  out.push_back({Tok::End, {}, line, col});
  return out;
}

class ExprParser {
 public:
  explicit ExprParser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  BoolExpr parse() {
    auto e = iff();
    if (peek().kind != Tok::End) fail("an operator or end of input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  [[noreturn]] void fail(std::string_view expected) const {
    const auto& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.line, t.column, std::string(expected) + ", found " + found);
  }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  BoolExpr iff() {
    auto lhs = implies();
    if (accept(Tok::Iff)) return BoolExpr::binary(BoolExpr::Op::Iff, lhs, iff());
    return lhs;
  }

  BoolExpr implies() {
    auto lhs = disjunction();
    if (accept(Tok::Implies)) return BoolExpr::binary(BoolExpr::Op::Implies, lhs, implies());
    return lhs;
  }

  BoolExpr disjunction() {
    auto lhs = conjunction();
    while (accept(Tok::Or)) lhs = BoolExpr::binary(BoolExpr::Op::Or, lhs, conjunction());
    return lhs;
  }

  BoolExpr conjunction() {
    auto lhs = unary();
    while (accept(Tok::And)) lhs = BoolExpr::binary(BoolExpr::Op::And, lhs, unary());
    return lhs;
  }

  BoolExpr unary() {
    if (accept(Tok::Not)) return BoolExpr::negate(unary());
    if (peek().kind == Tok::Name) return BoolExpr::var(toks_[pos_++].text);
    if (accept(Tok::LParen)) {
      auto e = iff();
      if (!accept(Tok::RParen)) fail(describe(Tok::RParen));
      return e;
    }
    fail("a variable, '~' or '('");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(BoolExpr::Op op) {
  switch (op) {
    case BoolExpr::Op::Iff: return 1;
    case BoolExpr::Op::Implies: return 2;
    case BoolExpr::Op::Or: return 3;
    case BoolExpr::Op::And: return 4;
    case BoolExpr::Op::Not: return 5;
    case BoolExpr::Op::Var: return 6;
  }
  return 0;
}

std::string_view symbol(BoolExpr::Op op) {
  switch (op) {
    case BoolExpr::Op::And: return "&";
    case BoolExpr::Op::Or: return "|";
    case BoolExpr::Op::Implies: return "==>";
    case BoolExpr::Op::Iff: return "<==>";
    default: return "";
  }
}

void print(const BoolExpr& e, Parens style, std::string& out) {
  auto child = [&](const BoolExpr& c, bool parens) {
    parens = parens || (style == Parens::Full && c.op() != BoolExpr::Op::Var && c.op() != BoolExpr::Op::Not);
    if (parens) out += '(';
    print(c, style, out);
    if (parens) out += ')';
  };
  const auto op = e.op();
  const int p = precedence(op);
  switch (op) {
    case BoolExpr::Op::Var: out += e.name(); return;
    case BoolExpr::Op::Not:
      out += '~';
      child(e.operand(), precedence(e.operand().op()) < p);
      return;
    default: break;
  }
  const bool right_assoc = op == BoolExpr::Op::Implies || op == BoolExpr::Op::Iff;
  const int lp = precedence(e.lhs().op()), rp = precedence(e.rhs().op());
  child(e.lhs(), right_assoc ? lp <= p : lp < p);
  out += ' ';
  out += symbol(op);
  out += ' ';
  child(e.rhs(), right_assoc ? rp < p : rp <= p);
}

}  // namespace

BoolExpr parse_expr(std::string_view text) { return ExprParser(lex(text)).parse(); }

std::string to_string(const BoolExpr& e, Parens style) {
  std::string out;
  print(e, style, out);
  return out;
}

bool evaluate(const BoolExpr& e, const std::map<std::string, bool>& assignment) {
  switch (e.op()) {
    case BoolExpr::Op::Var: {
      auto it = assignment.find(e.name());
      if (it == assignment.end()) throw UnboundVariable(e.name());
      return it->second;
    }
    case BoolExpr::Op::Not: return !evaluate(e.operand(), assignment);
    case BoolExpr::Op::And: return evaluate(e.lhs(), assignment) && evaluate(e.rhs(), assignment);
    case BoolExpr::Op::Or: return evaluate(e.lhs(), assignment) || evaluate(e.rhs(), assignment);
    case BoolExpr::Op::Implies: return !evaluate(e.lhs(), assignment) || evaluate(e.rhs(), assignment);
    case BoolExpr::Op::Iff: return evaluate(e.lhs(), assignment) == evaluate(e.rhs(), assignment);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Tables: expressions are compiled to a postfix program and evaluated 64 rows
// at a time, one bit per row.

namespace {

struct Instr {
  BoolExpr::Op op;
  std::size_t var = 0;
};

void compile(const BoolExpr& e, const std::map<std::string, std::size_t>& slot, std::vector<Instr>& code) {
  switch (e.op()) {
    case BoolExpr::Op::Var: {
      auto it = slot.find(e.name());
      if (it == slot.end()) throw UnboundVariable(e.name());
      code.push_back({BoolExpr::Op::Var, it->second});
      return;
    }
    case BoolExpr::Op::Not:
      compile(e.operand(), slot, code);
      break;
    default:
      compile(e.lhs(), slot, code);
      compile(e.rhs(), slot, code);
      break;
  }
  code.push_back({e.op()});
}

class Program {
 public:
  Program(const BoolExpr& e, std::span<const std::string> order) : n_(order.size()) {
    std::map<std::string, std::size_t> slot;
    for (std::size_t k = 0; k < order.size(); ++k) slot.emplace(order[k], k);
    compile(e, slot, code_);
  }

  // Bit b of the result is the value on row (word * 64 + b).
  std::uint64_t run(std::size_t word) const {
    std::vector<std::uint64_t> stack;
    stack.reserve(code_.size());
    for (const auto& in : code_) {
      if (in.op == BoolExpr::Op::Var) {
        stack.push_back(column(in.var, word));
        continue;
      }
      if (in.op == BoolExpr::Op::Not) {
        stack.back() = ~stack.back();
        continue;
      }
      const auto r = stack.back();
      stack.pop_back();
      auto& l = stack.back();
      switch (in.op) {
        case BoolExpr::Op::And: l &= r; break;
        case BoolExpr::Op::Or: l |= r; break;
        case BoolExpr::Op::Implies: l = ~l | r; break;
        case BoolExpr::Op::Iff: l = ~(l ^ r); break;
        default: break;
      }
    }
    return stack.back();
  }

 private:
  // Rows where variable k is true, restricted to one 64-row word.
  std::uint64_t column(std::size_t k, std::size_t word) const {
    const std::size_t shift = n_ - 1 - k;
    if (shift >= 6) return ((word >> (shift - 6)) & 1U) ? ~std::uint64_t{0} : 0;
    // Within a word, bit b is set iff bit `shift` of b is set.
    static constexpr std::uint64_t patterns[6] = {
        0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
        0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
    };
    return patterns[shift];
  }

  std::size_t n_;
  std::vector<Instr> code_;
};

std::size_t word_count(std::size_t n) { return n >= 6 ? std::size_t{1} << (n - 6) : 1; }

std::uint64_t valid_mask(std::size_t n) {
  return n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::size_t{1} << n)) - 1;
}

void check_cap(std::size_t n, const TableOptions& options) {
  if (n > options.max_variables) throw VariableLimitExceeded(n, options.max_variables);
}

}  // namespace

TruthTable::TruthTable(std::vector<std::string> variables, std::vector<std::uint64_t> bits)
    : variables_(std::move(variables)), bits_(std::move(bits)) {
  if (variables_.size() >= 63) throw std::invalid_argument("too many variables for a table");
  if (bits_.size() != word_count(variables_.size())) throw std::invalid_argument("table size mismatch");
  bits_.back() &= valid_mask(variables_.size());
}

std::vector<bool> TruthTable::assignment(std::size_t row) const {
  if (row >= row_count()) throw std::out_of_range("row out of range");
  const auto n = variables_.size();
  std::vector<bool> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = (row >> (n - 1 - k)) & 1U;
  return out;
}

std::vector<bool> TruthTable::row(std::size_t r) const {
  auto out = assignment(r);
  out.push_back(result(r));
  return out;
}

std::size_t TruthTable::true_count() const {
  std::size_t c = 0;
  for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

TruthTable truth_table(const BoolExpr& e, std::span<const std::string> order, const TableOptions& options) {
  check_cap(order.size(), options);
  const Program prog(e, order);
  std::vector<std::uint64_t> bits(word_count(order.size()));
  for (std::size_t w = 0; w < bits.size(); ++w) bits[w] = prog.run(w);
  return TruthTable({order.begin(), order.end()}, std::move(bits));
}

TruthTable truth_table(const BoolExpr& e, const TableOptions& options) {
  const auto vars = e.variables();
  return truth_table(e, vars, options);
}

bool is_tautology(const BoolExpr& e, const TableOptions& options) {
  const auto t = truth_table(e, options);
  return t.true_count() == t.row_count();
}

bool is_satisfiable(const BoolExpr& e, const TableOptions& options) { return truth_table(e, options).true_count() > 0; }

std::optional<Counterexample> find_counterexample(std::span<const BoolExpr> premises, const BoolExpr& conclusion,
                                                  const TableOptions& options) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  auto collect = [&](const BoolExpr& e) {
    for (auto& v : e.variables())
      if (seen.insert(v).second) order.push_back(v);
  };
  for (const auto& p : premises) collect(p);
  collect(conclusion);
  check_cap(order.size(), options);

  std::vector<Program> progs;
  for (const auto& p : premises) progs.emplace_back(p, order);
  const Program goal(conclusion, order);
  const auto words = word_count(order.size());
  const auto mask = valid_mask(order.size());
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t all = words == 1 ? mask : ~std::uint64_t{0};
    for (const auto& p : progs) all &= p.run(w);
    const std::uint64_t bad = all & ~goal.run(w);
    if (bad == 0) continue;
    const std::size_t row = w * 64 + static_cast<std::size_t>(std::countr_zero(bad));
    Counterexample c{order, std::vector<bool>(order.size())};
    for (std::size_t k = 0; k < order.size(); ++k) c.values[k] = (row >> (order.size() - 1 - k)) & 1U;
    return c;
  }
  return std::nullopt;
}

bool entails(std::span<const BoolExpr> premises, const BoolExpr& conclusion, const TableOptions& options) {
  return !find_counterexample(premises, conclusion, options).has_value();
}

// ---------------------------------------------------------------------------
// Decomposition

std::string placeholder(std::size_t index) { return "x" + std::to_string(index); }

namespace {

BoolExpr rename(const BoolExpr& e, const std::function<std::string(const std::string&)>& fn) {
  switch (e.op()) {
    case BoolExpr::Op::Var: return BoolExpr::var(fn(e.name()));
    case BoolExpr::Op::Not: return BoolExpr::negate(rename(e.operand(), fn));
    default: return BoolExpr::binary(e.op(), rename(e.lhs(), fn), rename(e.rhs(), fn));
  }
}

}  // namespace

Decomposition decompose(const BoolExpr& e) {
  auto elements = e.variables();
  std::map<std::string, std::size_t> correspondence;
  for (std::size_t k = 0; k < elements.size(); ++k) correspondence.emplace(elements[k], k + 1);
  auto fn = rename(e, [&](const std::string& v) { return placeholder(correspondence.at(v)); });
  return {std::move(elements), std::move(fn), std::move(correspondence)};
}

BoolExpr substitute(const Decomposition& d) {
  std::map<std::string, std::string> back;
  for (const auto& [name, index] : d.correspondence) back.emplace(placeholder(index), name);
  return rename(d.truth_function, [&](const std::string& p) {
    auto it = back.find(p);
    if (it == back.end()) throw UnboundVariable(p);
    return it->second;
  });
}

}  // namespace testcalc::logic
