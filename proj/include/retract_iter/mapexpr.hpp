#pragma once

// A small expression language so mappings and retractions can be declared in
// config files. Grammar (whitespace insignificant):
//
//   expr    := cond ;
//   cond    := or ( "?" expr ":" expr )? ;
//   or      := cmp ;
//   cmp     := add ( ("<"|"<="|">"|">="|"==") add )? ;
//   add     := mul ( ("+"|"-") mul )* ;
//   mul     := unary ( ("*"|"/") unary )* ;
//   unary   := "-" unary | atom ;
//   atom    := NUMBER | IDENT ( "(" expr ("," expr)* ")" )? | "(" expr ")" ;
//
// IDENT matching `x` (dim = 1) or `x<digits>` (dim > 1) is a variable,
// anything else must be a known function name. NUMBER is a decimal literal
// with optional fraction and exponent; no hex, no underscores.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "retract_iter/errors.hpp"
#include "retract_iter/space.hpp"

namespace retract_iter {

enum class CmpOp { Lt, Le, Gt, Ge, Eq };
enum class Func { Sin, Cos, Tan, Tanh, Exp, Log, Sqrt, Abs, Min, Max, Clamp };

struct FuncInfo {
  const char* name;
  Func id;
  int arity;
};

inline constexpr FuncInfo kFuncs[] = {
    {"sin", Func::Sin, 1},   {"cos", Func::Cos, 1},   {"tan", Func::Tan, 1},
    {"tanh", Func::Tanh, 1}, {"exp", Func::Exp, 1},   {"log", Func::Log, 1},
    {"sqrt", Func::Sqrt, 1}, {"abs", Func::Abs, 1},   {"min", Func::Min, 2},
    {"max", Func::Max, 2},   {"clamp", Func::Clamp, 3},
};

struct Expr {
  struct Node {
    enum class Kind { Constant, Variable, Neg, Binary, Compare, Call, Conditional };
    Kind kind = Kind::Constant;
    double value = 0.0;       // Constant
    std::size_t var = 0;      // Variable
    char op = 0;              // Binary: one of + - * /
    CmpOp cmp = CmpOp::Lt;    // Compare
    Func func = Func::Sin;    // Call
    std::vector<int> kids;
    std::size_t pos = 0;      // byte offset into the source text
  };
  std::vector<Node> nodes;
  int root = -1;
  std::size_t dim = 1;

  const Node& at(int i) const { return nodes[static_cast<std::size_t>(i)]; }
};

struct ParseError {
  enum class Kind { UnexpectedToken, UnknownFunction, Arity, UnclosedParen, BadNumber };
  Kind kind = Kind::UnexpectedToken;
  std::size_t position = 0;
  std::string message;
};

inline const char* to_string(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::UnexpectedToken: return "unexpected-token";
    case ParseError::Kind::UnknownFunction: return "unknown-function";
    case ParseError::Kind::Arity: return "arity";
    case ParseError::Kind::UnclosedParen: return "unclosed-paren";
    case ParseError::Kind::BadNumber: return "bad-number";
  }
  return "?";
}

struct ParseResult {
  std::optional<Expr> expr;
  std::optional<ParseError> error;
  bool ok() const { return expr.has_value(); }
};

namespace detail {

struct ParseFail {
  ParseError err;
};

class Parser {
 public:
  Parser(std::string_view src, std::size_t dim) : src_(src), dim_(dim) {}

  Expr run() {
    Expr e;
    e.dim = dim_;
    e.root = parse_expr(e);
    skip_ws();
    if (pos_ != src_.size()) fail(ParseError::Kind::UnexpectedToken, pos_, "trailing input");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t dim_;
  std::size_t pos_ = 0;
  int paren_depth_ = 0;

  [[noreturn]] void fail(ParseError::Kind k, std::size_t at, std::string msg) {
    throw ParseFail{ParseError{k, at, std::move(msg)}};
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ == src_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // EOF where more input was required: inside parentheses this is an
  // unclosed-paren at the EOF offset, otherwise an unexpected token.
  [[noreturn]] void fail_eof() {
    if (paren_depth_ > 0)
      fail(ParseError::Kind::UnclosedParen, pos_, "unterminated parenthesis");
    fail(ParseError::Kind::UnexpectedToken, pos_, "unexpected end of input");
  }

  int add_node(Expr& e, Expr::Node n) {
    e.nodes.push_back(std::move(n));
    return static_cast<int>(e.nodes.size()) - 1;
  }

  int parse_expr(Expr& e) { return parse_cond(e); }

  int parse_cond(Expr& e) {
    int c = parse_cmp(e);
    std::size_t qpos = pos_;
    if (eat('?')) {
      int t = parse_expr(e);
      if (at_end()) fail_eof();
      if (!eat(':'))
        fail(ParseError::Kind::UnexpectedToken, pos_, "expected ':' in conditional");
      int f = parse_expr(e);
      Expr::Node n;
      n.kind = Expr::Node::Kind::Conditional;
      n.kids = {c, t, f};
      n.pos = qpos;
      return add_node(e, std::move(n));
    }
    return c;
  }

  int parse_cmp(Expr& e) {
    int lhs = parse_add(e);
    skip_ws();
    std::size_t oppos = pos_;
    CmpOp op;
    if (pos_ < src_.size() && (src_[pos_] == '<' || src_[pos_] == '>')) {
      bool lt = src_[pos_] == '<';
      ++pos_;
      bool eq = pos_ < src_.size() && src_[pos_] == '=';
      if (eq) ++pos_;
      op = lt ? (eq ? CmpOp::Le : CmpOp::Lt) : (eq ? CmpOp::Ge : CmpOp::Gt);
    } else if (pos_ + 1 < src_.size() && src_[pos_] == '=' && src_[pos_ + 1] == '=') {
      pos_ += 2;
      op = CmpOp::Eq;
    } else {
      return lhs;
    }
    int rhs = parse_add(e);
    Expr::Node n;
    n.kind = Expr::Node::Kind::Compare;
    n.cmp = op;
    n.kids = {lhs, rhs};
    n.pos = oppos;
    return add_node(e, std::move(n));
  }

  int parse_add(Expr& e) {
    int lhs = parse_mul(e);
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      std::size_t oppos = pos_;
      ++pos_;
      int rhs = parse_mul(e);
      Expr::Node n;
      n.kind = Expr::Node::Kind::Binary;
      n.op = c;
      n.kids = {lhs, rhs};
      n.pos = oppos;
      lhs = add_node(e, std::move(n));
    }
  }

  int parse_mul(Expr& e) {
    int lhs = parse_unary(e);
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      std::size_t oppos = pos_;
      ++pos_;
      int rhs = parse_unary(e);
      Expr::Node n;
      n.kind = Expr::Node::Kind::Binary;
      n.op = c;
      n.kids = {lhs, rhs};
      n.pos = oppos;
      lhs = add_node(e, std::move(n));
    }
  }

  int parse_unary(Expr& e) {
    if (peek() == '-') {
      std::size_t oppos = pos_;
      ++pos_;
      int kid = parse_unary(e);
      Expr::Node n;
      n.kind = Expr::Node::Kind::Neg;
      n.kids = {kid};
      n.pos = oppos;
      return add_node(e, std::move(n));
    }
    return parse_atom(e);
  }

  int parse_atom(Expr& e) {
    if (at_end()) fail_eof();
    char c = peek();
    std::size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number(e);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident(e);
    if (c == '(') {
      ++pos_;
      ++paren_depth_;
      int inner = parse_expr(e);
      if (at_end()) fail_eof();
      if (!eat(')'))
        fail(ParseError::Kind::UnexpectedToken, pos_, "expected ')'");
      --paren_depth_;
      return inner;
    }
    fail(ParseError::Kind::UnexpectedToken, start, "expected number, identifier or '('");
  }

  int parse_number(Expr& e) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ == src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        fail(ParseError::Kind::BadNumber, start, "exponent has no digits");
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc{} || ptr != src_.data() + pos_)
      fail(ParseError::Kind::BadNumber, start, "malformed number literal");
    Expr::Node n;
    n.kind = Expr::Node::Kind::Constant;
    n.value = value;
    n.pos = start;
    return add_node(e, std::move(n));
  }

  int parse_ident(Expr& e) {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);

    if (auto var = variable_index(name)) {
      if (*var >= dim_)
        fail(ParseError::Kind::UnknownFunction, start,
             "variable '" + std::string(name) + "' out of range for dimension " +
                 std::to_string(dim_));
      Expr::Node n;
      n.kind = Expr::Node::Kind::Variable;
      n.var = *var;
      n.pos = start;
      return add_node(e, std::move(n));
    }

    const FuncInfo* fi = nullptr;
    for (const auto& f : kFuncs)
      if (name == f.name) {
        fi = &f;
        break;
      }
    if (!fi)
      fail(ParseError::Kind::UnknownFunction, start,
           "unknown identifier '" + std::string(name) + "'");

    if (at_end()) fail_eof();
    if (!eat('('))
      fail(ParseError::Kind::UnexpectedToken, pos_, "expected '(' after function name");
    ++paren_depth_;
    std::vector<int> args;
    for (;;) {
      if (at_end()) fail_eof();
      args.push_back(parse_expr(e));
      if (at_end()) fail_eof();
      if (eat(',')) continue;
      if (eat(')')) break;
      fail(ParseError::Kind::UnexpectedToken, pos_, "expected ',' or ')'");
    }
    --paren_depth_;
    if (static_cast<int>(args.size()) != fi->arity)
      fail(ParseError::Kind::Arity, start,
           std::string(fi->name) + " takes " + std::to_string(fi->arity) + " argument(s), got " +
               std::to_string(args.size()));
    Expr::Node n;
    n.kind = Expr::Node::Kind::Call;
    n.func = fi->id;
    n.kids = std::move(args);
    n.pos = start;
    return add_node(e, std::move(n));
  }

  // `x` is the sole variable in dimension 1; `x0`, `x1`, ... otherwise.
  std::optional<std::size_t> variable_index(std::string_view name) const {
    if (name.empty() || name[0] != 'x') return std::nullopt;
    if (name.size() == 1) return dim_ == 1 ? std::optional<std::size_t>(0) : std::nullopt;
    std::size_t idx = 0;
    for (char c : name.substr(1)) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      idx = idx * 10 + static_cast<std::size_t>(c - '0');
    }
    return dim_ > 1 ? std::optional<std::size_t>(idx) : std::nullopt;
  }
};

}  // namespace detail

inline ParseResult parse(std::string_view source, std::size_t dim) {
  if (dim < 1) throw InvalidInput("parse: dim must be >= 1");
  try {
    detail::Parser p(source, dim);
    return ParseResult{p.run(), std::nullopt};
  } catch (const detail::ParseFail& f) {
    return ParseResult{std::nullopt, f.err};
  }
}

inline double eval_node(const Expr& e, int idx, const Vector& x);

// IEEE-754 evaluation. Conditionals evaluate exactly one branch; division by
// zero and out-of-domain log/sqrt raise EvalError instead of yielding Inf/NaN.
inline double eval(const Expr& e, const Vector& x) {
  if (e.root < 0) throw InvalidInput("eval: empty expression");
  return eval_node(e, e.root, x);
}

inline double eval_node(const Expr& e, int idx, const Vector& x) {
  const Expr::Node& n = e.at(idx);
  switch (n.kind) {
    case Expr::Node::Kind::Constant:
      return n.value;
    case Expr::Node::Kind::Variable:
      if (n.var >= x.size())
        throw InvalidInput("eval: variable index " + std::to_string(n.var) +
                           " exceeds point dimension " + std::to_string(x.size()));
      return x[n.var];
    case Expr::Node::Kind::Neg:
      return -eval_node(e, n.kids[0], x);
    case Expr::Node::Kind::Binary: {
      double a = eval_node(e, n.kids[0], x);
      double b = eval_node(e, n.kids[1], x);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
          if (b == 0.0) throw EvalError("division by zero", n.pos);
          return a / b;
      }
      throw InvalidInput("eval: bad binary op");
    }
    case Expr::Node::Kind::Compare: {
      double a = eval_node(e, n.kids[0], x);
      double b = eval_node(e, n.kids[1], x);
      bool r = false;
      switch (n.cmp) {
        case CmpOp::Lt: r = a < b; break;
        case CmpOp::Le: r = a <= b; break;
        case CmpOp::Gt: r = a > b; break;
        case CmpOp::Ge: r = a >= b; break;
        case CmpOp::Eq: r = a == b; break;  // exact floating equality, documented
      }
      return r ? 1.0 : 0.0;
    }
    case Expr::Node::Kind::Call: {
      auto arg = [&](int i) { return eval_node(e, n.kids[static_cast<std::size_t>(i)], x); };
      switch (n.func) {
        case Func::Sin: return std::sin(arg(0));
        case Func::Cos: return std::cos(arg(0));
        case Func::Tan: return std::tan(arg(0));
        case Func::Tanh: return std::tanh(arg(0));
        case Func::Exp: return std::exp(arg(0));
        case Func::Log: {
          double v = arg(0);
          if (!(v > 0.0)) throw EvalError("log of non-positive value", n.pos);
          return std::log(v);
        }
        case Func::Sqrt: {
          double v = arg(0);
          if (v < 0.0) throw EvalError("sqrt of negative value", n.pos);
          return std::sqrt(v);
        }
        case Func::Abs: return std::abs(arg(0));
        case Func::Min: return std::min(arg(0), arg(1));
        case Func::Max: return std::max(arg(0), arg(1));
        case Func::Clamp: {
          double v = arg(0), lo = arg(1), hi = arg(2);
          return std::min(std::max(v, lo), hi);
        }
      }
      throw InvalidInput("eval: bad function");
    }
    case Expr::Node::Kind::Conditional:
      return eval_node(e, n.kids[0], x) != 0.0 ? eval_node(e, n.kids[1], x)
                                               : eval_node(e, n.kids[2], x);
  }
  throw InvalidInput("eval: bad node kind");
}

inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline void print_node(const Expr& e, int idx, std::string& out) {
  const Expr::Node& n = e.at(idx);
  switch (n.kind) {
    case Expr::Node::Kind::Constant:
      out += format_double(n.value);
      return;
    case Expr::Node::Kind::Variable:
      out += e.dim == 1 ? "x" : "x" + std::to_string(n.var);
      return;
    case Expr::Node::Kind::Neg:
      out += "(-";
      print_node(e, n.kids[0], out);
      out += ")";
      return;
    case Expr::Node::Kind::Binary:
      out += "(";
      print_node(e, n.kids[0], out);
      out += ' ';
      out += n.op;
      out += ' ';
      print_node(e, n.kids[1], out);
      out += ")";
      return;
    case Expr::Node::Kind::Compare: {
      const char* ops[] = {"<", "<=", ">", ">=", "=="};
      out += "(";
      print_node(e, n.kids[0], out);
      out += ' ';
      out += ops[static_cast<int>(n.cmp)];
      out += ' ';
      print_node(e, n.kids[1], out);
      out += ")";
      return;
    }
    case Expr::Node::Kind::Call: {
      for (const auto& f : kFuncs)
        if (f.id == n.func) {
          out += f.name;
          break;
        }
      out += "(";
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) out += ", ";
        print_node(e, n.kids[static_cast<std::size_t>(i)], out);
      }
      out += ")";
      return;
    }
    case Expr::Node::Kind::Conditional:
      out += "(";
      print_node(e, n.kids[0], out);
      out += " ? ";
      print_node(e, n.kids[1], out);
      out += " : ";
      print_node(e, n.kids[2], out);
      out += ")";
      return;
  }
}

// Parenthesized form; reparsing yields a structurally identical Expr.
inline std::string to_string(const Expr& e) {
  std::string out;
  if (e.root >= 0) print_node(e, e.root, out);
  return out;
}

inline bool structurally_equal(const Expr& a, int ia, const Expr& b, int ib) {
  const Expr::Node& na = a.at(ia);
  const Expr::Node& nb = b.at(ib);
  if (na.kind != nb.kind || na.kids.size() != nb.kids.size()) return false;
  switch (na.kind) {
    case Expr::Node::Kind::Constant:
      if (na.value != nb.value) return false;
      break;
    case Expr::Node::Kind::Variable:
      if (na.var != nb.var) return false;
      break;
    case Expr::Node::Kind::Binary:
      if (na.op != nb.op) return false;
      break;
    case Expr::Node::Kind::Compare:
      if (na.cmp != nb.cmp) return false;
      break;
    case Expr::Node::Kind::Call:
      if (na.func != nb.func) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < na.kids.size(); ++i)
    if (!structurally_equal(a, na.kids[i], b, nb.kids[i])) return false;
  return true;
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if ((a.root < 0) != (b.root < 0)) return false;
  if (a.root < 0) return true;
  return structurally_equal(a, a.root, b, b.root);
}

}  // namespace retract_iter
