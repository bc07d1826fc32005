#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "parser_corpus.hpp"
#include "retract_iter/mapexpr.hpp"

using namespace retract_iter;

namespace {

Expr must_parse(const char* src, std::size_t dim = 1) {
  ParseResult r = parse(src, dim);
  REQUIRE(r.ok());
  return *r.expr;
}

}  // namespace

TEST_CASE("parses the product of a negated constant and a call", "[mapexpr]") {
  Expr e = must_parse("-2*sin(x/2)");
  const auto& root = e.at(e.root);
  REQUIRE(root.kind == Expr::Node::Kind::Binary);
  CHECK(root.op == '*');
  CHECK(e.at(root.kids[0]).kind == Expr::Node::Kind::Neg);
  const auto& call = e.at(root.kids[1]);
  REQUIRE(call.kind == Expr::Node::Kind::Call);
  CHECK(call.func == Func::Sin);
}

TEST_CASE("parses a piecewise definition as a conditional", "[mapexpr]") {
  Expr e = must_parse("x >= 0 ? -2*sin(x/2) : 2*sin(x/2)");
  const auto& root = e.at(e.root);
  REQUIRE(root.kind == Expr::Node::Kind::Conditional);
  CHECK(e.at(root.kids[0]).kind == Expr::Node::Kind::Compare);
  CHECK(e.at(root.kids[0]).cmp == CmpOp::Ge);
}

TEST_CASE("reports an unclosed paren at the end of input", "[mapexpr]") {
  ParseResult r = parse("sin(", 1);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->kind == ParseError::Kind::UnclosedParen);
  CHECK(r.error->position == 4);
}

TEST_CASE("valid corpus entries parse, evaluate and round-trip", "[mapexpr]") {
  for (const auto& c : corpus::valid_cases()) {
    INFO("source: " << c.source);
    ParseResult r = parse(c.source, c.dim);
    REQUIRE(r.ok());
    if (c.expected)
      CHECK(eval(*r.expr, c.at) == Catch::Approx(*c.expected).margin(1e-12));

    std::string printed = to_string(*r.expr);
    INFO("printed: " << printed);
    ParseResult again = parse(printed, c.dim);
    REQUIRE(again.ok());
    CHECK(structurally_equal(*r.expr, *again.expr));
  }
}

TEST_CASE("invalid corpus entries report the documented kind and position", "[mapexpr]") {
  for (const auto& c : corpus::invalid_cases()) {
    INFO("source: " << c.source);
    ParseResult r = parse(c.source, c.dim);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error->kind == c.kind);
    CHECK(r.error->position == c.position);
    CHECK(r.error->position <= std::string_view(c.source).size());
  }
}

TEST_CASE("parse is pure", "[mapexpr]") {
  for (const auto& c : corpus::valid_cases()) {
    ParseResult a = parse(c.source, c.dim);
    ParseResult b = parse(c.source, c.dim);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(structurally_equal(*a.expr, *b.expr));
  }
  for (const auto& c : corpus::invalid_cases()) {
    ParseResult a = parse(c.source, c.dim);
    ParseResult b = parse(c.source, c.dim);
    CHECK(a.error->kind == b.error->kind);
    CHECK(a.error->position == b.error->position);
  }
}

TEST_CASE("eval of the identity expression returns the coordinate", "[mapexpr]") {
  Expr e = must_parse("x");
  for (double v : {-3.25, 0.0, 1e-9, 17.5}) CHECK(eval(e, {v}) == v);
  Expr e1 = must_parse("x1", 3);
  CHECK(eval(e1, {1.0, 2.0, 3.0}) == 2.0);
}

TEST_CASE("frozen evaluation values", "[mapexpr]") {
  Expr t1 = must_parse("-2*sin(x/2)");
  CHECK(eval(t1, {0.0}) == 0.0);
  CHECK(eval(t1, {1.0}) == Catch::Approx(-0.958851077208406).margin(1e-15));
  Expr t2 = must_parse("x >= 0 ? x : -x");
  CHECK(eval(t2, {-0.3}) == 0.3);
}

TEST_CASE("evaluation domain errors carry the node position", "[mapexpr]") {
  Expr div = must_parse("1/(x - 1)");
  CHECK_THROWS_AS(eval(div, {1.0}), EvalError);
  CHECK(eval(div, {3.0}) == 0.5);

  Expr lg = must_parse("log(x)");
  CHECK_THROWS_AS(eval(lg, {0.0}), EvalError);
  CHECK_THROWS_AS(eval(lg, {-1.0}), EvalError);
  try {
    eval(lg, {-1.0});
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(e.position == 0);
  }

  Expr sq = must_parse("sqrt(x)");
  CHECK_THROWS_AS(eval(sq, {-4.0}), EvalError);
  CHECK(eval(sq, {4.0}) == 2.0);
}

TEST_CASE("conditionals evaluate exactly one branch", "[mapexpr]") {
  // the dead branch would divide by zero if it were evaluated
  Expr e = must_parse("x > 0 ? x : 1/x");
  CHECK(eval(e, {2.0}) == 2.0);
  CHECK_THROWS_AS(eval(e, {0.0}), EvalError);
}

TEST_CASE("comparison uses exact floating equality", "[mapexpr]") {
  Expr e = must_parse("x == 0.1 ? 1 : 0");
  CHECK(eval(e, {0.1}) == 1.0);
  CHECK(eval(e, {0.1 + 1e-18}) == 1.0);  // rounds to the same double
  CHECK(eval(e, {0.10000001}) == 0.0);
}

TEST_CASE("parse rejects dim zero", "[mapexpr]") {
  CHECK_THROWS_AS(parse("x", 0), InvalidInput);
}
