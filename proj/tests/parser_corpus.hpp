#pragma once

// Shared expression test vectors. The acceptance suite and the parser unit
// tests both run this corpus, so keep expectations here and nowhere else.

#include <cstddef>
#include <optional>
#include <vector>

#include "retract_iter/mapexpr.hpp"

namespace corpus {

struct ValidCase {
  const char* source;
  std::size_t dim;
  std::vector<double> at;                // evaluation point
  std::optional<double> expected;        // nullopt: evaluation not asserted
};

struct InvalidCase {
  const char* source;
  std::size_t dim;
  retract_iter::ParseError::Kind kind;
  std::size_t position;
};

inline const std::vector<ValidCase>& valid_cases() {
  static const std::vector<ValidCase> cases = {
      {"x", 1, {0.25}, 0.25},
      {"3.5", 1, {0.0}, 3.5},
      {"2e-3", 1, {0.0}, 0.002},
      {"1.25E2", 1, {0.0}, 125.0},
      {"-2*sin(x/2)", 1, {0.0}, 0.0},
      {"-2*sin(x/2)", 1, {1.0}, -0.958851077208406},
      // the two built-in piecewise example mappings
      {"x >= 0 ? -2*sin(x/2) : 2*sin(x/2)", 1, {1.0}, -0.958851077208406},
      {"x >= 0 ? -2*sin(x/2) : 2*sin(x/2)", 1, {-1.0}, -0.958851077208406},
      {"x >= 0 ? x : -x", 1, {-0.3}, 0.3},
      {"x >= 0 ? x : -x", 1, {0.7}, 0.7},
      {"1 + 2*3", 1, {0.0}, 7.0},
      {"(1 + 2)*3", 1, {0.0}, 9.0},
      {"2 - 3 - 4", 1, {0.0}, -5.0},  // left associative
      {"12/4/3", 1, {0.0}, 1.0},
      {"--1", 1, {0.0}, 1.0},
      {"-x*x", 1, {3.0}, -9.0},
      {"min(2, max(x, 0))", 1, {5.0}, 2.0},
      {"clamp(x, -1, 1)", 1, {7.0}, 1.0},
      {"abs(x - 4)", 1, {1.0}, 3.0},
      {"sqrt(abs(x))", 1, {-9.0}, 3.0},
      {"exp(0) + log(1)", 1, {0.0}, 1.0},
      {"tanh(0) + tan(0) + cos(0)", 1, {0.0}, 1.0},
      {"x0 + 2*x1", 2, {1.0, 10.0}, 21.0},
      {"x1 >= x0 ? x1 - x0 : x0 - x1", 2, {4.0, 1.5}, 2.5},
      {"x < 1 ? 10 : 20", 1, {0.5}, 10.0},
      {"x == 0 ? 1 : 2", 1, {0.0}, 1.0},
      {"1 < 2", 1, {0.0}, 1.0},
      {"(x <= 0.5) * 4", 1, {0.25}, 4.0},
      {"0.5*x + 0.5*sin(x)", 1, {0.0}, 0.0},
      {"x/2 - x/4", 1, {1.0}, 0.25},
      {"x > 0 ? (x > 1 ? 2 : 1) : 0", 1, {1.5}, 2.0},
  };
  return cases;
}

inline const std::vector<InvalidCase>& invalid_cases() {
  using Kind = retract_iter::ParseError::Kind;
  static const std::vector<InvalidCase> cases = {
      {"sin(", 1, Kind::UnclosedParen, 4},
      {"(x", 1, Kind::UnclosedParen, 2},
      {"sin(x", 1, Kind::UnclosedParen, 5},
      {"min(1, ", 1, Kind::UnclosedParen, 7},
      {"", 1, Kind::UnexpectedToken, 0},
      {")", 1, Kind::UnexpectedToken, 0},
      {"1 +", 1, Kind::UnexpectedToken, 3},
      {"1 2", 1, Kind::UnexpectedToken, 2},
      {"x ? 1", 1, Kind::UnexpectedToken, 5},
      {"1 < 2 < 3", 1, Kind::UnexpectedToken, 6},
      {"x = 1", 1, Kind::UnexpectedToken, 2},
      {"sin()", 1, Kind::UnexpectedToken, 4},
      {".5", 1, Kind::UnexpectedToken, 0},
      {"foo(1)", 1, Kind::UnknownFunction, 0},
      {"y + 1", 1, Kind::UnknownFunction, 0},
      {"x1", 1, Kind::UnknownFunction, 0},       // dim 1 has only `x`
      {"x", 2, Kind::UnknownFunction, 0},        // dim > 1 needs an index
      {"x2 + 1", 2, Kind::UnknownFunction, 0},   // index out of range
      {"sin(x, 1)", 1, Kind::Arity, 0},
      {"min(1)", 1, Kind::Arity, 0},
      {"clamp(1, 2)", 1, Kind::Arity, 0},
      {"2 * max(1)", 1, Kind::Arity, 4},
      {"1e", 1, Kind::BadNumber, 0},
      {"1e+", 1, Kind::BadNumber, 0},
      {"3 + 1e*2", 1, Kind::BadNumber, 4},
      {"1e99999", 1, Kind::BadNumber, 0},
  };
  return cases;
}

}  // namespace corpus
