#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "retract_iter/sequences.hpp"

using namespace retract_iter;

TEST_CASE("step sequences emit their documented values", "[sequences]") {
  CHECK(seq_value(StepSequence::constant(0.5), 7) == 0.5);
  CHECK(seq_value(StepSequence::clipped_harmonic(0.1, 1.0), 100) == 0.1);
  CHECK(seq_value(StepSequence::clipped_harmonic(0.1, 1.0), 1) == 0.9);
  CHECK(seq_value(StepSequence::clipped_harmonic(0.2, 2.0), 4) == 0.5);
  CHECK(seq_value(StepSequence::table({0.1, 0.9}), 2) == 0.9);
}

TEST_CASE("clipped harmonic stays inside [eps, 1-eps]", "[sequences]") {
  auto s = StepSequence::clipped_harmonic(0.05, 3.0);
  for (std::size_t n = 1; n <= 1000; ++n) {
    double v = seq_value(s, n);
    CHECK(v >= 0.05);
    CHECK(v <= 0.95);
  }
}

TEST_CASE("step sequence validation", "[sequences]") {
  CHECK_NOTHROW(StepSequence::constant(0.0));  // degenerate endpoints are allowed
  CHECK_NOTHROW(StepSequence::constant(1.0));
  CHECK_THROWS_AS(StepSequence::constant(1.2), InvalidInput);
  CHECK_THROWS_AS(StepSequence::constant(-0.1), InvalidInput);
  CHECK_THROWS_AS(StepSequence::clipped_harmonic(0.5, 1.0), InvalidInput);
  CHECK_THROWS_AS(StepSequence::clipped_harmonic(0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(StepSequence::table({1.5}), InvalidInput);
  CHECK_THROWS_AS(StepSequence::table({}), InvalidInput);
  CHECK_THROWS_AS(seq_value(StepSequence::table({0.5}), 2), InvalidInput);
  CHECK_THROWS_AS(seq_value(StepSequence::constant(0.5), 0), InvalidInput);
}

TEST_CASE("summable sequences emit their documented values", "[sequences]") {
  CHECK(seq_value(SummableSequence::zero(), 17) == 0.0);
  CHECK(seq_value(SummableSequence::inverse_power(1.0, 2.0), 2) == 0.25);
  CHECK(seq_value(SummableSequence::geometric(1.0, 0.5), 3) == 0.125);
  CHECK(seq_value(SummableSequence::table({0.3, 0.2}, 0.0), 1) == 0.3);
}

TEST_CASE("summable sequence validation", "[sequences]") {
  CHECK_THROWS_AS(SummableSequence::inverse_power(1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(SummableSequence::inverse_power(-1.0, 2.0), InvalidInput);
  CHECK_THROWS_AS(SummableSequence::geometric(1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(SummableSequence::table({-0.1}, 0.0), InvalidInput);
  CHECK_THROWS_AS(SummableSequence::table({0.1}, -1.0), InvalidInput);
  CHECK_THROWS_AS(seq_value(SummableSequence::table({0.1}, 0.0), 2), InvalidInput);
}

TEST_CASE("partial sums stay below the closed-form series bound", "[sequences]") {
  auto ip = SummableSequence::inverse_power(1.0, 2.0);
  auto geo = SummableSequence::geometric(2.0, 0.9);
  double sum_ip = 0.0, sum_geo = 0.0;
  for (std::size_t n = 1; n <= 1000000; ++n) {
    sum_ip += seq_value(ip, n);
    sum_geo += seq_value(geo, n);
  }
  CHECK(sum_ip <= series_bound(ip));
  CHECK(sum_geo <= series_bound(geo) + 1e-9);
  CHECK(series_bound(SummableSequence::zero()) == 0.0);
  CHECK(series_bound(SummableSequence::table({0.5, 0.25}, 1.0)) == 1.75);
}

TEST_CASE("phi kinds are increasing gauges vanishing at zero", "[sequences]") {
  const PhiSpec specs[] = {PhiSpec::identity(), PhiSpec::linear(0.25), PhiSpec::power(2.0)};
  for (const auto& s : specs) {
    CHECK(phi_eval(s, 0.0) == 0.0);
    double prev = 0.0;
    for (double t : {0.1, 0.5, 1.0, 4.0}) {
      double v = phi_eval(s, t);
      CHECK(v > prev);
      prev = v;
    }
  }
  CHECK(phi_eval(PhiSpec::identity(), 0.7) == 0.7);
  CHECK(phi_eval(PhiSpec::linear(0.25), 2.0) == 0.5);
  CHECK(phi_eval(PhiSpec::power(2.0), 3.0) == 9.0);
  CHECK_THROWS_AS(PhiSpec::linear(0.0), InvalidInput);
  CHECK_THROWS_AS(PhiSpec::power(0.5), InvalidInput);
}
