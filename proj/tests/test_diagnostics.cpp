#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "retract_iter/diagnostics.hpp"

using namespace retract_iter;

namespace {

IterTrace synthetic_trace(const std::vector<double>& xs) {
  IterTrace t;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    TraceRow row;
    row.n = i + 1;
    row.x = {xs[i]};
    row.r1 = row.r2 = std::abs(xs[i]);
    if (i + 1 < xs.size()) row.step_delta = std::abs(xs[i + 1] - xs[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

TEST_CASE("compute_bn_cn substitutes the perturbation terms", "[diagnostics]") {
  auto [b0, c0] = compute_bn_cn(SummableSequence::zero(), SummableSequence::zero(), 1.0, 1.0,
                                PhiSpec::identity(), 5);
  CHECK(b0 == 0.0);
  CHECK(c0 == 0.0);

  auto mu = SummableSequence::table({0.1}, 0.0);
  auto [b1, c1] = compute_bn_cn(mu, SummableSequence::zero(), 1.0, 1.0,
                                PhiSpec::identity(), 1);
  CHECK(b1 == Catch::Approx(0.21).margin(1e-15));
  CHECK(c1 == Catch::Approx(0.11).margin(1e-15));

  auto lam = SummableSequence::table({0.5}, 0.0);
  auto [b2, c2] = compute_bn_cn(SummableSequence::zero(), lam, 2.0, 3.0,
                                PhiSpec::identity(), 1);
  CHECK(b2 == 0.0);
  CHECK(c2 == 0.5);  // only the additive term survives
}

TEST_CASE("compute_bn_cn outputs are nonnegative and summable", "[diagnostics]") {
  auto mu = SummableSequence::inverse_power(0.5, 2.0);
  auto lam = SummableSequence::geometric(1.0, 0.8);
  double sum_b = 0.0, sum_c = 0.0;
  for (std::size_t n = 1; n <= 1000000; ++n) {
    auto [b, c] = compute_bn_cn(mu, lam, 2.0, 1.5, PhiSpec::identity(), n);
    REQUIRE(b >= 0.0);
    REQUIRE(c >= 0.0);
    sum_b += b;
    sum_c += c;
  }
  // closed-form bounds assembled from the series bounds of the inputs
  double s_mu = series_bound(mu), s_lam = series_bound(lam);
  double mu1 = seq_value(mu, 1), lam1 = seq_value(lam, 1);
  double m_star = 1.5, phi_m = 2.0;
  double bound_b = 2.0 * m_star * s_mu + m_star * m_star * mu1 * s_mu;
  double bound_c = phi_m * m_star * mu1 * s_mu + m_star * m_star * lam1 * s_mu +
                   phi_m * s_mu + s_lam;
  CHECK(sum_b <= bound_b);
  CHECK(sum_c <= bound_c);
}

TEST_CASE("verify_recursive_bound flags violations", "[diagnostics]") {
  std::vector<double> a{1.0, 3.0};
  std::vector<double> b{0.0}, c{0.0};
  auto rep = verify_recursive_bound(a, b, c, 0.0);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].n == 1);
  CHECK(rep.violations[0].lhs == 3.0);
  CHECK(rep.violations[0].rhs == 1.0);
}

TEST_CASE("verify_recursive_bound accepts constant sequences", "[diagnostics]") {
  std::vector<double> a(40, 1.0);
  std::vector<double> zero(40, 0.0);
  auto rep = verify_recursive_bound(a, zero, zero, 0.0);
  CHECK(rep.pass);
  CHECK(rep.violations.empty());
  CHECK(rep.limit_estimate == 1.0);
}

TEST_CASE("with zero b and c the bound holds iff a is non-increasing", "[diagnostics]") {
  std::mt19937_64 gen(42);
  auto u01 = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(20);
    a[0] = 1.0 + u01();
    bool increasing_somewhere = false;
    for (std::size_t i = 1; i < a.size(); ++i) {
      double step = u01() - 0.4;
      a[i] = std::max(0.0, a[i - 1] + step);
      if (a[i] > a[i - 1]) increasing_somewhere = true;
    }
    std::vector<double> zero(a.size(), 0.0);
    auto rep = verify_recursive_bound(a, zero, zero, 0.0);
    CHECK(rep.pass == !increasing_somewhere);
  }
}

TEST_CASE("verify_recursive_bound rejects malformed input", "[diagnostics]") {
  std::vector<double> one{1.0};
  std::vector<double> ok{0.0};
  CHECK_THROWS_AS(verify_recursive_bound(one, ok, ok, 0.0), InvalidInput);
  std::vector<double> a{1.0, 1.0};
  std::vector<double> neg{-0.1, 0.0};
  std::vector<double> z{0.0, 0.0};
  CHECK_THROWS_AS(verify_recursive_bound(a, neg, z, 0.0), InvalidInput);
  CHECK_THROWS_AS(verify_recursive_bound(a, z, neg, 0.0), InvalidInput);
}

TEST_CASE("residual decay compares first and last windows", "[diagnostics]") {
  std::vector<double> decaying;
  for (int i = 0; i < 120; ++i) decaying.push_back(std::pow(0.9, i));
  auto rep = residual_decay(synthetic_trace(decaying), 50, 1e-2);
  CHECK(rep.pass);
  CHECK(rep.tail_max < rep.head_max);

  std::vector<double> flat(120, 0.5);
  CHECK_FALSE(residual_decay(synthetic_trace(flat), 50, 1e-2).pass);

  std::vector<double> zero(120, 0.0);
  CHECK(residual_decay(synthetic_trace(zero), 50, 1e-2).pass);  // trivially

  CHECK_THROWS_AS(residual_decay(synthetic_trace(flat), 80, 1e-2), InvalidInput);
}

TEST_CASE("cauchy_tail of a constant trace is zero", "[diagnostics]") {
  auto t = synthetic_trace(std::vector<double>(30, 0.7));
  CHECK(cauchy_tail(t, 10) == 0.0);
  CHECK_THROWS_AS(cauchy_tail(t, 30), InvalidInput);
  CHECK_THROWS_AS(cauchy_tail(t, 0), InvalidInput);
}

TEST_CASE("distance_to_set takes the closest point", "[diagnostics]") {
  CHECK(distance_to_set({0.5}, {{0.0}}) == 0.5);
  CHECK(distance_to_set({0.5}, {{0.0}, {0.5}}) == 0.0);
  CHECK(distance_to_set({-1.0}, {{0.0}, {1.0}}) == 1.0);
  CHECK_THROWS_AS(distance_to_set({0.0}, {}), InvalidInput);
  std::mt19937_64 gen(7);
  for (int i = 0; i < 100; ++i) {
    Vector x{static_cast<double>(gen() >> 11) * 0x1.0p-53};
    CHECK(distance_to_set(x, {x}) == 0.0);
  }
}

TEST_CASE("rate estimate recovers a geometric contraction", "[diagnostics]") {
  std::vector<double> xs;
  for (int i = 0; i < 60; ++i) xs.push_back(std::pow(0.5, i));
  auto rep = rate_estimate(synthetic_trace(xs));
  CHECK(rep.model == RateReport::Model::Linear);
  CHECK(rep.rho == Catch::Approx(0.5).margin(0.01));
  CHECK(rep.fit_residual < 0.1);
}

TEST_CASE("rate estimate rejects traces without positive steps", "[diagnostics]") {
  auto t = synthetic_trace(std::vector<double>(30, 1.0));  // all deltas zero
  CHECK_THROWS_AS(rate_estimate(t), InvalidInput);
}

TEST_CASE("a mann run on the example pair yields a finite rate report", "[diagnostics]") {
  MappingDef t1 = registry_get("paper_t1");
  MappingPair pair(t1, registry_get("paper_t2"), RetractionDef::identity_on(t1.domain));
  RunConfig cfg;
  cfg.scheme = Scheme::Mann;
  cfg.alpha = StepSequence::constant(0.3);
  cfg.x1 = {1.0};
  cfg.max_iter = 200;
  cfg.residual_tol = 1e-10;
  IterTrace trace = run_scheme(cfg, pair);
  auto decay = residual_decay(trace, 10, 1e-6);
  CHECK(decay.pass);
  auto rep = rate_estimate(trace);
  CHECK(std::isfinite(rep.fit_residual));
  CHECK(rep.points_used >= 2);
}
