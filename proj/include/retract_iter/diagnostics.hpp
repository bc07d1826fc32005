#pragma once

// Post-hoc checks that an iteration trace obeys the recursive-bound and
// residual-vanishing machinery, plus rate estimation utilities.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "retract_iter/errors.hpp"
#include "retract_iter/iterate.hpp"
#include "retract_iter/sequences.hpp"
#include "retract_iter/space.hpp"

namespace retract_iter {

// b_n = 2 mu_n M* + (mu_n M*)^2
// c_n = phi(M) M* mu_n^2 + M* lambda_n mu_n M* + mu_n phi(M) + lambda_n
// The c_n expression is kept term for term, doubled M* in the cross term
// included; it is an upper bound, so over-counting is harmless.
inline std::pair<double, double> compute_bn_cn(const SummableSequence& mu,
                                               const SummableSequence& lambda,
                                               double m_const, double m_star,
                                               const PhiSpec& phi, std::size_t n) {
  if (!(m_const > 0.0) || !(m_star > 0.0))
    throw InvalidInput("compute_bn_cn: M and M* must be > 0");
  double mu_n = seq_value(mu, n);
  double lambda_n = seq_value(lambda, n);
  double phi_m = phi_eval(phi, m_const);
  double b = 2.0 * mu_n * m_star + (mu_n * m_star) * (mu_n * m_star);
  double c = phi_m * m_star * mu_n * mu_n + m_star * lambda_n * mu_n * m_star +
             mu_n * phi_m + lambda_n;
  return {b, c};
}

struct BoundCheckReport {
  struct Violation {
    std::size_t n;  // 1-based index of the violated step a_n -> a_{n+1}
    double lhs, rhs;
  };
  std::vector<Violation> violations;
  double tail_sum_b = 0.0;
  double tail_sum_c = 0.0;
  double limit_estimate = 0.0;  // mean of the last 10% of a (meaningful on pass)
  bool pass = false;
};

// Checks a_{n+1} <= (1 + b_n) a_n + c_n + tol over the whole sequence.
inline BoundCheckReport verify_recursive_bound(std::span<const double> a,
                                               std::span<const double> b,
                                               std::span<const double> c, double tol) {
  if (a.size() < 2) throw InvalidInput("verify_recursive_bound: need at least 2 entries");
  if (b.size() + 1 < a.size() || c.size() + 1 < a.size())
    throw InvalidInput("verify_recursive_bound: b and c must cover every step of a");
  for (double v : b)
    if (!(v >= 0.0)) throw InvalidInput("verify_recursive_bound: negative b entry");
  for (double v : c)
    if (!(v >= 0.0)) throw InvalidInput("verify_recursive_bound: negative c entry");

  BoundCheckReport rep;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    double lhs = a[i + 1];
    double rhs = (1.0 + b[i]) * a[i] + c[i];
    if (lhs > rhs + tol) rep.violations.push_back({i + 1, lhs, rhs});
  }
  for (double v : b) rep.tail_sum_b += v;
  for (double v : c) rep.tail_sum_c += v;
  rep.pass = rep.violations.empty() && std::isfinite(rep.tail_sum_b) &&
             std::isfinite(rep.tail_sum_c);

  std::size_t tail = std::max<std::size_t>(1, a.size() / 10);
  double sum = 0.0;
  for (std::size_t i = a.size() - tail; i < a.size(); ++i) sum += a[i];
  rep.limit_estimate = sum / static_cast<double>(tail);
  return rep;
}

struct DecayReport {
  bool pass = false;
  double head_max = 0.0;
  double tail_max = 0.0;
};

// The worst residual over the last `window` rows must improve on the first
// `window` rows and sit below `threshold`. A trace whose residuals are
// identically zero passes trivially.
inline DecayReport residual_decay(const IterTrace& trace, std::size_t window,
                                  double threshold) {
  if (window < 1) throw InvalidInput("residual_decay: window must be >= 1");
  if (trace.rows.size() < 2 * window)
    throw InvalidInput("residual_decay: trace shorter than two windows");
  DecayReport rep;
  for (std::size_t i = 0; i < window; ++i)
    rep.head_max = std::max(rep.head_max, std::max(trace.rows[i].r1, trace.rows[i].r2));
  for (std::size_t i = trace.rows.size() - window; i < trace.rows.size(); ++i)
    rep.tail_max = std::max(rep.tail_max, std::max(trace.rows[i].r1, trace.rows[i].r2));
  rep.pass = (rep.tail_max < rep.head_max || rep.tail_max == 0.0) &&
             rep.tail_max < threshold;
  return rep;
}

// Max over n in the trailing half of ||x_{n+m} - x_n||; small values support
// the Cauchy property of a converged tail.
inline double cauchy_tail(const IterTrace& trace, std::size_t m, const NormSpec& ns = {}) {
  std::size_t len = trace.rows.size();
  if (m < 1 || m >= len) throw InvalidInput("cauchy_tail: need 1 <= m < trace length");
  std::size_t lo = len / 2;
  if (lo + m >= len) lo = 0;  // short trace: fall back to the whole valid range
  double worst = 0.0;
  for (std::size_t i = lo; i + m < len; ++i)
    worst = std::max(worst, distance(trace.rows[i + m].x, trace.rows[i].x, ns));
  return worst;
}

inline double distance_to_set(const Vector& x, const std::vector<Vector>& points,
                              const NormSpec& ns = {}) {
  if (points.empty()) throw InvalidInput("distance_to_set: empty point set");
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& p : points) best = std::min(best, distance(x, p, ns));
  return best;
}

struct RateReport {
  enum class Model { Linear, Sublinear };
  Model model = Model::Sublinear;
  double rho = 0.0;           // contraction factor estimate when Linear
  double fit_residual = 0.0;  // RMS residual of the log-linear fit
  std::size_t points_used = 0;
};

// Least-squares fit of log(step_delta) against n over the final third of the
// trace. Rows without a positive step are excluded.
inline RateReport rate_estimate(const IterTrace& trace) {
  std::size_t len = trace.rows.size();
  if (len < 3) throw InvalidInput("rate_estimate: trace too short");
  std::size_t start = (2 * len) / 3;
  std::vector<std::pair<double, double>> pts;  // (n, log delta)
  for (std::size_t i = start; i < len; ++i) {
    const auto& row = trace.rows[i];
    if (row.step_delta && *row.step_delta > 0.0)
      pts.emplace_back(static_cast<double>(row.n), std::log(*row.step_delta));
  }
  if (pts.size() < 2)
    throw InvalidInput("rate_estimate: no usable positive steps in the trace tail");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [xi, yi] : pts) {
    sx += xi;
    sy += yi;
    sxx += xi * xi;
    sxy += xi * yi;
  }
  double n = static_cast<double>(pts.size());
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InvalidInput("rate_estimate: degenerate abscissae");
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;

  double ss = 0.0;
  for (auto [xi, yi] : pts) {
    double r = yi - (slope * xi + intercept);
    ss += r * r;
  }
  RateReport rep;
  rep.points_used = pts.size();
  rep.fit_residual = std::sqrt(ss / n);
  rep.rho = std::exp(slope);
  rep.model = (rep.fit_residual < 0.1 && rep.rho > 0.0 && rep.rho < 1.0)
                  ? RateReport::Model::Linear
                  : RateReport::Model::Sublinear;
  return rep;
}

}  // namespace retract_iter
