#pragma once

// The iteration engine. The central two-mapping scheme iterates
//
//   y_n     = (1 - beta_n) x_n + beta_n (PT1)^n x_n
//   x_{n+1} = (1 - alpha_n) (PT1)^n y_n + alpha_n (PT2)^n y_n
//
// with (PT)^n recomputed by literal n-fold composition at every step, so a
// run of N steps costs O(N^2) mapping applications. Mann and Ishikawa
// baselines use the same powered composition with T1 only.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "retract_iter/errors.hpp"
#include "retract_iter/mappings.hpp"
#include "retract_iter/sequences.hpp"
#include "retract_iter/space.hpp"

namespace retract_iter {

enum class Scheme { PaperB, Mann, Ishikawa };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::PaperB: return "paper_b";
    case Scheme::Mann: return "mann";
    case Scheme::Ishikawa: return "ishikawa";
  }
  return "?";
}

enum class StopReason { TolReached, MaxIter, Stagnation };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::TolReached: return "tol-reached";
    case StopReason::MaxIter: return "max-iter";
    case StopReason::Stagnation: return "stagnation";
  }
  return "?";
}

struct RunConfig {
  Scheme scheme = Scheme::PaperB;
  StepSequence alpha = StepSequence::constant(0.5);
  StepSequence beta = StepSequence::constant(0.5);
  Vector x1;
  std::size_t max_iter = 500;          // caps the number of recorded iterates
  double residual_tol = 1e-8;          // 0 disables tol-driven stopping
  bool record_power_gap = false;
  std::size_t stagnation_window = 10;  // consecutive steps below 1e-16; 0 disables
  NormSpec norm_spec;
  std::string label;                   // used by compare outputs
};

struct TraceRow {
  std::size_t n = 0;
  Vector x;
  std::optional<Vector> y;          // two-step schemes only
  double r1 = 0.0;                  // |x_n - PT1 x_n|
  double r2 = 0.0;                  // |x_n - PT2 x_n|
  std::optional<double> dist_p;     // |x_n - p| when a reference p is supplied
  std::optional<double> power_gap;  // |(PT1)^n y_n - (PT2)^n y_n|
  std::optional<double> step_delta; // |x_{n+1} - x_n|; absent on the terminal row
};

struct IterTrace {
  std::vector<TraceRow> rows;
  StopReason reason = StopReason::MaxIter;

  const TraceRow& back() const { return rows.back(); }
  std::size_t iterations() const { return rows.size(); }
};

inline constexpr double kDriftTol = 1e-12;
inline constexpr double kStagnationDelta = 1e-16;

namespace detail {

// Convex combinations of points of K stay in K up to rounding; repair only
// drift beyond kDriftTol, and repair it with the pair's own retraction.
inline Vector fix_drift(const ConvexDomain& k, const RetractionDef& p, const Vector& v) {
  if (contains(k, v, kDriftTol)) return v;
  return retract(p, v);
}

}  // namespace detail

inline IterTrace run_scheme(const RunConfig& cfg, const MappingPair& pair,
                            const std::optional<Vector>& reference_p = std::nullopt) {
  const ConvexDomain& k = pair.domain();
  if (cfg.x1.size() != pair.dim()) throw InvalidInput("run_scheme: x1 dimension mismatch");
  if (!contains(k, cfg.x1, kDomainTol)) throw InvalidInput("run_scheme: x1 outside domain");
  if (cfg.max_iter < 1) throw InvalidInput("run_scheme: max_iter must be >= 1");
  if (!(cfg.residual_tol >= 0.0)) throw InvalidInput("run_scheme: residual_tol must be >= 0");
  if (reference_p && reference_p->size() != pair.dim())
    throw InvalidInput("run_scheme: reference point dimension mismatch");

  const NormSpec& ns = cfg.norm_spec;
  IterTrace trace;
  Vector x = cfg.x1;
  std::size_t stagnant = 0;

  for (std::size_t n = 1;; ++n) {
    TraceRow row;
    row.n = n;
    row.x = x;
    try {
      row.r1 = distance(x, pt_apply(pair.t1, pair.p, x), ns);
      row.r2 = distance(x, pt_apply(pair.t2, pair.p, x), ns);
    } catch (const DomainViolation& e) {
      throw NumericalBlowup(std::string("iterate left the domain at n=") + std::to_string(n) +
                                ": " + e.what(),
                            static_cast<int>(n));
    } catch (const EvalError& e) {
      throw NumericalBlowup(std::string("evaluation failed at n=") + std::to_string(n) + ": " +
                                e.what(),
                            static_cast<int>(n));
    }
    if (reference_p) row.dist_p = distance(x, *reference_p, ns);

    if (cfg.residual_tol > 0.0 && std::max(row.r1, row.r2) <= cfg.residual_tol) {
      trace.rows.push_back(std::move(row));
      trace.reason = StopReason::TolReached;
      break;
    }
    if (n == cfg.max_iter) {
      trace.rows.push_back(std::move(row));
      trace.reason = StopReason::MaxIter;
      break;
    }

    double alpha_n = seq_value(cfg.alpha, n);
    double beta_n = seq_value(cfg.beta, n);
    Vector x_next;
    try {
      switch (cfg.scheme) {
        case Scheme::PaperB: {
          Vector y = lincomb(1.0 - beta_n, x, beta_n, pt_power(pair.t1, pair.p, n, x));
          y = detail::fix_drift(k, pair.p, y);
          Vector u1 = pt_power(pair.t1, pair.p, n, y);
          Vector u2 = pt_power(pair.t2, pair.p, n, y);
          x_next = lincomb(1.0 - alpha_n, u1, alpha_n, u2);
          if (cfg.record_power_gap) row.power_gap = distance(u1, u2, ns);
          row.y = std::move(y);
          break;
        }
        case Scheme::Mann: {
          x_next = lincomb(1.0 - alpha_n, x, alpha_n, pt_power(pair.t1, pair.p, n, x));
          break;
        }
        case Scheme::Ishikawa: {
          Vector y = lincomb(1.0 - beta_n, x, beta_n, pt_power(pair.t1, pair.p, n, x));
          y = detail::fix_drift(k, pair.p, y);
          x_next = lincomb(1.0 - alpha_n, x, alpha_n, pt_power(pair.t1, pair.p, n, y));
          row.y = std::move(y);
          break;
        }
      }
      x_next = detail::fix_drift(k, pair.p, x_next);
    } catch (const DomainViolation& e) {
      throw NumericalBlowup(std::string("iterate left the domain at n=") + std::to_string(n) +
                                ": " + e.what(),
                            static_cast<int>(n));
    } catch (const EvalError& e) {
      throw NumericalBlowup(std::string("evaluation failed at n=") + std::to_string(n) + ": " +
                                e.what(),
                            static_cast<int>(n));
    }
    if (!all_finite(x_next))
      throw NumericalBlowup("non-finite iterate at n=" + std::to_string(n),
                            static_cast<int>(n));

    double delta = distance(x_next, x, ns);
    row.step_delta = delta;
    trace.rows.push_back(std::move(row));

    stagnant = delta < kStagnationDelta ? stagnant + 1 : 0;
    if (cfg.stagnation_window > 0 && stagnant >= cfg.stagnation_window) {
      trace.reason = StopReason::Stagnation;
      break;
    }
    x = std::move(x_next);
  }
  return trace;
}

struct RunOutcome {
  enum class Status { Ok, InvalidInput, NumericalFailure };

  std::string label;
  Status status = Status::Ok;
  std::optional<IterTrace> trace;
  std::string error;
};

inline const char* to_string(RunOutcome::Status s) {
  switch (s) {
    case RunOutcome::Status::Ok: return "ok";
    case RunOutcome::Status::InvalidInput: return "invalid-input";
    case RunOutcome::Status::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

// One trace per config, in input order. A failing run is reported in place
// and does not abort the others. Callers are expected to hand in configs
// sharing one x1; the CLI validates that before building the configs.
inline std::vector<RunOutcome> compare_schemes(const std::vector<RunConfig>& cfgs,
                                               const MappingPair& pair,
                                               const std::optional<Vector>& reference_p =
                                                   std::nullopt) {
  std::vector<RunOutcome> out;
  for (const RunConfig& cfg : cfgs) {
    RunOutcome o;
    o.label = cfg.label.empty() ? to_string(cfg.scheme) : cfg.label;
    try {
      o.trace = run_scheme(cfg, pair, reference_p);
    } catch (const InvalidInput& e) {
      o.status = RunOutcome::Status::InvalidInput;
      o.error = e.what();
    } catch (const NumericalBlowup& e) {
      o.status = RunOutcome::Status::NumericalFailure;
      o.error = e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace retract_iter
