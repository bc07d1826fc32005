#pragma once

// Step-size and perturbation schedules, and the gauge function phi shared by
// the certifier and the diagnostics.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "retract_iter/errors.hpp"

namespace retract_iter {

// alpha_n / beta_n schedules. clipped_harmonic values are pinned to
// [eps, 1-eps]; constants and tables are accepted on the whole of [0, 1]
// (degenerate endpoints included, e.g. beta = 0 collapses the y-step).
struct StepSequence {
  enum class Kind { Constant, ClippedHarmonic, Table };

  Kind kind = Kind::Constant;
  double c = 0.5;
  double eps = 0.0;
  double scale = 1.0;
  std::vector<double> values;

  static StepSequence constant(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw InvalidInput("StepSequence: constant must be in [0,1]");
    StepSequence s;
    s.kind = Kind::Constant;
    s.c = c;
    return s;
  }

  // max(eps, min(1-eps, scale/n))
  static StepSequence clipped_harmonic(double eps, double scale) {
    if (!(eps > 0.0 && eps < 0.5))
      throw InvalidInput("StepSequence: clipped_harmonic eps must be in (0, 0.5)");
    if (!(scale > 0.0)) throw InvalidInput("StepSequence: clipped_harmonic scale must be > 0");
    StepSequence s;
    s.kind = Kind::ClippedHarmonic;
    s.eps = eps;
    s.scale = scale;
    return s;
  }

  static StepSequence table(std::vector<double> values) {
    if (values.empty()) throw InvalidInput("StepSequence: empty table");
    for (double v : values)
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("StepSequence: table values must be in [0,1]");
    StepSequence s;
    s.kind = Kind::Table;
    s.values = std::move(values);
    return s;
  }
};

inline double seq_value(const StepSequence& s, std::size_t n) {
  if (n < 1) throw InvalidInput("seq_value: n must be >= 1");
  switch (s.kind) {
    case StepSequence::Kind::Constant:
      return s.c;
    case StepSequence::Kind::ClippedHarmonic:
      return std::max(s.eps, std::min(1.0 - s.eps, s.scale / static_cast<double>(n)));
    case StepSequence::Kind::Table:
      if (n > s.values.size()) throw InvalidInput("seq_value: step table exhausted at n=" + std::to_string(n));
      return s.values[n - 1];
  }
  throw InvalidInput("seq_value: unknown step kind");
}

// mu_n / lambda_n schedules with summable partial sums.
struct SummableSequence {
  enum class Kind { Zero, InversePower, Geometric, Table };

  Kind kind = Kind::Zero;
  double c = 0.0;
  double p = 2.0;  // InversePower: c / n^p, p > 1
  double r = 0.5;  // Geometric: c * r^n, 0 < r < 1
  std::vector<double> values;
  double table_tail_bound = 0.0;

  static SummableSequence zero() { return {}; }

  static SummableSequence inverse_power(double c, double p) {
    if (!(c >= 0.0)) throw InvalidInput("SummableSequence: c must be >= 0");
    if (!(p > 1.0)) throw InvalidInput("SummableSequence: inverse_power needs p > 1");
    SummableSequence s;
    s.kind = Kind::InversePower;
    s.c = c;
    s.p = p;
    return s;
  }

  static SummableSequence geometric(double c, double r) {
    if (!(c >= 0.0)) throw InvalidInput("SummableSequence: c must be >= 0");
    if (!(r > 0.0 && r < 1.0)) throw InvalidInput("SummableSequence: geometric needs 0 < r < 1");
    SummableSequence s;
    s.kind = Kind::Geometric;
    s.c = c;
    s.r = r;
    return s;
  }

  // Finite table; a finite bound on the (zero-extended) tail must be declared.
  static SummableSequence table(std::vector<double> values, double tail_bound) {
    for (double v : values)
      if (!(v >= 0.0)) throw InvalidInput("SummableSequence: table values must be >= 0");
    if (!(tail_bound >= 0.0) || !std::isfinite(tail_bound))
      throw InvalidInput("SummableSequence: table tail bound must be finite and >= 0");
    SummableSequence s;
    s.kind = Kind::Table;
    s.values = std::move(values);
    s.table_tail_bound = tail_bound;
    return s;
  }
};

inline double seq_value(const SummableSequence& s, std::size_t n) {
  if (n < 1) throw InvalidInput("seq_value: n must be >= 1");
  switch (s.kind) {
    case SummableSequence::Kind::Zero:
      return 0.0;
    case SummableSequence::Kind::InversePower:
      return s.c / std::pow(static_cast<double>(n), s.p);
    case SummableSequence::Kind::Geometric:
      return s.c * std::pow(s.r, static_cast<double>(n));
    case SummableSequence::Kind::Table:
      if (n > s.values.size())
        throw InvalidInput("seq_value: summable table exhausted at n=" + std::to_string(n));
      return s.values[n - 1];
  }
  throw InvalidInput("seq_value: unknown summable kind");
}

// Closed-form bound on the full series sum_{n>=1}.
inline double series_bound(const SummableSequence& s) {
  switch (s.kind) {
    case SummableSequence::Kind::Zero:
      return 0.0;
    case SummableSequence::Kind::InversePower:
      // c * (1 + integral_1^inf x^-p dx)
      return s.c * (1.0 + 1.0 / (s.p - 1.0));
    case SummableSequence::Kind::Geometric:
      return s.c * s.r / (1.0 - s.r);
    case SummableSequence::Kind::Table: {
      double sum = s.table_tail_bound;
      for (double v : s.values) sum += v;
      return sum;
    }
  }
  throw InvalidInput("series_bound: unknown summable kind");
}

// phi: R+ -> R+, strictly increasing and continuous with phi(0) = 0. Also
// reused as the nondecreasing f of the two-mapping residual condition.
struct PhiSpec {
  enum class Kind { Identity, Linear, Power };

  Kind kind = Kind::Identity;
  double c = 1.0;  // Linear slope, > 0
  double p = 1.0;  // Power exponent, >= 1

  static PhiSpec identity() { return {}; }
  static PhiSpec linear(double c) {
    if (!(c > 0.0)) throw InvalidInput("PhiSpec: linear slope must be > 0");
    PhiSpec s;
    s.kind = Kind::Linear;
    s.c = c;
    return s;
  }
  static PhiSpec power(double p) {
    if (!(p >= 1.0)) throw InvalidInput("PhiSpec: power exponent must be >= 1");
    PhiSpec s;
    s.kind = Kind::Power;
    s.p = p;
    return s;
  }
};

inline double phi_eval(const PhiSpec& s, double t) {
  switch (s.kind) {
    case PhiSpec::Kind::Identity:
      return t;
    case PhiSpec::Kind::Linear:
      return s.c * t;
    case PhiSpec::Kind::Power:
      return std::pow(t, s.p);
  }
  throw InvalidInput("phi_eval: unknown kind");
}

}  // namespace retract_iter
