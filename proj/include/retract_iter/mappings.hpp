#pragma once

// Mapping and retraction definitions plus the (PT)^n power-composition
// machinery. Mappings T: K -> E may be nonself; every composition step
// retracts back into K before T is applied again.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "retract_iter/errors.hpp"
#include "retract_iter/mapexpr.hpp"
#include "retract_iter/space.hpp"

namespace retract_iter {

// Domain membership slack for apply_map(); absorbs projection rounding. Straying
// further than this is an error, so nonself behavior always goes through P.
inline constexpr double kDomainTol = 1e-9;

struct MappingDef {
  enum class Builtin { None, PaperT1, PaperT2, Identity, Affine, ScaledSin, OutwardShift };

  Builtin builtin = Builtin::None;
  std::vector<double> matrix;  // Affine: dim x dim, row-major
  Vector offset;               // Affine: b
  double scale = 0.0;          // ScaledSin: c; OutwardShift: delta
  std::vector<Expr> exprs;     // expression-defined: one Expr per output coordinate
  ConvexDomain domain = ConvexDomain::interval(-1.0, 1.0);
  std::size_t dim = 1;
  std::string name;
};

struct RetractionDef {
  enum class Kind { IdentityOn, MetricProjection, Expression };

  Kind kind = Kind::MetricProjection;
  ConvexDomain domain = ConvexDomain::interval(-1.0, 1.0);
  std::vector<Expr> exprs;

  static RetractionDef identity_on(ConvexDomain d) {
    return {Kind::IdentityOn, std::move(d), {}};
  }
  static RetractionDef metric_projection(ConvexDomain d) {
    return {Kind::MetricProjection, std::move(d), {}};
  }
  static RetractionDef expression(std::vector<Expr> exprs, ConvexDomain d) {
    if (exprs.size() != d.dim())
      throw InvalidInput("expression retraction: need one expression per coordinate");
    return {Kind::Expression, std::move(d), std::move(exprs)};
  }
};

// -- built-in mappings -------------------------------------------------------

inline MappingDef make_identity(ConvexDomain d) {
  MappingDef m;
  m.builtin = MappingDef::Builtin::Identity;
  m.dim = d.dim();
  m.domain = std::move(d);
  m.name = "identity";
  return m;
}

// T1(x) = -2 sin(x/2) on [0,1], 2 sin(x/2) on [-1,0). Both branches vanish at
// the common fixed point 0.
inline MappingDef make_paper_t1() {
  MappingDef m;
  m.builtin = MappingDef::Builtin::PaperT1;
  m.domain = ConvexDomain::interval(-1.0, 1.0);
  m.dim = 1;
  m.name = "paper_t1";
  return m;
}

// T2(x) = x on [0,1], -x on [-1,0).
inline MappingDef make_paper_t2() {
  MappingDef m;
  m.builtin = MappingDef::Builtin::PaperT2;
  m.domain = ConvexDomain::interval(-1.0, 1.0);
  m.dim = 1;
  m.name = "paper_t2";
  return m;
}

inline MappingDef make_affine(std::vector<double> matrix, Vector offset, ConvexDomain d) {
  std::size_t n = d.dim();
  if (matrix.size() != n * n) throw InvalidInput("affine: matrix must be dim x dim");
  if (offset.size() != n) throw InvalidInput("affine: offset dimension mismatch");
  MappingDef m;
  m.builtin = MappingDef::Builtin::Affine;
  m.matrix = std::move(matrix);
  m.offset = std::move(offset);
  m.dim = n;
  m.domain = std::move(d);
  m.name = "affine";
  return m;
}

// x -> c * sin(x/2), one-dimensional.
inline MappingDef make_scaled_sin(double c, ConvexDomain d) {
  if (d.dim() != 1) throw InvalidInput("scaled_sin: domain must be one-dimensional");
  MappingDef m;
  m.builtin = MappingDef::Builtin::ScaledSin;
  m.scale = c;
  m.dim = 1;
  m.domain = std::move(d);
  m.name = "scaled_sin";
  return m;
}

// x -> x + delta * (x - center)/|x - center|: pushes points radially out of K,
// a genuinely nonself test mapping. The domain center is mapped to itself.
inline MappingDef make_outward_shift(double delta, ConvexDomain d) {
  MappingDef m;
  m.builtin = MappingDef::Builtin::OutwardShift;
  m.scale = delta;
  m.dim = d.dim();
  m.domain = std::move(d);
  m.name = "outward_shift";
  return m;
}

inline MappingDef make_expression_mapping(std::vector<Expr> exprs, ConvexDomain d,
                                          std::string name = "expression") {
  if (exprs.size() != d.dim())
    throw InvalidInput("expression mapping: need one expression per output coordinate");
  MappingDef m;
  m.exprs = std::move(exprs);
  m.dim = d.dim();
  m.domain = std::move(d);
  m.name = std::move(name);
  return m;
}

// -- evaluation --------------------------------------------------------------

inline Vector apply_map(const MappingDef& m, const Vector& x) {
  check_dim(m.domain, x, "apply");
  if (!contains(m.domain, x, kDomainTol))
    throw DomainViolation("apply: point outside domain of mapping '" + m.name +
                          "' (retract first)");
  Vector out(m.dim);
  switch (m.builtin) {
    case MappingDef::Builtin::Identity:
      out = x;
      break;
    case MappingDef::Builtin::PaperT1: {
      double v = x[0];
      out[0] = v >= 0.0 ? -2.0 * std::sin(v / 2.0) : 2.0 * std::sin(v / 2.0);
      break;
    }
    case MappingDef::Builtin::PaperT2: {
      double v = x[0];
      out[0] = v >= 0.0 ? v : -v;
      break;
    }
    case MappingDef::Builtin::Affine: {
      for (std::size_t i = 0; i < m.dim; ++i) {
        double s = m.offset[i];
        for (std::size_t j = 0; j < m.dim; ++j) s += m.matrix[i * m.dim + j] * x[j];
        out[i] = s;
      }
      break;
    }
    case MappingDef::Builtin::ScaledSin:
      out[0] = m.scale * std::sin(x[0] / 2.0);
      break;
    case MappingDef::Builtin::OutwardShift: {
      Vector dir = sub(x, domain_center(m.domain));
      double r = norm(dir);
      if (r == 0.0) {
        out = x;
      } else {
        for (std::size_t i = 0; i < m.dim; ++i) out[i] = x[i] + m.scale * dir[i] / r;
      }
      break;
    }
    case MappingDef::Builtin::None:
      for (std::size_t i = 0; i < m.dim; ++i) out[i] = eval(m.exprs[i], x);
      break;
  }
  if (!all_finite(out))
    throw EvalError("apply: mapping '" + m.name + "' produced a non-finite value", 0);
  return out;
}

inline Vector retract(const RetractionDef& p, const Vector& v) {
  check_vector(v, "retract");
  if (v.size() != p.domain.dim()) throw InvalidInput("retract: dimension mismatch");
  switch (p.kind) {
    case RetractionDef::Kind::IdentityOn:
      return v;
    case RetractionDef::Kind::MetricProjection:
      return project(p.domain, v);
    case RetractionDef::Kind::Expression: {
      Vector out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) out[i] = eval(p.exprs[i], v);
      if (!all_finite(out)) throw EvalError("retract: non-finite value", 0);
      return out;
    }
  }
  throw InvalidInput("retract: unknown kind");
}

// One application of P after T.
inline Vector pt_apply(const MappingDef& m, const RetractionDef& p, const Vector& x) {
  return retract(p, apply_map(m, x));
}

// T (PT)^{n-1} x: the pre-retraction image whose norm gap dominates the
// (PT)^n gap for nonexpansive P.
inline Vector t_power_unretracted(const MappingDef& m, const RetractionDef& p,
                                  std::size_t n, const Vector& x) {
  if (n < 1) throw InvalidInput("t_power_unretracted: n must be >= 1");
  Vector z = x;
  for (std::size_t k = 1; k < n; ++k) z = retract(p, apply_map(m, z));
  return apply_map(m, z);
}

// (PT)^n x by literal n-fold composition.
inline Vector pt_power(const MappingDef& m, const RetractionDef& p, std::size_t n,
                       const Vector& x) {
  if (n < 1) throw InvalidInput("pt_power: n must be >= 1 (use x directly for n = 0)");
  return retract(p, t_power_unretracted(m, p, n, x));
}

// -- pairs and the registry --------------------------------------------------

inline bool same_domain(const ConvexDomain& a, const ConvexDomain& b) {
  return a.kind == b.kind && a.lo == b.lo && a.hi == b.hi && a.center == b.center &&
         a.radius == b.radius;
}

struct MappingPair {
  MappingDef t1, t2;
  RetractionDef p;

  MappingPair(MappingDef t1_, MappingDef t2_, RetractionDef p_)
      : t1(std::move(t1_)), t2(std::move(t2_)), p(std::move(p_)) {
    if (t1.dim != t2.dim || t1.dim != p.domain.dim())
      throw InvalidInput("MappingPair: dimension mismatch");
    if (!same_domain(t1.domain, t2.domain) || !same_domain(t1.domain, p.domain))
      throw InvalidInput("MappingPair: t1, t2 and p must share one domain");
  }

  const ConvexDomain& domain() const { return t1.domain; }
  std::size_t dim() const { return t1.dim; }
};

inline const std::vector<std::string>& registry_names() {
  static const std::vector<std::string> names = {
      "paper_t1", "paper_t2", "identity", "affine", "scaled_sin", "outward_shift"};
  return names;
}

// Default-parameter instances on [-1, 1]; use the make_* factories for
// parameterized construction.
inline MappingDef registry_get(const std::string& name) {
  ConvexDomain unit = ConvexDomain::interval(-1.0, 1.0);
  if (name == "paper_t1") return make_paper_t1();
  if (name == "paper_t2") return make_paper_t2();
  if (name == "identity") return make_identity(unit);
  if (name == "affine") return make_affine({1.0}, {0.0}, unit);
  if (name == "scaled_sin") return make_scaled_sin(1.0, unit);
  if (name == "outward_shift") return make_outward_shift(0.5, unit);
  std::string valid;
  for (const auto& n : registry_names()) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  throw InvalidInput("registry_get: unknown mapping '" + name + "' (valid: " + valid + ")");
}

}  // namespace retract_iter
