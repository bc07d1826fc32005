#pragma once

// Finite-dimensional normed-space primitives: vectors, norms, convex domains
// and the metric projections used as nonexpansive retractions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "retract_iter/errors.hpp"

namespace retract_iter {

using Vector = std::vector<double>;

inline bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void check_vector(const Vector& v, const char* what = "vector") {
  if (v.empty()) throw InvalidInput(std::string(what) + ": dimension must be >= 1");
  if (!all_finite(v)) throw InvalidInput(std::string(what) + ": non-finite coordinate");
}

struct NormSpec {
  enum class Kind { Euclidean, PNorm, Max };
  Kind kind = Kind::Euclidean;
  double p = 2.0;  // exponent for Kind::PNorm

  static NormSpec euclidean() { return {}; }
  static NormSpec p_norm(double p) {
    if (!(p >= 1.0)) throw InvalidInput("p_norm: p must be >= 1");
    return {Kind::PNorm, p};
  }
  static NormSpec max() { return {Kind::Max, 0.0}; }
};

inline double norm(const Vector& v, const NormSpec& spec = {}) {
  check_vector(v);
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  switch (spec.kind) {
    case NormSpec::Kind::Euclidean: {
      double s = 0.0;
      for (double x : v) s += x * x;
      if (s != 0.0 && std::isfinite(s)) return std::sqrt(s);
      if (m == 0.0) return 0.0;
      s = 0.0;  // rescale to dodge under/overflow of the squares
      for (double x : v) s += (x / m) * (x / m);
      return m * std::sqrt(s);
    }
    case NormSpec::Kind::PNorm: {
      if (!(spec.p >= 1.0)) throw InvalidInput("norm: p must be >= 1");
      double s = 0.0;
      for (double x : v) s += std::pow(std::abs(x), spec.p);
      if (s != 0.0 && std::isfinite(s)) return std::pow(s, 1.0 / spec.p);
      if (m == 0.0) return 0.0;
      s = 0.0;
      for (double x : v) s += std::pow(std::abs(x) / m, spec.p);
      return m * std::pow(s, 1.0 / spec.p);
    }
    case NormSpec::Kind::Max:
      return m;
  }
  throw InvalidInput("norm: unknown kind");
}

inline Vector lincomb(double a, const Vector& u, double b, const Vector& w) {
  if (u.size() != w.size()) throw InvalidInput("lincomb: dimension mismatch");
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = a * u[i] + b * w[i];
  return out;
}

inline Vector sub(const Vector& u, const Vector& w) { return lincomb(1.0, u, -1.0, w); }

inline double distance(const Vector& u, const Vector& w, const NormSpec& ns = {}) {
  return norm(sub(u, w), ns);
}

// The set K. Convexity is what keeps the iteration's convex combinations
// inside K up to rounding.
struct ConvexDomain {
  enum class Kind { Interval, Box, Ball };
  Kind kind = Kind::Interval;
  Vector lo, hi;       // Interval (size 1) and Box
  Vector center;       // Ball
  double radius = 0.0; // Ball

  static ConvexDomain interval(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw InvalidInput("interval: requires finite lo < hi");
    ConvexDomain d;
    d.kind = Kind::Interval;
    d.lo = {lo};
    d.hi = {hi};
    return d;
  }

  static ConvexDomain box(Vector lo, Vector hi) {
    check_vector(lo, "box lo");
    check_vector(hi, "box hi");
    if (lo.size() != hi.size()) throw InvalidInput("box: lo/hi dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] < hi[i])) throw InvalidInput("box: requires lo < hi coordinatewise");
    ConvexDomain d;
    d.kind = Kind::Box;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    return d;
  }

  static ConvexDomain ball(Vector center, double radius) {
    check_vector(center, "ball center");
    if (!std::isfinite(radius) || !(radius > 0.0))
      throw InvalidInput("ball: radius must be > 0");
    ConvexDomain d;
    d.kind = Kind::Ball;
    d.center = std::move(center);
    d.radius = radius;
    return d;
  }

  std::size_t dim() const {
    return kind == Kind::Ball ? center.size() : lo.size();
  }
};

inline void check_dim(const ConvexDomain& d, const Vector& v, const char* op) {
  check_vector(v, op);
  if (v.size() != d.dim())
    throw InvalidInput(std::string(op) + ": dimension mismatch (expected " +
                       std::to_string(d.dim()) + ", got " + std::to_string(v.size()) + ")");
}

// Metric projection onto K under the euclidean norm. Clamping for
// boxes/intervals, radial scaling for balls; interior points are returned
// unchanged, bit for bit.
inline Vector project(const ConvexDomain& d, const Vector& v) {
  check_dim(d, v, "project");
  switch (d.kind) {
    case ConvexDomain::Kind::Interval:
    case ConvexDomain::Kind::Box: {
      Vector out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = std::min(std::max(v[i], d.lo[i]), d.hi[i]);
      return out;
    }
    case ConvexDomain::Kind::Ball: {
      double r = distance(v, d.center);
      if (r <= d.radius) return v;
      double scale = d.radius / r;
      Vector out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = d.center[i] + scale * (v[i] - d.center[i]);
      return out;
    }
  }
  throw InvalidInput("project: unknown domain kind");
}

// Membership in K enlarged by `tol`, measured as the distance (in the active
// norm) from v to its euclidean projection onto K.
inline bool contains(const ConvexDomain& d, const Vector& v, double tol,
                     const NormSpec& ns = {}) {
  if (!(tol >= 0.0)) throw InvalidInput("contains: tol must be >= 0");
  check_dim(d, v, "contains");
  return distance(v, project(d, v), ns) <= tol;
}

inline double domain_diameter(const ConvexDomain& d, const NormSpec& ns = {}) {
  switch (d.kind) {
    case ConvexDomain::Kind::Interval:
    case ConvexDomain::Kind::Box:
      return distance(d.hi, d.lo, ns);
    case ConvexDomain::Kind::Ball:
      return 2.0 * d.radius;
  }
  throw InvalidInput("domain_diameter: unknown domain kind");
}

// Axis-aligned bounding box, optionally inflated about its center. Sampling
// draws from this box; `inflate` = 2 gives the enlargement used to exercise
// retractions on exterior points.
inline std::pair<Vector, Vector> bounding_box(const ConvexDomain& d, double inflate = 1.0) {
  Vector lo(d.dim()), hi(d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) {
    double c, h;
    if (d.kind == ConvexDomain::Kind::Ball) {
      c = d.center[i];
      h = d.radius;
    } else {
      c = 0.5 * (d.lo[i] + d.hi[i]);
      h = 0.5 * (d.hi[i] - d.lo[i]);
    }
    lo[i] = c - inflate * h;
    hi[i] = c + inflate * h;
  }
  return {lo, hi};
}

inline Vector domain_center(const ConvexDomain& d) {
  if (d.kind == ConvexDomain::Kind::Ball) return d.center;
  Vector c(d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) c[i] = 0.5 * (d.lo[i] + d.hi[i]);
  return c;
}

}  // namespace retract_iter
