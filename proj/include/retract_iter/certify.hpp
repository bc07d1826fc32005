#pragma once

// Numerical certification of the definitional inequalities for mapping
// classes built on (PT)^n powers, and of retraction properties. Sampling can
// falsify or support class membership, never prove it: every verdict here is
// an empirical one over a seeded sample.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "retract_iter/diagnostics.hpp"
#include "retract_iter/errors.hpp"
#include "retract_iter/mappings.hpp"
#include "retract_iter/sequences.hpp"
#include "retract_iter/space.hpp"

namespace retract_iter {

// Pairs closer than this are skipped by ratio estimators.
inline constexpr double kPairSkipTol = 1e-12;

struct SampleSpec {
  std::size_t count = 500;  // points for point checks, pairs for pair checks
  std::uint64_t seed = 0;
  ConvexDomain domain = ConvexDomain::interval(-1.0, 1.0);
};

namespace detail {

class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : gen_(seed) {}

  // 53-bit mantissa draw; reproducible independent of the standard library's
  // distribution implementations.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

 private:
  std::mt19937_64 gen_;
};

inline Vector draw_box(SampleRng& rng, const Vector& lo, const Vector& hi) {
  Vector v(lo.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.uniform(lo[i], hi[i]);
  return v;
}

inline Vector draw_domain(SampleRng& rng, const ConvexDomain& d) {
  auto [lo, hi] = bounding_box(d);
  if (d.kind != ConvexDomain::Kind::Ball) return draw_box(rng, lo, hi);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vector v = draw_box(rng, lo, hi);
    if (contains(d, v, 0.0)) return v;
  }
  return project(d, draw_box(rng, lo, hi));  // practically unreachable at desk dims
}

}  // namespace detail

inline void check_sample_spec(const SampleSpec& s) {
  if (s.count < 2) throw InvalidInput("SampleSpec: count must be >= 2");
}

// `inflate` > 1 draws from the enlarged bounding box (exterior points
// included); `inflate` = 1 draws from the domain itself.
inline std::vector<Vector> sample_points(const SampleSpec& spec, double inflate = 1.0) {
  check_sample_spec(spec);
  detail::SampleRng rng(spec.seed);
  std::vector<Vector> pts;
  pts.reserve(spec.count);
  if (inflate == 1.0) {
    for (std::size_t i = 0; i < spec.count; ++i) pts.push_back(detail::draw_domain(rng, spec.domain));
  } else {
    auto [lo, hi] = bounding_box(spec.domain, inflate);
    for (std::size_t i = 0; i < spec.count; ++i) pts.push_back(detail::draw_box(rng, lo, hi));
  }
  return pts;
}

// `count` pairs (two fresh draws each) from the domain.
inline std::vector<std::pair<Vector, Vector>> sample_pairs(const SampleSpec& spec) {
  check_sample_spec(spec);
  detail::SampleRng rng(spec.seed);
  std::vector<std::pair<Vector, Vector>> pairs;
  pairs.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    Vector a = detail::draw_domain(rng, spec.domain);
    Vector b = detail::draw_domain(rng, spec.domain);
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return pairs;
}

struct CertRow {
  std::string check;
  std::size_t n = 0;  // power index; 0 for checks without one
  double value = 0.0; // margin (violation if > tol) or estimate, per check
  Vector worst_x, worst_y;
  bool pass = true;
};

struct CertReport {
  std::string name;
  std::vector<CertRow> rows;
  bool pass = true;
  double margin = 0.0;
  Vector worst_x, worst_y;
  std::string note;  // always labeled empirical

  void fold(const CertRow& row) {
    rows.push_back(row);
    pass = pass && row.pass;
    if (rows.size() == 1 || row.value > margin) {
      margin = row.value;
      worst_x = row.worst_x;
      worst_y = row.worst_y;
    }
  }
};

inline std::string empirical_note(const SampleSpec& s, const char* what) {
  return std::string("empirical: ") + what + " over " + std::to_string(s.count) +
         " samples (seed " + std::to_string(s.seed) + "); supports but cannot prove the property";
}

// -- retraction properties ---------------------------------------------------

// Reports, over samples from the 2x-enlarged bounding box: idempotence
// |P(Pv) - Pv|, nonexpansiveness |Pu - Pv| - |u - v| over all sample pairs,
// the sunny identity |P(Px + t(x - Px)) - Px| over the t grid, the distance
// of P's range from K, and |Pw - w| over points w of K.
inline CertReport check_retraction(const RetractionDef& p, const SampleSpec& samples,
                                   const std::vector<double>& t_grid, double tol = 1e-12,
                                   const NormSpec& ns = {}) {
  for (double t : t_grid)
    if (!(t >= 0.0)) throw InvalidInput("check_retraction: t grid values must be >= 0");
  std::vector<Vector> ext = sample_points(samples, 2.0);
  CertReport rep;
  rep.name = "retraction";
  rep.note = empirical_note(samples, "retraction properties");

  CertRow idem{"idempotence", 0, 0.0, {}, {}, true};
  CertRow range{"domain_range", 0, 0.0, {}, {}, true};
  CertRow fix{"domain_fix", 0, 0.0, {}, {}, true};
  CertRow sunny{"sunny", 0, 0.0, {}, {}, true};
  for (const Vector& v : ext) {
    Vector pv = retract(p, v);
    double d_idem = distance(retract(p, pv), pv, ns);
    if (d_idem > idem.value) {
      idem.value = d_idem;
      idem.worst_x = v;
    }
    double d_range = distance(pv, project(samples.domain, pv), ns);
    if (d_range > range.value) {
      range.value = d_range;
      range.worst_x = v;
    }
    Vector w = project(samples.domain, v);
    double d_fix = distance(retract(p, w), w, ns);
    if (d_fix > fix.value) {
      fix.value = d_fix;
      fix.worst_x = w;
    }
    for (double t : t_grid) {
      Vector ray = lincomb(1.0, pv, t, sub(v, pv));  // Px + t (x - Px)
      double d_sunny = distance(retract(p, ray), pv, ns);
      if (d_sunny > sunny.value) {
        sunny.value = d_sunny;
        sunny.worst_x = v;
      }
    }
  }
  CertRow nonexp{"nonexpansive", 0, 0.0, {}, {}, true};
  std::vector<Vector> imgs;
  imgs.reserve(ext.size());
  for (const Vector& v : ext) imgs.push_back(retract(p, v));
  for (std::size_t i = 0; i < ext.size(); ++i)
    for (std::size_t j = i + 1; j < ext.size(); ++j) {
      double d = distance(imgs[i], imgs[j], ns) - distance(ext[i], ext[j], ns);
      if (d > nonexp.value) {
        nonexp.value = d;
        nonexp.worst_x = ext[i];
        nonexp.worst_y = ext[j];
      }
    }

  for (CertRow* row : {&idem, &nonexp, &sunny, &range, &fix}) {
    row->pass = row->value <= tol;
    rep.fold(*row);
  }
  return rep;
}

// -- mapping-class estimates ---------------------------------------------------

struct KnTable {
  std::vector<double> per_n;                         // per_n[k] for power k+1
  std::vector<std::pair<Vector, Vector>> worst;      // pair attaining per_n[k]
  std::size_t pairs_used = 0;
};

// per_n[k] = max over sampled pairs of |(PT)^k x - (PT)^k y| / |x - y|,
// computed incrementally over the powers.
inline KnTable kn_table(const MappingDef& m, const RetractionDef& p, const SampleSpec& samples,
                        std::size_t n_max, const NormSpec& ns = {}) {
  if (n_max < 1) throw InvalidInput("kn_table: n_max must be >= 1");
  KnTable table;
  table.per_n.assign(n_max, 0.0);
  table.worst.assign(n_max, {});
  for (const auto& [x, y] : sample_pairs(samples)) {
    double d0 = distance(x, y, ns);
    if (d0 < kPairSkipTol) continue;
    ++table.pairs_used;
    Vector zx = x, zy = y;
    for (std::size_t k = 0; k < n_max; ++k) {
      zx = pt_apply(m, p, zx);
      zy = pt_apply(m, p, zy);
      double ratio = distance(zx, zy, ns) / d0;
      if (ratio > table.per_n[k]) {
        table.per_n[k] = ratio;
        table.worst[k] = {x, y};
      }
    }
  }
  return table;
}

// Heuristic flag: the 1-capped estimates must not grow along n (slack 0.05)
// and must end within 0.05 of 1.
inline bool kn_compatible(const std::vector<double>& per_n, double slack = 0.05) {
  double prev = std::max(per_n.front(), 1.0);
  for (double v : per_n) {
    double q = std::max(v, 1.0);
    if (q > prev + slack) return false;
    prev = q;
  }
  return std::max(per_n.back(), 1.0) <= 1.0 + slack;
}

inline CertReport estimate_kn(const MappingDef& m, const RetractionDef& p,
                              const SampleSpec& samples, std::size_t n_max,
                              const NormSpec& ns = {}) {
  KnTable table = kn_table(m, p, samples, n_max, ns);
  CertReport rep;
  rep.name = "kn";
  rep.pass = kn_compatible(table.per_n);
  rep.note = empirical_note(samples, "k_n ratio estimates") +
             (rep.pass ? "; flagged asymptotically-nonexpansive-compatible (heuristic)"
                       : "; NOT asymptotically-nonexpansive-compatible (heuristic)");
  for (std::size_t k = 0; k < n_max; ++k) {
    CertRow row{"kn", k + 1, table.per_n[k], table.worst[k].first, table.worst[k].second,
                rep.pass};
    rep.rows.push_back(row);
    if (k == 0 || table.per_n[k] - 1.0 > rep.margin) {
      rep.margin = table.per_n[k] - 1.0;
      rep.worst_x = table.worst[k].first;
      rep.worst_y = table.worst[k].second;
    }
  }
  return rep;
}

// L-hat = max over n <= n_max of the k_n estimates.
inline double estimate_lipschitz(const MappingDef& m, const RetractionDef& p,
                                 const SampleSpec& samples, std::size_t n_max,
                                 const NormSpec& ns = {}) {
  KnTable table = kn_table(m, p, samples, n_max, ns);
  double worst = 0.0;
  for (double v : table.per_n) worst = std::max(worst, v);
  return worst;
}

// margin_n = max over pairs of
//   |(PT)^n x - (PT)^n y| - |x - y| - mu_n phi(|x - y|) - lambda_n.
inline CertReport check_total(const MappingDef& m, const RetractionDef& p,
                              const SummableSequence& mu, const SummableSequence& lambda,
                              const PhiSpec& phi, const SampleSpec& samples,
                              std::size_t n_max, double tol = 1e-9,
                              const NormSpec& ns = {}) {
  if (n_max < 1) throw InvalidInput("check_total: n_max must be >= 1");
  std::vector<double> margins(n_max, -std::numeric_limits<double>::infinity());
  std::vector<std::pair<Vector, Vector>> worst(n_max);
  for (const auto& [x, y] : sample_pairs(samples)) {
    double d0 = distance(x, y, ns);
    if (d0 < kPairSkipTol) continue;
    Vector zx = x, zy = y;
    for (std::size_t k = 0; k < n_max; ++k) {
      zx = pt_apply(m, p, zx);
      zy = pt_apply(m, p, zy);
      double bound = d0 + seq_value(mu, k + 1) * phi_eval(phi, d0) + seq_value(lambda, k + 1);
      double margin = distance(zx, zy, ns) - bound;
      if (margin > margins[k]) {
        margins[k] = margin;
        worst[k] = {x, y};
      }
    }
  }
  CertReport rep;
  rep.name = "total";
  rep.note = empirical_note(samples, "total asymptotic nonexpansiveness margins");
  for (std::size_t k = 0; k < n_max; ++k) {
    rep.fold(CertRow{"total", k + 1, margins[k], worst[k].first, worst[k].second,
                     margins[k] <= tol});
  }
  return rep;
}

// margin = max over sampled x of f(d(x, F)) - (|x - PT1 x| + |x - PT2 x|) / 2.
inline CertReport check_condition_aprime(const MappingPair& pair, const PhiSpec& f_spec,
                                         const std::vector<Vector>& f_points,
                                         const SampleSpec& samples, double tol = 1e-9,
                                         const NormSpec& ns = {}) {
  if (f_points.empty()) throw InvalidInput("check_condition_aprime: empty fixed-point set");
  CertRow row{"condition_aprime", 0, -std::numeric_limits<double>::infinity(), {}, {}, true};
  for (const Vector& x : sample_points(samples)) {
    double lhs = phi_eval(f_spec, distance_to_set(x, f_points, ns));
    double rhs = 0.5 * (distance(x, pt_apply(pair.t1, pair.p, x), ns) +
                        distance(x, pt_apply(pair.t2, pair.p, x), ns));
    double margin = lhs - rhs;
    if (margin > row.value) {
      row.value = margin;
      row.worst_x = x;
    }
  }
  row.pass = row.value <= tol;
  CertReport rep;
  rep.name = "condition_aprime";
  rep.note = empirical_note(samples, "condition (A') margins");
  rep.fold(row);
  return rep;
}

// -- fixed-point transfer and inwardness ----------------------------------------

struct FixedTransferRow {
  Vector candidate;
  double pt_residual = 0.0;  // |PTx - x|
  double t_residual = 0.0;   // |Tx - x|
  bool fixed_pt = false;
  bool fixed_t = false;
  bool agree = false;
};

struct FixedTransferReport {
  std::vector<FixedTransferRow> rows;
  bool all_agree = true;
  std::string note;
};

// Fixed points of PT and of T coincide for weakly inward mappings under a
// sunny nonexpansive retraction; a disagreement witnesses a failed
// hypothesis, not a broken check.
inline FixedTransferReport check_fixed_transfer(const MappingDef& m, const RetractionDef& p,
                                                const std::vector<Vector>& candidates,
                                                double tol, const NormSpec& ns = {}) {
  if (!(tol >= 0.0)) throw InvalidInput("check_fixed_transfer: tol must be >= 0");
  FixedTransferReport rep;
  for (const Vector& x : candidates) {
    FixedTransferRow row;
    row.candidate = x;
    Vector tx = apply_map(m, x);
    row.t_residual = distance(tx, x, ns);
    row.pt_residual = distance(retract(p, tx), x, ns);
    row.fixed_pt = row.pt_residual <= tol;
    row.fixed_t = row.t_residual <= tol;
    row.agree = row.fixed_pt == row.fixed_t;
    rep.all_agree = rep.all_agree && row.agree;
    rep.rows.push_back(std::move(row));
  }
  rep.note = rep.all_agree
                 ? "F(PT) and F(T) memberships agree on all candidates"
                 : "disagreement found: some candidate is fixed by PT but not by T "
                   "(the mapping fails to be weakly inward there)";
  return rep;
}

struct WeaklyInwardReport {
  double t_lo = 0.0, t_hi = 0.0;
  bool lo_ok = false, hi_ok = false;
  bool pass = false;
};

// On an interval [lo, hi], the inward-set condition binds only at the
// endpoints: T(lo) >= lo and T(hi) <= hi.
inline WeaklyInwardReport check_weakly_inward_1d(const MappingDef& m, const ConvexDomain& k) {
  if (m.dim != 1 || k.kind != ConvexDomain::Kind::Interval)
    throw InvalidInput("check_weakly_inward_1d: unsupported dimension (needs a 1-d interval)");
  WeaklyInwardReport rep;
  rep.t_lo = apply_map(m, {k.lo[0]})[0];
  rep.t_hi = apply_map(m, {k.hi[0]})[0];
  rep.lo_ok = rep.t_lo >= k.lo[0];
  rep.hi_ok = rep.t_hi <= k.hi[0];
  rep.pass = rep.lo_ok && rep.hi_ok;
  return rep;
}

// Grid check of the gauge growth bound phi(kappa) <= M* kappa for kappa >= M.
inline CertReport check_phi_bound(const PhiSpec& phi, double m_const, double m_star,
                                  double tol = 1e-9) {
  if (!(m_const > 0.0) || !(m_star > 0.0))
    throw InvalidInput("check_phi_bound: M and M* must be > 0");
  CertRow row{"phi_bound", 0, -std::numeric_limits<double>::infinity(), {}, {}, true};
  const int steps = 256;
  for (int i = 0; i <= steps; ++i) {
    double kappa = m_const * (1.0 + 9.0 * static_cast<double>(i) / steps);  // [M, 10M]
    double margin = phi_eval(phi, kappa) - m_star * kappa;
    if (margin > row.value) {
      row.value = margin;
      row.worst_x = {kappa};
    }
  }
  row.pass = row.value <= tol;
  CertReport rep;
  rep.name = "phi_bound";
  rep.note = "grid check of phi(kappa) <= M* kappa on [M, 10M]";
  rep.fold(row);
  return rep;
}

}  // namespace retract_iter
