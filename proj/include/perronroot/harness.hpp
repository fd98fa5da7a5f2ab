#pragma once

// Convergence traces for matrix sequences A_k = base + s_k * direction, and
// the Gelfand sequence f_m(X) = ||X^m||_1^(1/m).
//
// Three trace kinds, selected by the structure of the base (the limit A):
//   irreducible  rows carry the continuity bound ||A_k - A||_F / q_star;
//   reducible    rows carry b_k = rho(B_k), where B_k sits at the index
//                positions of the spectral block B of A after applying the
//                permutation of A's Frobenius normal form to A_k, and must
//                satisfy b_k <= r_k;
//   nilpotent    rows carry ||A_k^p||_1^(1/p), an upper bound on r_k when
//                A^p = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perronroot/errors.hpp"
#include "perronroot/matrix.hpp"
#include "perronroot/solver.hpp"
#include "perronroot/structure.hpp"

namespace perronroot {

enum class ScheduleRule { inverse_k, inverse_k2, geometric };

/// k -> s_k: scale/k, scale/k^2 or scale * ratio^k, for k = 1, 2, ...
struct Schedule {
  ScheduleRule rule = ScheduleRule::inverse_k;
  double scale = 1.0;
  double ratio = 0.5;

  void validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw domain_violation("schedule scale must be positive");
    if (rule == ScheduleRule::geometric && !(ratio > 0.0 && ratio < 1.0))
      throw domain_violation("geometric ratio must lie in (0, 1)");
  }

  double at(std::size_t k) const {
    const double kk = static_cast<double>(k);
    switch (rule) {
      case ScheduleRule::inverse_k: return scale / kk;
      case ScheduleRule::inverse_k2: return scale / (kk * kk);
      case ScheduleRule::geometric: return scale * std::pow(ratio, kk);
    }
    return 0.0;
  }
};

struct SequenceSpec {
  NonNegMatrix base;
  RealMatrix direction;
  Schedule schedule{};
  std::size_t count = 20;
  /// Clamp negative entries of A_k to zero instead of rejecting the term.
  bool clamp = false;
};

/// A_k for k >= 1. Throws domain_violation naming k when the term leaves the
/// nonnegative cone and clamping is off.
inline NonNegMatrix sequence_term(const SequenceSpec& spec, std::size_t k) {
  const RealMatrix raw = add_scaled(spec.base, spec.schedule.at(k), spec.direction);
  std::vector<double> e(raw.entries().begin(), raw.entries().end());
  for (std::size_t idx = 0; idx < e.size(); ++idx) {
    if (e[idx] >= 0.0) continue;
    if (!spec.clamp)
      throw domain_violation("term k=" + std::to_string(k) + " leaves the nonnegative cone at (" +
                             std::to_string(idx / raw.size()) + ", " +
                             std::to_string(idx % raw.size()) + ")");
    e[idx] = 0.0;
  }
  return NonNegMatrix(raw.size(), std::move(e));
}

enum class TraceKind { irreducible, reducible, nilpotent };

inline const char* to_string(TraceKind k) {
  switch (k) {
    case TraceKind::irreducible: return "irreducible";
    case TraceKind::reducible: return "reducible";
    case TraceKind::nilpotent: return "nilpotent";
  }
  return "?";
}

struct TraceRow {
  std::size_t k = 0;
  double s = 0.0;
  Interval r;
  /// |mid r_k - mid r|
  double deviation = 0.0;
  std::optional<double> bound;            // irreducible
  std::optional<Interval> block_root;     // reducible
  std::optional<double> power_norm_root;  // nilpotent
  bool pass = true;
};

struct ConvergenceTrace {
  TraceKind kind = TraceKind::irreducible;
  PerronCertificate base;
  std::vector<TraceRow> rows;
  std::optional<double> q_star;
  std::optional<std::size_t> spectral_block;
  std::optional<BlockRange> spectral_range;
  std::optional<std::size_t> nilpotency_index;
  /// Reducible traces: |mid b_K - mid r| at the last row against its limit.
  std::optional<double> final_block_deviation;
  std::optional<double> final_threshold;
  bool final_pass = true;

  bool all_passed() const {
    return final_pass && std::all_of(rows.begin(), rows.end(), [](const TraceRow& r) { return r.pass; });
  }
};

namespace detail {

inline void validate(const SequenceSpec& spec) {
  require_same_size(spec.base, spec.direction);
  spec.schedule.validate();
  if (spec.count == 0) throw domain_violation("count must be at least 1");
}

}  // namespace detail

inline ConvergenceTrace run_irreducible_trace(const SequenceSpec& spec, const SolverOptions& opts = {}) {
  detail::validate(spec);
  if (!is_irreducible(spec.base))
    throw precondition_error("irreducible trace needs an irreducible base");

  ConvergenceTrace t;
  t.kind = TraceKind::irreducible;
  t.base = perron_irreducible(spec.base, opts);
  t.q_star = q_star(t.base);
  for (std::size_t k = 1; k <= spec.count; ++k) {
    const NonNegMatrix ak = sequence_term(spec, k);
    const auto c = perron_root(ak, opts);
    TraceRow row;
    row.k = k;
    row.s = spec.schedule.at(k);
    row.r = c.root;
    row.deviation = std::abs(c.mid() - t.base.mid());
    row.bound = frobenius_norm(difference(ak, spec.base)) / *t.q_star;
    row.pass = row.deviation <= *row.bound + c.width() + t.base.width();
    t.rows.push_back(row);
  }
  return t;
}

inline ConvergenceTrace run_reducible_trace(const SequenceSpec& spec, const SolverOptions& opts = {}) {
  detail::validate(spec);
  if (is_irreducible(spec.base))
    throw precondition_error("reducible trace needs a reducible base");
  if (is_nilpotent(spec.base))
    throw precondition_error("base is nilpotent; use the nilpotent trace");

  ConvergenceTrace t;
  t.kind = TraceKind::reducible;
  const auto fnf = frobenius_normal_form(spec.base);
  const auto block_certs = certify_blocks(fnf, opts);
  t.spectral_block = spectral_block(block_certs);
  t.spectral_range = fnf.blocks[*t.spectral_block];
  t.base = perron_root(spec.base, opts);
  const PerronCertificate& limit_block = block_certs[*t.spectral_block];

  for (std::size_t k = 1; k <= spec.count; ++k) {
    const NonNegMatrix ak = sequence_term(spec, k);
    const auto c = perron_root(ak, opts);
    const NonNegMatrix bk = principal_block(apply_symmetric_permutation(ak, fnf.perm),
                                            t.spectral_range->offset, t.spectral_range->size);
    const auto b = perron_root(bk, opts);
    TraceRow row;
    row.k = k;
    row.s = spec.schedule.at(k);
    row.r = c.root;
    row.deviation = std::abs(c.mid() - t.base.mid());
    row.block_root = b.root;
    row.pass = b.lo() <= c.hi();
    t.rows.push_back(row);

    if (k == spec.count) {
      const double n = static_cast<double>(spec.base.size());
      t.final_block_deviation = std::abs(b.mid() - t.base.mid());
      t.final_threshold = 2.0 * row.s * frobenius_norm(spec.direction) * n;
      t.final_pass = *t.final_block_deviation <=
                     *t.final_threshold + b.width() + t.base.width() + limit_block.width();
    }
  }
  return t;
}

inline ConvergenceTrace run_nilpotent_trace(const SequenceSpec& spec, const SolverOptions& opts = {}) {
  detail::validate(spec);
  const auto p = nilpotency_index(spec.base);
  if (!p) throw precondition_error("nilpotent trace needs a nilpotent base");

  ConvergenceTrace t;
  t.kind = TraceKind::nilpotent;
  t.nilpotency_index = p;
  t.base = perron_root(spec.base, opts);
  const double pd = static_cast<double>(*p);
  const double n = static_cast<double>(spec.base.size());
  for (std::size_t k = 1; k <= spec.count; ++k) {
    const NonNegMatrix ak = sequence_term(spec, k);
    const auto c = perron_root(ak, opts);
    const double power_norm = one_norm(matrix_power(ak, *p));
    TraceRow row;
    row.k = k;
    row.s = spec.schedule.at(k);
    row.r = c.root;
    row.deviation = std::abs(c.mid() - t.base.mid());
    row.power_norm_root = std::pow(power_norm, 1.0 / pd);
    const double hi_p = std::pow(c.hi(), pd);
    const double tolerance = 1e-10 + pd * std::pow(c.hi(), pd - 1.0) * c.width() +
                             power_norm * 2.0 * (pd * n + 2.0) * detail::unit_roundoff;
    row.pass = hi_p <= power_norm + tolerance;
    t.rows.push_back(row);
  }
  return t;
}

/// Picks the trace kind from the base's structure.
inline ConvergenceTrace run_trace(const SequenceSpec& spec, const SolverOptions& opts = {}) {
  if (is_irreducible(spec.base) && !(spec.base.size() == 1 && spec.base(0, 0) == 0.0))
    return run_irreducible_trace(spec, opts);
  if (is_nilpotent(spec.base)) return run_nilpotent_trace(spec, opts);
  return run_reducible_trace(spec, opts);
}

// ---------------------------------------------------------------------------
// Gelfand sequence

/// f_m(X) = ||X^m||_1^(1/m) for m = 1..m_max. The power is carried as a
/// 1-norm-normalized matrix, and the product of the norms as a mantissa and a
/// binary exponent, so nothing overflows and scaling X by a power of two
/// scales every f_m exactly.
inline std::vector<double> gelfand_sequence(const RealMatrix& x, std::size_t m_max) {
  if (m_max == 0) throw domain_violation("m_max must be at least 1");
  std::vector<double> f(m_max, 0.0);
  RealMatrix z = x;
  double mant = 1.0;
  long long expo = 0;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const double nu = one_norm(z);
    if (nu == 0.0) break;  // X^m = 0 from here on
    int e = 0;
    mant = std::frexp(mant * nu, &e);
    expo += e;
    // mant * 2^expo = mant * 2^r * 2^(q m) with 0 <= r < m
    const auto md = static_cast<long long>(m);
    long long q = expo / md, r = expo % md;
    if (r < 0) {
      r += md;
      --q;
    }
    const double root = r <= 1000 ? std::pow(std::ldexp(mant, static_cast<int>(r)), 1.0 / static_cast<double>(m))
                                   : std::pow(mant, 1.0 / static_cast<double>(m)) *
                                         std::exp2(static_cast<double>(r) / static_cast<double>(m));
    f[m - 1] = std::ldexp(root, static_cast<int>(q));
    if (m < m_max) z = matmul(scaled(z, 1.0 / nu), x);
  }
  return f;
}

struct GelfandRow {
  std::size_t m = 0;
  double f = 0.0;
  /// f_m - mid rho(X)
  double residual = 0.0;
  bool pass = true;
};

struct GelfandTrace {
  PerronCertificate root;
  std::vector<GelfandRow> rows;
  bool all_passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const GelfandRow& r) { return r.pass; });
  }
};

namespace detail {

/// Rounding allowance on f_m relative to its value.
inline double gelfand_rounding(std::size_t n, std::size_t m) {
  return 8.0 * static_cast<double>((m + 1) * (n + 2)) * unit_roundoff;
}

}  // namespace detail

/// Rows f_m for m = 1..m_max; each must satisfy f_m >= lo(rho(X)) since the
/// 1-norm is consistent.
inline GelfandTrace gelfand_trace(const NonNegMatrix& x, std::size_t m_max, const SolverOptions& opts = {}) {
  GelfandTrace t;
  t.root = perron_root(x, opts);
  const auto f = gelfand_sequence(x, m_max);
  for (std::size_t m = 1; m <= m_max; ++m) {
    GelfandRow row;
    row.m = m;
    row.f = f[m - 1];
    row.residual = row.f - t.root.mid();
    row.pass = row.f * (1.0 + detail::gelfand_rounding(x.size(), m)) >= t.root.lo();
    t.rows.push_back(row);
  }
  return t;
}

struct NonuniformityRow {
  double alpha = 0.0;
  /// f_m(alpha X) - mid rho(alpha X), both computed on alpha X directly.
  double residual = 0.0;
  /// alpha * residual(X)
  double expected = 0.0;
  bool pass = true;
};

struct NonuniformityDemo {
  std::size_t m = 0;
  double residual = 0.0;  ///< residual(X)
  /// f_m(X) is indistinguishable from rho(X) at certified precision, so the
  /// scaling argument has nothing to amplify.
  bool vacuous = false;
  std::vector<NonuniformityRow> rows;
  bool all_passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const NonuniformityRow& r) { return r.pass; });
  }
};

inline constexpr double homogeneity_rel_tol = 1e-12;

/// residual(alpha X) = f_m(alpha X) - rho(alpha X) equals alpha * residual(X):
/// for a fixed m the gap |f_m - rho| is unbounded over the nonnegative cone.
/// Roots here are iterated to the rounding floor (tol 0) so the midpoints are
/// accurate well beyond homogeneity_rel_tol.
inline NonuniformityDemo nonuniformity_demo(const NonNegMatrix& x, std::size_t m,
                                            std::span<const double> alphas,
                                            const SolverOptions& opts = {}) {
  if (m == 0) throw domain_violation("m must be at least 1");
  SolverOptions floor_opts = opts;
  floor_opts.tol = 0.0;

  auto residual_of = [&](const NonNegMatrix& y, PerronCertificate* cert_out) {
    const auto cert = perron_root(y, floor_opts);
    const double fm = gelfand_sequence(y, m).back();
    if (cert_out) *cert_out = cert;
    return std::pair{fm - cert.mid(), fm};
  };

  NonuniformityDemo demo;
  demo.m = m;
  PerronCertificate cert;
  const auto [res, fm] = residual_of(x, &cert);
  demo.residual = res;
  demo.vacuous = std::abs(res) <= cert.width() + detail::gelfand_rounding(x.size(), m) * fm;

  for (double alpha : alphas) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw domain_violation("alpha must be positive");
    NonuniformityRow row;
    row.alpha = alpha;
    row.residual = residual_of(scaled(x, alpha), nullptr).first;
    row.expected = alpha * res;
    row.pass = demo.vacuous ||
               std::abs(row.residual - row.expected) <= homogeneity_rel_tol * std::abs(row.expected);
    demo.rows.push_back(row);
  }
  return demo;
}

}  // namespace perronroot
