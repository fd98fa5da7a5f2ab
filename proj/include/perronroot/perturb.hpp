#pragma once

// A priori bound on |rho(A') - rho(A)| for irreducible A and nonnegative A'.
//
// With q the left Perron vector of A and p' a right Perron vector of A'
// (both 1-norm normalized),
//
//   (rho(A') - rho(A)) q^T p' = q^T (A' - A) p',   q^T p' >= min_i q_i,
//
// so |rho(A') - rho(A)| <= ||A' - A||_2 / q_star <= ||A' - A||_F / q_star.
//
// The computed q is only approximately a left eigenvector: q^T A = r q^T + d^T
// with |d_i| <= (b - a) q_i whenever r lies in [a, b], the range of the ratios
// (A^T q)_i / q_i. Then |d^T p'| <= (b - a) q^T p', so carrying d through the
// identity above only adds b - a to the bound, centred on any r in [a, b].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "perronroot/errors.hpp"
#include "perronroot/matrix.hpp"
#include "perronroot/solver.hpp"
#include "perronroot/structure.hpp"

namespace perronroot {

struct PerturbationBound {
  double q_star = 0.0;
  /// Frobenius norm of A' - A, used in place of the spectral norm.
  double e_norm = 0.0;
  /// e_norm / q_star.
  double bound = 0.0;
  /// Extra width absorbing the inexact left vector of A.
  double slack = 0.0;
  /// Guaranteed to contain rho(A').
  Interval enclosure;
  PerronCertificate base;
  static constexpr const char* norm_name = "frobenius";
};

namespace detail {

/// Range of (M^T q)_i / q_i, widened for rounding.
inline Interval left_ratio_range(const RealMatrix& m, std::span<const double> q) {
  const std::size_t n = m.size();
  const double rel = 2.0 * static_cast<double>(n + 4) * unit_roundoff;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += m(i, j) * q[i];
    const double r = acc / q[j];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {std::max(0.0, lo * (1.0 - rel)), hi * (1.0 + rel)};
}

inline PerturbationBound bound_from_base(const NonNegMatrix& a, const PerronCertificate& base,
                                         double e_norm) {
  PerturbationBound out;
  out.base = base;
  out.q_star = q_star(base);
  out.e_norm = e_norm;
  out.bound = e_norm / out.q_star;

  const Interval ratios = left_ratio_range(a, *base.left_vector);
  out.slack = ratios.width();
  const double n = static_cast<double>(a.size());
  const double reach = (out.bound + out.slack) * (1.0 + 2.0 * (n * n + 8.0) * unit_roundoff);
  out.enclosure = {std::max(0.0, ratios.hi - reach), ratios.lo + reach};
  // Never looser than what the base interval alone already implies when E = 0.
  if (e_norm == 0.0) out.enclosure = {std::max(out.enclosure.lo, base.lo()),
                                      std::min(out.enclosure.hi, base.hi())};
  return out;
}

}  // namespace detail

/// Continuity certificate for the pair (A, A'). A must be irreducible; A'
/// only needs to be nonnegative.
inline PerturbationBound continuity_certificate(const NonNegMatrix& a, const NonNegMatrix& a_prime,
                                                const SolverOptions& opts = {}) {
  require_same_size(a, a_prime);
  if (!is_irreducible(a))
    throw precondition_error("continuity certificate needs an irreducible base matrix");
  const auto base = perron_irreducible(a, opts);
  return detail::bound_from_base(a, base, frobenius_norm(difference(a_prime, a)));
}

struct SharpnessRow {
  double scale;
  double bound;
  /// |mid rho(A + s D) - mid rho(A)|.
  double actual;
  /// Width of both certificates, the slack the comparison is allowed.
  double widths;
  bool within() const noexcept { return actual <= bound + widths; }
};

/// Evaluates the bound against the certified shift of rho along A + s D for
/// each scale s. Throws domain_violation if a probe leaves the nonnegative
/// cone.
inline std::vector<SharpnessRow> sharpness_probe(const NonNegMatrix& a, const RealMatrix& direction,
                                                 std::span<const double> scales,
                                                 const SolverOptions& opts = {}) {
  require_same_size(a, direction);
  if (!is_irreducible(a))
    throw precondition_error("sharpness probe needs an irreducible base matrix");
  const auto base = perron_irreducible(a, opts);
  const double qs = q_star(base);
  const double dnorm = frobenius_norm(direction);

  std::vector<SharpnessRow> rows;
  rows.reserve(scales.size());
  for (double s : scales) {
    if (!(s > 0.0)) throw domain_violation("probe scales must be positive");
    const RealMatrix shifted = add_scaled(a, s, direction);
    for (double v : shifted.entries())
      if (v < 0.0)
        throw domain_violation("probe at scale " + std::to_string(s) +
                               " leaves the nonnegative cone");
    const auto c = perron_root(NonNegMatrix(shifted), opts);
    rows.push_back({s, s * dnorm / qs, std::abs(c.mid() - base.mid()), c.width() + base.width()});
  }
  return rows;
}

}  // namespace perronroot
