#pragma once

// Certified Perron roots.
//
// An irreducible block B (n >= 2) is handled by power iteration on the
// primitive matrix B + cI from the uniform start. For every positive iterate x
// the Collatz-Wielandt ratios ((B + cI)x)_i / x_i bracket rho(B) + c. The
// ratios are widened by a rigorous bound on the rounding error of the
// nonnegative sums, and the interval kept is the intersection over all
// iterations of both the right (B) and left (B^T) sweeps.
//
// The shift c is a power of two close to the geometric mean of the row- and
// column-sum bounds on rho(B). Power-of-two shifts make the iteration exactly
// equivariant under power-of-two scalings of B.
//
// Reducible matrices are certified block by block through the Frobenius
// normal form: rho(A) is the largest block root.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "perronroot/errors.hpp"
#include "perronroot/matrix.hpp"
#include "perronroot/structure.hpp"

namespace perronroot {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const noexcept { return 0.5 * (lo + hi); }
  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool intersects(const Interval& o) const noexcept { return lo <= o.hi && o.lo <= hi; }
};

struct SolverOptions {
  /// Stop once hi - lo <= tol * hi. Zero means iterate until the interval
  /// stops shrinking (or max_iter).
  double tol = 1e-12;
  std::size_t max_iter = 1'000'000;
};

struct PerronCertificate {
  Interval root;
  std::optional<std::vector<double>> right_vector;
  std::optional<std::vector<double>> left_vector;
  /// ||A v - mid v||_1 for the right vector, when one is present.
  std::optional<double> residual;
  std::size_t iterations = 0;
  /// False when max_iter or the rounding floor stopped the iteration before
  /// the tolerance was met. The interval is still a valid enclosure.
  bool converged = true;

  double lo() const noexcept { return root.lo; }
  double hi() const noexcept { return root.hi; }
  double mid() const noexcept { return root.mid(); }
  double width() const noexcept { return root.width(); }
};

namespace detail {

inline constexpr double unit_roundoff = std::numeric_limits<double>::epsilon() / 2;

struct Sweep {
  std::vector<double> x;
  Interval bounds;
  std::size_t iterations = 0;
};

/// Power of two near sqrt(lower * upper), where [lower, upper] brackets
/// rho(B) by row and column sums.
inline double choose_shift(const RealMatrix& b) {
  const std::size_t n = b.size();
  double min_row = std::numeric_limits<double>::infinity(), max_row = 0.0;
  double min_col = min_row, max_col = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0, c = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      r += b(i, j);
      c += b(j, i);
    }
    min_row = std::min(min_row, r);
    max_row = std::max(max_row, r);
    min_col = std::min(min_col, c);
    max_col = std::max(max_col, c);
  }
  const double lower = std::max(min_row, min_col);
  const double upper = std::min(max_row, max_col);
  if (!(lower > 0.0) || !(upper > 0.0)) return 1.0;
  // round(log2(sqrt(lower * upper))), split into integer exponents and
  // mantissa logs so that scaling B by 2^k moves the result by exactly k.
  int el = 0, eu = 0;
  const double ml = std::frexp(lower, &el);
  const double mu = std::frexp(upper, &eu);
  const double half_frac = 0.5 * (std::log2(ml) + std::log2(mu));  // in [-1, 0)
  const int e_sum = el + eu;
  const int e = (e_sum % 2 == 0) ? e_sum / 2 + static_cast<int>(std::round(half_frac))
                                 : (e_sum - 1) / 2 + static_cast<int>(std::round(half_frac + 0.5));
  return std::ldexp(1.0, std::clamp(e, -1000, 1000));
}

inline Sweep collatz_wielandt_sweep(const RealMatrix& b, bool transposed, double shift,
                                    const SolverOptions& opts) {
  const std::size_t n = b.size();
  // Each y_i is a sum of n + 1 nonnegative products, then divided by x_i.
  const double rel = 2.0 * static_cast<double>(n + 4) * unit_roundoff;
  const double abs_slack = 4.0 * unit_roundoff;
  const std::size_t patience = 64 + 2 * n * n;

  Sweep s;
  s.x.assign(n, 1.0 / static_cast<double>(n));
  s.bounds = {0.0, std::numeric_limits<double>::infinity()};
  std::vector<double> y(n);
  double best_width = s.bounds.width();
  std::size_t last_improvement = 0;

  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    s.iterations = it;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = shift * s.x[i];
      for (std::size_t j = 0; j < n; ++j)
        acc += (transposed ? b(j, i) : b(i, j)) * s.x[j];
      y[i] = acc;
    }

    bool positive = true;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isnormal(s.x[i]) || !std::isfinite(y[i])) {
        positive = false;
        break;
      }
      const double r = y[i] / s.x[i];
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    if (positive) {
      const double lo = rmin * (1.0 - rel) - shift - abs_slack * (rmin + shift);
      const double hi = rmax * (1.0 + rel) - shift + abs_slack * (rmax + shift);
      s.bounds.lo = std::max({s.bounds.lo, lo, 0.0});
      s.bounds.hi = std::min(s.bounds.hi, hi);
    }

    double total = 0.0;
    for (double v : y) total += v;
    if (!(total > 0.0) || !std::isfinite(total)) break;
    for (std::size_t i = 0; i < n; ++i) s.x[i] = y[i] / total;

    const double w = s.bounds.width();
    if (w <= opts.tol * s.bounds.hi) break;
    if (w < best_width) {
      best_width = w;
      last_improvement = it;
    } else if (it - last_improvement > patience) {
      break;
    }
  }
  return s;
}

inline void normalize_one(std::vector<double>& v) {
  const double s = one_norm(v);
  for (double& x : v) x /= s;
}

inline double eigen_residual(const RealMatrix& a, std::span<const double> v, double lambda) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double acc = -lambda * v[i];
    for (std::size_t j = 0; j < a.size(); ++j) acc += a(i, j) * v[j];
    r += std::abs(acc);
  }
  return r;
}

}  // namespace detail

/// Certifies the Perron root of an irreducible matrix and returns its right
/// and left Perron vectors (1-norm normalized). Throws precondition_error on
/// reducible input.
inline PerronCertificate perron_irreducible(const NonNegMatrix& b, const SolverOptions& opts = {}) {
  if (!is_irreducible(b)) throw precondition_error("matrix is reducible");
  if (opts.max_iter == 0) throw domain_violation("max_iter must be positive");
  if (!(opts.tol >= 0.0)) throw domain_violation("tol must be nonnegative");

  const std::size_t n = b.size();
  PerronCertificate cert;
  if (n == 1) {
    cert.root = {b(0, 0), b(0, 0)};
    cert.right_vector = std::vector<double>{1.0};
    cert.left_vector = std::vector<double>{1.0};
    cert.residual = 0.0;
    return cert;
  }

  const double shift = detail::choose_shift(b);
  auto right = detail::collatz_wielandt_sweep(b, false, shift, opts);
  auto left = detail::collatz_wielandt_sweep(b, true, shift, opts);

  double lo = std::max(right.bounds.lo, left.bounds.lo);
  double hi = std::min(right.bounds.hi, left.bounds.hi);
  if (lo > hi) std::swap(lo, hi);
  cert.root = {lo, hi};
  cert.iterations = right.iterations + left.iterations;
  cert.converged = cert.root.width() <= opts.tol * cert.root.hi;

  detail::normalize_one(right.x);
  detail::normalize_one(left.x);
  cert.residual = detail::eigen_residual(b, right.x, cert.mid());
  cert.right_vector = std::move(right.x);
  cert.left_vector = std::move(left.x);
  return cert;
}

/// Certificates for each diagonal block of a Frobenius normal form, in block
/// order.
inline std::vector<PerronCertificate> certify_blocks(const FrobeniusNormalForm& fnf,
                                                     const SolverOptions& opts = {}) {
  std::vector<PerronCertificate> out;
  out.reserve(fnf.block_matrices.size());
  for (const auto& b : fnf.block_matrices) out.push_back(perron_irreducible(b, opts));
  return out;
}

/// Certified Perron root of any nonnegative matrix. Vectors are attached only
/// when the matrix is irreducible.
inline PerronCertificate perron_root(const NonNegMatrix& a, const SolverOptions& opts = {}) {
  if (is_irreducible(a)) return perron_irreducible(a, opts);

  const auto fnf = frobenius_normal_form(a);
  const auto blocks = certify_blocks(fnf, opts);
  PerronCertificate cert;
  for (const auto& c : blocks) {
    cert.root.lo = std::max(cert.root.lo, c.lo());
    cert.root.hi = std::max(cert.root.hi, c.hi());
    cert.iterations += c.iterations;
    cert.converged = cert.converged && c.converged;
  }
  return cert;
}

/// Index (in block order) of the block whose certified root has the largest
/// midpoint; the lowest index wins ties.
inline std::size_t spectral_block(const std::vector<PerronCertificate>& block_certs) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < block_certs.size(); ++k)
    if (block_certs[k].mid() > block_certs[best].mid()) best = k;
  return best;
}

inline std::size_t spectral_block(const NonNegMatrix& a, const SolverOptions& opts = {}) {
  return spectral_block(certify_blocks(frobenius_normal_form(a), opts));
}

/// Smallest entry of the left Perron vector.
inline double q_star(const PerronCertificate& cert) {
  if (!cert.left_vector) throw precondition_error("certificate has no left Perron vector");
  const auto& q = *cert.left_vector;
  const double m = *std::min_element(q.begin(), q.end());
  if (!(m > 0.0)) throw precondition_error("left Perron vector is not strictly positive");
  return m;
}

struct PowerRadiusCheck {
  Interval root_powered;   ///< certified rho(A), raised to the p-th power
  Interval root_of_power;  ///< certified rho(A^p)
  bool consistent() const noexcept { return root_powered.intersects(root_of_power); }
};

/// Encloses rho(A)^p and rho(A^p) independently. The floating-point A^p is
/// bracketed entrywise by its accumulated rounding error, and monotonicity of
/// the Perron root turns the bracket into an enclosure of rho(A^p).
inline PowerRadiusCheck power_radius_identity_check(const NonNegMatrix& a, std::size_t p,
                                                    const SolverOptions& opts = {}) {
  if (p == 0) throw domain_violation("power must be positive");
  const auto base = perron_root(a, opts);
  const double fudge = static_cast<double>(p + 2) * 2.0 * detail::unit_roundoff;
  PowerRadiusCheck out;
  out.root_powered = {std::pow(base.lo(), static_cast<double>(p)) * (1.0 - fudge),
                      std::pow(base.hi(), static_cast<double>(p)) * (1.0 + fudge)};
  if (!std::isfinite(out.root_powered.hi)) throw domain_violation("overflow in rho(A)^p");

  const NonNegMatrix ap = matrix_power(a, p);
  const double gamma = static_cast<double>(a.size()) * detail::unit_roundoff /
                       (1.0 - static_cast<double>(a.size()) * detail::unit_roundoff);
  double rel = 0.0;
  for (std::size_t k = 1; k < p; ++k) rel = (1.0 + rel) * (1.0 + gamma) - 1.0;
  // A^p lies entrywise in [(1 - slack) Ap, (1 + slack) Ap]; by monotonicity and
  // homogeneity of the Perron root the same factors bracket rho(A^p).
  const double slack = 2.0 * rel + 4.0 * detail::unit_roundoff;
  const auto cert = perron_root(ap, opts);
  out.root_of_power = {cert.lo() * (1.0 - slack) * (1.0 - 2.0 * detail::unit_roundoff),
                       cert.hi() * (1.0 + slack) * (1.0 + 2.0 * detail::unit_roundoff)};
  return out;
}

}  // namespace perronroot
