#pragma once

// Reference spectral-radius computations for tests. None of these share code
// with the library solver: they work from the characteristic polynomial, the
// M-matrix criterion, or an unrelated power iteration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "perronroot/matrix.hpp"

namespace oracle {

using perronroot::RealMatrix;

/// Largest real root of the characteristic polynomial for n <= 3, in closed
/// form. For a nonnegative matrix this is the Perron root.
inline double closed_form_root(const RealMatrix& a) {
  switch (a.size()) {
    case 1: return a(0, 0);
    case 2: {
      const double tr = a(0, 0) + a(1, 1);
      const double diff = a(0, 0) - a(1, 1);
      // discriminant of x^2 - tr x + det, written without cancellation
      const double disc = diff * diff + 4.0 * a(0, 1) * a(1, 0);
      return 0.5 * (tr + std::sqrt(disc));
    }
    case 3: {
      // x^3 + b x^2 + c x + d
      const double b = -(a(0, 0) + a(1, 1) + a(2, 2));
      const double c = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) -
                       a(0, 2) * a(2, 0) + a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
      const double det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
      const double d = -det;
      // Depressed cubic t^3 + p t + q with x = t - b/3.
      const double p = c - b * b / 3.0;
      const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
      const double shift = -b / 3.0;
      const double disc = q * q / 4.0 + p * p * p / 27.0;
      double root;
      if (disc > 0.0) {
        const double s = std::sqrt(disc);
        root = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
      } else if (p == 0.0) {
        root = std::cbrt(-q);
      } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        root = m * std::cos(std::acos(arg) / 3.0);  // largest of the three
      }
      return root + shift;
    }
    default: throw std::invalid_argument("closed form only for n <= 3");
  }
}

/// True iff xI - A is a nonsingular M-matrix, i.e. every leading principal
/// minor of xI - A is positive. For A >= 0 this holds exactly when x > rho(A).
inline bool above_spectral_radius(const RealMatrix& a, double x) {
  const std::size_t n = a.size();
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = (i == j ? x : 0.0) - a(i, j);
  for (std::size_t k = 0; k < n; ++k) {
    const double pivot = m[k * n + k];
    if (!(pivot > 0.0)) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i * n + k] / pivot;
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
    }
  }
  return true;
}

/// Bisection on the characteristic polynomial through its leading principal
/// minors, over [0, ||A||_1].
inline double bisection_root(const RealMatrix& a) {
  double lo = 0.0;
  double hi = perronroot::one_norm(a) * (1.0 + 1e-12) + 1e-300;
  if (!above_spectral_radius(a, hi)) hi *= 2.0;
  for (int it = 0; it < 2000 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (above_spectral_radius(a, mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Midpoint of the Collatz-Wielandt bracket after plain power iteration on
/// A + I with 2-norm normalization, up to max_iter steps. Only meaningful for
/// irreducible A.
inline double collatz_wielandt_midpoint(const RealMatrix& a, std::size_t max_iter = 1'000'000) {
  const std::size_t n = a.size();
  if (n == 1) return a(0, 0);
  std::vector<double> x(n, 1.0), y(n);
  double lo = 0.0, hi = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = x[i];
      for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * x[j];
      y[i] = acc;
    }
    double rmin = INFINITY, rmax = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rmin = std::min(rmin, y[i] / x[i]);
      rmax = std::max(rmax, y[i] / x[i]);
      norm2 += y[i] * y[i];
    }
    lo = rmin - 1.0;
    hi = rmax - 1.0;
    norm2 = std::sqrt(norm2);
    bool same = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = y[i] / norm2;
      same = same && v == x[i];
      x[i] = v;
    }
    if (same || hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

/// Strongly connected components by transitive closure, each as a sorted
/// index list. Independent of the library's graph code.
inline std::vector<std::vector<std::size_t>> components_by_closure(const RealMatrix& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = i == j || a(i, j) > 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  std::vector<std::vector<std::size_t>> comps;
  std::vector<bool> seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    comps.emplace_back();
    for (std::size_t j = i; j < n; ++j)
      if (reach[i][j] && reach[j][i]) {
        seen[j] = true;
        comps.back().push_back(j);
      }
  }
  return comps;
}

/// Collatz-Wielandt midpoint for any nonnegative A: the largest midpoint over
/// the principal submatrices of its strong components.
inline double componentwise_cw_midpoint(const RealMatrix& a, std::size_t max_iter = 1'000'000) {
  double best = 0.0;
  for (const auto& comp : components_by_closure(a)) {
    const RealMatrix sub = RealMatrix::generate(comp.size(), [&](std::size_t i, std::size_t j) {
      return a(comp[i], comp[j]);
    });
    best = std::max(best, collatz_wielandt_midpoint(sub, max_iter));
  }
  return best;
}

}  // namespace oracle
