#pragma once

// Dense square matrices, permutations and the norms used throughout the
// library. Matrices are immutable values: every operation returns a new one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perronroot/errors.hpp"

namespace perronroot {

/// Square matrix of finite reals in row-major order.
class RealMatrix {
 public:
  RealMatrix(std::size_t n, std::vector<double> entries)
      : n_(n), a_(std::move(entries)) {
    if (n_ == 0) throw domain_violation("matrix dimension must be at least 1");
    if (a_.size() != n_ * n_)
      throw dimension_mismatch("expected " + std::to_string(n_ * n_) +
                               " entries, got " + std::to_string(a_.size()));
    for (std::size_t k = 0; k < a_.size(); ++k)
      if (!std::isfinite(a_[k]))
        throw domain_violation("non-finite entry at (" +
                               std::to_string(k / n_) + ", " +
                               std::to_string(k % n_) + ")");
  }

  RealMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : RealMatrix(rows.size(), flatten(rows)) {}

  static RealMatrix zero(std::size_t n) {
    return RealMatrix(n, std::vector<double>(n * n, 0.0));
  }

  static RealMatrix identity(std::size_t n) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return RealMatrix(n, std::move(e));
  }

  /// Builds a matrix entry by entry from f(i, j).
  template <class F>
  static RealMatrix generate(std::size_t n, F&& f) {
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) e[i * n + j] = f(i, j);
    return RealMatrix(n, std::move(e));
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(a_).subspan(i * n_, n_);
  }
  std::span<const double> entries() const noexcept { return a_; }

  bool operator==(const RealMatrix&) const = default;

 private:
  static std::vector<double> flatten(
      std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<double> e;
    e.reserve(rows.size() * rows.size());
    for (const auto& r : rows) {
      if (r.size() != rows.size())
        throw dimension_mismatch("matrix literal is not square");
      e.insert(e.end(), r.begin(), r.end());
    }
    return e;
  }

  std::size_t n_;
  std::vector<double> a_;
};

/// RealMatrix whose entries are all >= 0. Construction rejects negative
/// entries instead of clamping them.
class NonNegMatrix : public RealMatrix {
 public:
  NonNegMatrix(std::size_t n, std::vector<double> entries)
      : RealMatrix(n, std::move(entries)) {
    check();
  }
  NonNegMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : RealMatrix(rows) {
    check();
  }
  explicit NonNegMatrix(RealMatrix m) : RealMatrix(std::move(m)) { check(); }

  static NonNegMatrix zero(std::size_t n) { return NonNegMatrix(RealMatrix::zero(n)); }
  static NonNegMatrix identity(std::size_t n) {
    return NonNegMatrix(RealMatrix::identity(n));
  }
  template <class F>
  static NonNegMatrix generate(std::size_t n, F&& f) {
    return NonNegMatrix(RealMatrix::generate(n, std::forward<F>(f)));
  }

 private:
  void check() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if ((*this)(i, j) < 0.0)
          throw domain_violation("negative entry at (" + std::to_string(i) +
                                 ", " + std::to_string(j) + ")");
  }
};

/// Bijection on {0, ..., n-1}. As a matrix P it has P[map[i]][i] = 1, so
/// (P^T A P)[i][j] = A[map[i]][map[j]].
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
      if (v >= map_.size() || seen[v])
        throw domain_violation("permutation map is not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), std::size_t{0});
    return Permutation(std::move(m));
  }

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t operator()(std::size_t i) const { return map_[i]; }
  std::span<const std::size_t> map() const noexcept { return map_; }

  Permutation inverse() const {
    std::vector<std::size_t> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
    return Permutation(std::move(inv));
  }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::size_t> map_;
};

inline void require_same_size(const RealMatrix& x, const RealMatrix& y) {
  if (x.size() != y.size())
    throw dimension_mismatch("dimension mismatch: " + std::to_string(x.size()) +
                             " vs " + std::to_string(y.size()));
}

/// Sum of absolute values.
inline double one_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

/// Maximum absolute column sum. Consistent (submultiplicative).
inline double one_norm(const RealMatrix& x) {
  const std::size_t n = x.size();
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(x(i, j));
    best = std::max(best, s);
  }
  return best;
}

/// sqrt of the sum of squares; an upper bound on the spectral norm.
inline double frobenius_norm(const RealMatrix& e) {
  // Scaled accumulation so large entries cannot overflow the squares.
  double scale = 0.0;
  for (double v : e.entries()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : e.entries()) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

namespace detail {

inline std::vector<double> product_entries(const RealMatrix& x, const RealMatrix& y) {
  require_same_size(x, y);
  const std::size_t n = x.size();
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += xik * y(k, j);
    }
  for (double v : c)
    if (!std::isfinite(v)) throw domain_violation("overflow in matrix product");
  return c;
}

}  // namespace detail

inline RealMatrix matmul(const RealMatrix& x, const RealMatrix& y) {
  return RealMatrix(x.size(), detail::product_entries(x, y));
}

inline NonNegMatrix matmul(const NonNegMatrix& x, const NonNegMatrix& y) {
  return NonNegMatrix(x.size(), detail::product_entries(x, y));
}

/// A^p by repeated multiplication, p >= 1. Throws domain_violation on overflow.
inline NonNegMatrix matrix_power(const NonNegMatrix& a, std::size_t p) {
  if (p == 0) return NonNegMatrix::identity(a.size());
  NonNegMatrix r = a;
  for (std::size_t k = 1; k < p; ++k) r = matmul(r, a);
  return r;
}

inline RealMatrix transpose(const RealMatrix& x) {
  return RealMatrix::generate(x.size(), [&](std::size_t i, std::size_t j) { return x(j, i); });
}

inline NonNegMatrix transpose(const NonNegMatrix& x) {
  return NonNegMatrix(transpose(static_cast<const RealMatrix&>(x)));
}

inline RealMatrix difference(const RealMatrix& x, const RealMatrix& y) {
  require_same_size(x, y);
  return RealMatrix::generate(x.size(), [&](std::size_t i, std::size_t j) {
    return x(i, j) - y(i, j);
  });
}

inline RealMatrix scaled(const RealMatrix& x, double alpha) {
  return RealMatrix::generate(x.size(), [&](std::size_t i, std::size_t j) {
    return alpha * x(i, j);
  });
}

inline NonNegMatrix scaled(const NonNegMatrix& x, double alpha) {
  if (alpha < 0.0) throw domain_violation("negative scale for a nonnegative matrix");
  return NonNegMatrix(scaled(static_cast<const RealMatrix&>(x), alpha));
}

/// x + s*d, entrywise. Not necessarily nonnegative.
inline RealMatrix add_scaled(const RealMatrix& x, double s, const RealMatrix& d) {
  require_same_size(x, d);
  return RealMatrix::generate(x.size(), [&](std::size_t i, std::size_t j) {
    return x(i, j) + s * d(i, j);
  });
}

/// result[i][j] = a[p(i)][p(j)], i.e. P^T A P.
inline NonNegMatrix apply_symmetric_permutation(const NonNegMatrix& a, const Permutation& p) {
  if (a.size() != p.size())
    throw dimension_mismatch("permutation size does not match matrix");
  return NonNegMatrix::generate(a.size(), [&](std::size_t i, std::size_t j) {
    return a(p(i), p(j));
  });
}

inline RealMatrix apply_symmetric_permutation(const RealMatrix& a, const Permutation& p) {
  if (a.size() != p.size())
    throw dimension_mismatch("permutation size does not match matrix");
  return RealMatrix::generate(a.size(), [&](std::size_t i, std::size_t j) {
    return a(p(i), p(j));
  });
}

/// Contiguous principal submatrix a[offset..offset+len)^2.
inline NonNegMatrix principal_block(const NonNegMatrix& a, std::size_t offset, std::size_t len) {
  if (len == 0 || offset + len > a.size())
    throw dimension_mismatch("block range outside the matrix");
  return NonNegMatrix::generate(len, [&](std::size_t i, std::size_t j) {
    return a(offset + i, offset + j);
  });
}

inline double trace(const RealMatrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a(i, i);
  return t;
}

}  // namespace perronroot
