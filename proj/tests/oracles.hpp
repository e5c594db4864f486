#pragma once

// Independent reference computations used by the tests. Nothing here calls the
// library's lazy machinery; matrices are plain nested vectors.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace oracle {

template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
Mat<T> zeros(std::size_t n, const T& zero) {
  return Mat<T>(n, std::vector<T>(n, zero));
}

template <class T>
Mat<T> product(const Mat<T>& a, const Mat<T>& b, const T& zero) {
  const std::size_t n = a.size();
  Mat<T> c = zeros<T>(n, zero);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      T s = zero;
      for (std::size_t k = 0; k < n; ++k) s += a[i][k] * b[k][j];
      c[i][j] = s;
    }
  return c;
}

/// Gauss-Jordan inverse with partial pivoting on the augmented matrix.
template <class T>
Mat<T> inverse(Mat<T> a, const T& zero, const T& one) {
  const std::size_t n = a.size();
  Mat<T> inv = zeros<T>(n, zero);
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = one;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col; r < n; ++r) {
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    }
    if (a[piv][col] == zero) throw std::runtime_error("singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    T d = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == zero) continue;
      T f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline Mat<double> inverse(const Mat<double>& a) { return inverse<double>(a, 0.0, 1.0); }
inline Mat<mpq_class> inverse(const Mat<mpq_class>& a) {
  return inverse<mpq_class>(a, mpq_class(0), mpq_class(1));
}

/// Random lower-triangular rational matrix with nonzero diagonal.
inline Mat<mpq_class> random_lower_rational(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  Mat<mpq_class> a = zeros<mpq_class>(n, mpq_class(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      int p = num(rng);
      if (i == j && p == 0) p = 1;
      mpq_class v(p, den(rng));
      v.canonicalize();
      a[i][j] = v;
    }
  return a;
}

/// S(n, p) = sum_{i=1}^n i^p by direct summation.
inline double power_sum(long n, double p) {
  double s = 0;
  for (long i = 1; i <= n; ++i) s += std::pow(static_cast<double>(i), p);
  return s;
}

inline mpq_class power_sum_exact(long n, long p) {
  mpq_class s = 0;
  for (long i = 1; i <= n; ++i) {
    mpz_class b(i), r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(p < 0 ? -p : p));
    if (p >= 0) s += mpq_class(r);
    else s += mpq_class(mpz_class(1), r);
  }
  s.canonicalize();
  return s;
}

}  // namespace oracle
