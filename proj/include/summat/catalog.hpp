#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include "summat/memo.hpp"
#include "summat/scalar.hpp"
#include "summat/triangular.hpp"

namespace summat {

/// Weight i^p, i = 1, 2, ...
struct PowerWeightSpec {
  double p = 0.0;
  bool integer_exponent() const { return std::isfinite(p) && p == std::floor(p); }
};

/// Weight f(i) given through log f, evaluated on x >= 1.
struct FunctionWeightSpec {
  std::string name;
  std::function<double(double)> log_f;
};

/// f(x) = exp(2 sqrt(x)) / sqrt(x).
FunctionWeightSpec make_be_function_weight();

/// S(n, p) = sum_{i=1}^n i^p, memoized. Indices are 1-based as in the formula.
template <Field F>
class PowerPartialSums {
 public:
  using traits = scalar_traits<F>;

  explicit PowerPartialSums(PowerWeightSpec spec)
      : spec_(spec),
        weights_([spec](index_t i, const F*) { return weight_of(spec, i + 1); }),
        sums_([this](index_t i, const F* prev) {
          F w = weights_[i];
          return prev ? F(*prev + w) : w;
        }) {
    if (!std::isfinite(spec.p)) throw DomainError("power weight exponent must be finite");
    if constexpr (traits::exact) {
      if (!spec.integer_exponent()) {
        throw BackendError("exact backend requires an integer exponent, got p=" +
                           format_double(spec.p));
      }
    }
  }

  const PowerWeightSpec& spec() const { return spec_; }
  /// i^p, i >= 1
  const F& weight(index_t i) const { return weights_[i - 1]; }
  /// S(n, p); S(0, p) = 0.
  F sum(index_t n) const { return n == 0 ? traits::zero() : sums_[n - 1]; }

 private:
  static F weight_of(const PowerWeightSpec& spec, index_t i) {
    if constexpr (traits::exact) {
      return traits::ipow(static_cast<long>(i), static_cast<long>(spec.p));
    } else {
      return traits::checked(std::pow(static_cast<double>(i), spec.p), "power weight");
    }
  }

  PowerWeightSpec spec_;
  MemoTable<F> weights_;
  MemoTable<F> sums_;
};

/// log S(n, w) for a positive weight given by its logarithm, accumulated with
/// log-sum-exp so that e^n-type weights never overflow.
class LogPartialSums {
 public:
  explicit LogPartialSums(std::function<double(double)> log_weight);

  double log_weight(index_t i) const { return log_weights_[i - 1]; }
  /// n >= 1
  double log_sum(index_t n) const { return log_sums_[n - 1]; }

 private:
  std::function<double(double)> log_w_;
  MemoTable<double> log_weights_;
  MemoTable<double> log_sums_;
};

/// log of the exponential weight i -> e^i.
inline double exp_log_weight(double x) { return x; }

template <Field F>
F partial_sum(const PowerWeightSpec& spec, index_t n) {
  if (n == 0) throw DomainError("partial sums start at n = 1");
  return PowerPartialSums<F>(spec).sum(n);
}
/// S(n, exp) in the log domain.
LogReal partial_sum_exp(index_t n);
/// S(n, f) in the log domain.
LogReal partial_sum(const FunctionWeightSpec& spec, index_t n);

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

template <Field F>
TriangularMatrix<F> make_identity() {
  using traits = scalar_traits<F>;
  auto m = TriangularMatrix<F>::from_formula(
      "id", [](index_t n, index_t k) { return n == k ? traits::one() : traits::zero(); },
      MatrixFlags{true, true, 0}, IndexBase::zero_based, [](index_t n) {
        std::vector<F> r(n + 1, traits::zero());
        r[n] = traits::one();
        return r;
      });
  return m.with_closed_inverse(m);
}

template <Field F>
TriangularMatrix<F> make_delta() {
  using traits = scalar_traits<F>;
  return TriangularMatrix<F>::from_formula(
      "delta",
      [](index_t n, index_t k) {
        if (n == k) return traits::one();
        if (n == k + 1) return traits::from_int(-1);
        return traits::zero();
      },
      MatrixFlags{false, true, 1});
}

template <Field F>
TriangularMatrix<F> make_delta_inverse() {
  using traits = scalar_traits<F>;
  return TriangularMatrix<F>::from_formula(
      "delta-inv", [](index_t, index_t) { return traits::one(); }, MatrixFlags{false, true});
}

/// Pairs delta and delta-inv as each other's closed inverse.
template <Field F>
TriangularMatrix<F> make_delta_with_inverse() {
  return make_delta<F>().with_closed_inverse(make_delta_inverse<F>());
}
template <Field F>
TriangularMatrix<F> make_delta_inverse_with_inverse() {
  return make_delta_inverse<F>().with_closed_inverse(make_delta<F>());
}

namespace detail {

/// Lower bidiagonal matrix from diagonal/subdiagonal generators (subdiag(n) is
/// the entry (n, n-1), n >= 1).
template <Field F>
TriangularMatrix<F> bidiagonal(std::string id, std::function<F(index_t)> diag,
                               std::function<F(index_t)> subdiag, IndexBase base) {
  using traits = scalar_traits<F>;
  return TriangularMatrix<F>::from_formula(
      std::move(id),
      [diag, subdiag](index_t n, index_t k) {
        if (n == k) return diag(n);
        if (n == k + 1) return subdiag(n);
        return traits::zero();
      },
      MatrixFlags{false, true, 1}, base,
      [diag, subdiag](index_t n) {
        std::vector<F> r(n + 1, traits::zero());
        r[n] = diag(n);
        if (n >= 1) r[n - 1] = subdiag(n);
        return r;
      });
}

}  // namespace detail

template <Field F>
TriangularMatrix<F> make_cesaro() {
  using traits = scalar_traits<F>;
  auto inv = detail::bidiagonal<F>(
      "inv(cesaro)", [](index_t n) { return traits::from_int(static_cast<long>(n + 1)); },
      [](index_t n) { return traits::from_int(-static_cast<long>(n)); }, IndexBase::zero_based);
  return TriangularMatrix<F>::from_formula(
             "cesaro",
             [](index_t n, index_t) { return traits::from_ratio(1, static_cast<long>(n + 1)); },
             MatrixFlags{true, true}, IndexBase::zero_based,
             [](index_t n) {
               return std::vector<F>(n + 1, traits::from_ratio(1, static_cast<long>(n + 1)));
             })
      .with_closed_inverse(inv);
}

std::string power_weighted_id(double p);

/// M_p: entry(n, k) = (k+1)^p / S(n+1, p), with the bidiagonal closed inverse
/// diag S(n+1,p)/(n+1)^p and subdiagonal -S(n,p)/(n+1)^p.
template <Field F>
TriangularMatrix<F> make_power_weighted(PowerWeightSpec spec) {
  auto sums = std::make_shared<const PowerPartialSums<F>>(spec);
  std::string id = power_weighted_id(spec.p);
  auto inv = detail::bidiagonal<F>(
      "inv(" + id + ")", [sums](index_t n) { return F(sums->sum(n + 1) / sums->weight(n + 1)); },
      [sums](index_t n) { return F(-(sums->sum(n) / sums->weight(n + 1))); },
      IndexBase::one_based_shifted);
  return TriangularMatrix<F>::from_formula(
             id, [sums](index_t n, index_t k) { return F(sums->weight(k + 1) / sums->sum(n + 1)); },
             MatrixFlags{true, true}, IndexBase::one_based_shifted,
             [sums](index_t n) {
               std::vector<F> r(n + 1);
               const F s = sums->sum(n + 1);
               for (index_t k = 0; k <= n; ++k) r[k] = sums->weight(k + 1) / s;
               return r;
             })
      .with_closed_inverse(inv);
}

/// Weighted mean matrix for a log-specified positive weight; entries are
/// exp(log w(k+1) - log S(n+1)), the closed inverse is formed from ratios of
/// the same logs with the subdiagonal sign applied outside the log domain.
TriangularMatrix<double> make_log_weighted(std::string id, std::function<double(double)> log_weight);

TriangularMatrix<double> make_exp_weighted();
TriangularMatrix<double> make_function_weighted(const FunctionWeightSpec& spec);

/// Rows 2m and 2m+1 carry 1/(m+1) on the even columns 0, 2, ..., 2m. Odd rows
/// have a zero diagonal entry, so the matrix is not invertible.
template <Field F>
TriangularMatrix<F> make_counterexample_matrix() {
  using traits = scalar_traits<F>;
  return TriangularMatrix<F>::from_formula(
      "counterexample",
      [](index_t n, index_t k) {
        index_t m = n / 2;
        if (k % 2 == 0 && k <= 2 * m) return traits::from_ratio(1, static_cast<long>(m + 1));
        return traits::zero();
      },
      MatrixFlags{true, false});
}

// ---------------------------------------------------------------------------
// Asymptotics of S(n, p)
// ---------------------------------------------------------------------------

enum class GrowthKind { constant, logarithmic, power };

struct AsymptoticClass {
  GrowthKind kind;
  /// p + 1 for the power class, 0 otherwise.
  double exponent = 0.0;

  /// Representative function 1, log n, or n^{p+1}.
  double representative(double n) const;
  std::string name() const;
  friend bool operator==(const AsymptoticClass&, const AsymptoticClass&) = default;
};

/// p < -1: constant; p = -1: log; p > -1: power(p + 1).
AsymptoticClass asymptotic_class(double p);

/// Least-squares slope of log y against log n over a geometric grid of n in
/// [lo, hi] (points per decade as given).
double loglog_slope(const std::function<double(double)>& y, double lo, double hi,
                    int points_per_decade = 20);

/// Log of the integral of exp(log_f) over [a, b] (adaptive Gauss-Kronrod).
double log_integral(const std::function<double(double)>& log_f, double a, double b,
                    double rel_tol = 1e-8);

}  // namespace summat
