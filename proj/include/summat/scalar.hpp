#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace summat {

using index_t = std::size_t;

/// Exact rational numbers; always kept in canonical (gcd-reduced) form.
using Rational = mpq_class;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite float result or overflow during evaluation.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// Operation outside the domain of a backend (e.g. subtraction in log domain).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A backend cannot represent the requested object (e.g. exact M_p, p not integer).
class BackendError : public Error {
 public:
  using Error::Error;
};

class InvertibilityError : public Error {
 public:
  InvertibilityError(index_t row, const std::string& what)
      : Error(what), row_(row) {}
  index_t row() const noexcept { return row_; }

 private:
  index_t row_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

enum class Backend { exact_rational, float64, log_positive };

std::string_view to_string(Backend b);

template <class F>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr Backend backend = Backend::float64;
  static constexpr bool exact = false;

  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double from_ratio(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_double(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
  static bool is_zero(double v) { return v == 0.0; }
  static double to_double(double v) { return v; }
  /// Integer power of a positive integer base.
  static double ipow(long base, long exponent) {
    return std::pow(static_cast<double>(base), static_cast<double>(exponent));
  }
  static double checked(double v, const char* where) {
    if (!std::isfinite(v)) {
      throw ArithmeticError(std::string("non-finite float64 value in ") + where);
    }
    return v;
  }
  static std::string to_string(double v);
};

template <>
struct scalar_traits<Rational> {
  static constexpr Backend backend = Backend::exact_rational;
  static constexpr bool exact = true;

  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long v) { return Rational(v); }
  static Rational from_ratio(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  /// Exact conversion of a binary double (every finite double is rational).
  static Rational from_double(double v);
  static Rational abs(const Rational& v) { return ::abs(v); }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static double to_double(const Rational& v) { return v.get_d(); }
  static Rational ipow(long base, long exponent);
  static const Rational& checked(const Rational& v, const char*) { return v; }
  static std::string to_string(const Rational& v) { return v.get_str(); }
};

template <class F>
concept Field = requires {
  { scalar_traits<F>::backend } -> std::convertible_to<Backend>;
  { scalar_traits<F>::exact } -> std::convertible_to<bool>;
};

template <Field F>
double to_double(const F& v) {
  return scalar_traits<F>::to_double(v);
}

/// Parses "p/q", an integer, or a finite decimal ("0.25", "-1e-3") exactly.
Rational parse_rational(std::string_view text);

/// Shortest round-trip decimal representation, '.' separator, no locale.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// LogReal
// ---------------------------------------------------------------------------

/// Strictly positive real stored as its natural logarithm.
///
/// Sums use a log-sum-exp reduction so that quantities like S(n, exp) never
/// overflow. Subtraction is not representable and raises DomainError.
class LogReal {
 public:
  LogReal() = default;

  static LogReal from_log(double log_value);
  static LogReal from_value(double value);

  double log() const noexcept { return log_; }
  /// exp(log); throws ArithmeticError when the value does not fit a double.
  double value() const;

  friend LogReal operator+(LogReal a, LogReal b);
  friend LogReal operator*(LogReal a, LogReal b) { return from_log(a.log_ + b.log_); }
  friend LogReal operator/(LogReal a, LogReal b) { return from_log(a.log_ - b.log_); }
  friend LogReal operator-(LogReal, LogReal);

  LogReal& operator+=(LogReal other) { return *this = *this + other; }

  friend bool operator<(LogReal a, LogReal b) { return a.log_ < b.log_; }
  friend bool operator==(LogReal a, LogReal b) { return a.log_ == b.log_; }

 private:
  explicit LogReal(double l) : log_(l) {}
  double log_ = 0.0;
};

}  // namespace summat
