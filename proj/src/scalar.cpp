#include "summat/scalar.hpp"

#include <array>
#include <charconv>
#include <limits>

namespace summat {

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::exact_rational:
      return "exact";
    case Backend::float64:
      return "float";
    case Backend::log_positive:
      return "log";
  }
  return "unknown";
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) {
    throw ArithmeticError("cannot format double");
  }
  return std::string(buf.data(), end);
}

std::string scalar_traits<double>::to_string(double v) { return format_double(v); }

Rational scalar_traits<Rational>::from_double(double v) {
  if (!std::isfinite(v)) {
    throw ArithmeticError("cannot convert non-finite double to rational");
  }
  // mpq_set_d is exact for finite binary doubles.
  return Rational(v);
}

Rational scalar_traits<Rational>::ipow(long base, long exponent) {
  mpz_class b(base);
  mpz_class p;
  mpz_pow_ui(p.get_mpz_t(), b.get_mpz_t(),
             static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) {
    return Rational(p);
  }
  Rational r(mpz_class(1), p);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) {
    throw DomainError("empty rational literal");
  }
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0 || sgn(r.get_den()) == 0) {
      throw DomainError("invalid rational literal '" + s + "'");
    }
    r.canonicalize();
    return r;
  }
  // Decimal with optional exponent: mantissa digits / 10^k, exact.
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string digits;
  long scale = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      any_digit = true;
      if (seen_dot) ++scale;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  long exponent = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    auto first = s.data() + pos;
    auto last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc{} || ptr != last) {
      throw DomainError("invalid exponent in '" + s + "'");
    }
    pos = s.size();
  }
  if (!any_digit || pos != s.size()) {
    throw DomainError("invalid numeric literal '" + s + "'");
  }
  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  long net = exponent - scale;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
  Rational r = net >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  r.canonicalize();
  return r;
}

LogReal LogReal::from_log(double log_value) {
  if (std::isnan(log_value) || log_value == std::numeric_limits<double>::infinity()) {
    throw ArithmeticError("invalid log-domain value");
  }
  if (log_value == -std::numeric_limits<double>::infinity()) {
    throw DomainError("log-domain values must be strictly positive");
  }
  return LogReal(log_value);
}

LogReal LogReal::from_value(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError("log-domain values must be finite and strictly positive");
  }
  return LogReal(std::log(value));
}

double LogReal::value() const {
  double v = std::exp(log_);
  if (!std::isfinite(v)) {
    throw ArithmeticError("log-domain value exceeds float64 range");
  }
  return v;
}

LogReal operator+(LogReal a, LogReal b) {
  double hi = a.log_ > b.log_ ? a.log_ : b.log_;
  double lo = a.log_ > b.log_ ? b.log_ : a.log_;
  return LogReal(hi + std::log1p(std::exp(lo - hi)));
}

LogReal operator-(LogReal, LogReal) {
  throw DomainError("subtraction is not defined in the log domain");
}

}  // namespace summat
