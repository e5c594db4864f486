#include "summat/catalog.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace summat {

FunctionWeightSpec make_be_function_weight() {
  return FunctionWeightSpec{"be", [](double x) { return 2.0 * std::sqrt(x) - 0.5 * std::log(x); }};
}

LogPartialSums::LogPartialSums(std::function<double(double)> log_weight)
    : log_w_(std::move(log_weight)),
      log_weights_([this](index_t i, const double*) {
        double v = log_w_(static_cast<double>(i + 1));
        if (!std::isfinite(v)) throw ArithmeticError("log weight is not finite");
        return v;
      }),
      log_sums_([this](index_t i, const double* prev) {
        double w = log_weights_[i];
        if (!prev) return w;
        return (LogReal::from_log(*prev) + LogReal::from_log(w)).log();
      }) {}

LogReal partial_sum_exp(index_t n) {
  if (n == 0) throw DomainError("partial sums start at n = 1");
  return LogReal::from_log(LogPartialSums(exp_log_weight).log_sum(n));
}

LogReal partial_sum(const FunctionWeightSpec& spec, index_t n) {
  if (n == 0) throw DomainError("partial sums start at n = 1");
  return LogReal::from_log(LogPartialSums(spec.log_f).log_sum(n));
}

std::string power_weighted_id(double p) { return "Mp:" + format_double(p); }

TriangularMatrix<double> make_log_weighted(std::string id,
                                           std::function<double(double)> log_weight) {
  auto sums = std::make_shared<const LogPartialSums>(std::move(log_weight));
  auto inv = detail::bidiagonal<double>(
      "inv(" + id + ")",
      [sums](index_t n) { return std::exp(sums->log_sum(n + 1) - sums->log_weight(n + 1)); },
      [sums](index_t n) { return -std::exp(sums->log_sum(n) - sums->log_weight(n + 1)); },
      IndexBase::one_based_shifted);
  return TriangularMatrix<double>::from_formula(
             std::move(id),
             [sums](index_t n, index_t k) {
               return std::exp(sums->log_weight(k + 1) - sums->log_sum(n + 1));
             },
             MatrixFlags{true, true}, IndexBase::one_based_shifted,
             [sums](index_t n) {
               std::vector<double> r(n + 1);
               const double ls = sums->log_sum(n + 1);
               for (index_t k = 0; k <= n; ++k) r[k] = std::exp(sums->log_weight(k + 1) - ls);
               return r;
             })
      .with_closed_inverse(inv);
}

TriangularMatrix<double> make_exp_weighted() { return make_log_weighted("Mexp", exp_log_weight); }

TriangularMatrix<double> make_function_weighted(const FunctionWeightSpec& spec) {
  return make_log_weighted("Mf:" + spec.name, spec.log_f);
}

double AsymptoticClass::representative(double n) const {
  switch (kind) {
    case GrowthKind::constant:
      return 1.0;
    case GrowthKind::logarithmic:
      return std::log(n);
    case GrowthKind::power:
      return std::pow(n, exponent);
  }
  return 1.0;
}

std::string AsymptoticClass::name() const {
  switch (kind) {
    case GrowthKind::constant:
      return "constant";
    case GrowthKind::logarithmic:
      return "log";
    case GrowthKind::power:
      return "power(" + format_double(exponent) + ")";
  }
  return "unknown";
}

AsymptoticClass asymptotic_class(double p) {
  if (!std::isfinite(p)) throw DomainError("exponent must be finite");
  if (p < -1.0) return {GrowthKind::constant, 0.0};
  if (p == -1.0) return {GrowthKind::logarithmic, 0.0};
  return {GrowthKind::power, p + 1.0};
}

double loglog_slope(const std::function<double(double)>& y, double lo, double hi,
                    int points_per_decade) {
  if (!(lo > 0 && hi > lo)) throw DomainError("slope fit needs 0 < lo < hi");
  int count = std::max(2, static_cast<int>(std::ceil(std::log10(hi / lo) * points_per_decade)) + 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < count; ++i) {
    double x = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1);
    double v = y(std::exp(x));
    if (!(v > 0)) throw DomainError("slope fit needs positive values");
    double ly = std::log(v);
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
  }
  double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

double log_integral(const std::function<double(double)>& log_f, double a, double b,
                    double rel_tol) {
  if (!(b > a)) throw DomainError("integration interval must be non-empty");
  // Scale by the endpoint maximum so that e^{2 sqrt(x)}-sized integrands stay finite.
  double shift = std::max(log_f(a), log_f(b));
  auto g = [&](double x) { return std::exp(log_f(x) - shift); };
  double err = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      g, a, b, 15, rel_tol, &err);
  if (!(value > 0)) throw ArithmeticError("integral is not positive");
  return std::log(value) + shift;
}

}  // namespace summat
