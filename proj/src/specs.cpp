#include "summat/specs.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "summat/catalog.hpp"

namespace summat {

namespace {

constexpr index_t kMaxOperatorDim = 1024;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

Rational number(std::string_view text, std::string_view what) {
  try {
    return parse_rational(trim(text));
  } catch (const DomainError&) {
    throw SpecError("invalid number '" + std::string(text) + "' in " + std::string(what));
  }
}

std::uint64_t unsigned_int(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw SpecError("invalid integer '" + std::string(text) + "' in " + std::string(what));
  }
  return v;
}

index_t dimension(std::string_view text, std::string_view what) {
  auto d = unsigned_int(text, what);
  if (d == 0 || d > kMaxOperatorDim) {
    throw SpecError("dimension must be in [1, " + std::to_string(kMaxOperatorDim) + "] in " +
                    std::string(what));
  }
  return static_cast<index_t>(d);
}

template <Field F>
F convert(const Rational& r) {
  if constexpr (scalar_traits<F>::exact) {
    return r;
  } else {
    return r.get_d();
  }
}

template <Field F>
TriangularMatrix<F> matrix_term(std::string_view term) {
  constexpr bool exact = scalar_traits<F>::exact;
  if (term == "id") return make_identity<F>();
  if (term == "cesaro") return make_cesaro<F>();
  if (term == "delta") return make_delta_with_inverse<F>();
  if (term == "delta-inv") return make_delta_inverse_with_inverse<F>();
  if (term == "counterexample") return make_counterexample_matrix<F>();
  if (term == "Mexp" || term == "Mf:be") {
    if constexpr (exact) {
      throw BackendError(std::string(term) + " has irrational entries; use the float backend");
    } else {
      return term == "Mexp" ? make_exp_weighted() : make_function_weighted(make_be_function_weight());
    }
  }
  if (term.rfind("Mp:", 0) == 0) {
    double p = number(term.substr(3), "matrix term " + std::string(term)).get_d();
    return make_power_weighted<F>(PowerWeightSpec{p});
  }
  throw SpecError("unknown matrix term '" + std::string(term) + "'; known: id, cesaro, Mp:<p>, "
                  "Mexp, Mf:be, delta, delta-inv, counterexample");
}

template <Field F>
DenseMatrix<F> rotation(const Rational& degrees) {
  using traits = scalar_traits<F>;
  DenseMatrix<F> m(2, 2);
  Rational quarter = degrees / 90;
  quarter.canonicalize();
  if (quarter.get_den() == 1) {
    mpz_class q = quarter.get_num() % 4;
    if (q < 0) q += 4;
    const long c[4] = {1, 0, -1, 0};
    const long s[4] = {0, 1, 0, -1};
    long k = q.get_si();
    m(0, 0) = traits::from_int(c[k]);
    m(0, 1) = traits::from_int(-s[k]);
    m(1, 0) = traits::from_int(s[k]);
    m(1, 1) = traits::from_int(c[k]);
    return m;
  }
  if constexpr (traits::exact) {
    throw BackendError("exact rotations exist only for multiples of 90 degrees");
  } else {
    double t = degrees.get_d() * std::numbers::pi / 180.0;
    m(0, 0) = std::cos(t);
    m(0, 1) = -std::sin(t);
    m(1, 0) = std::sin(t);
    m(1, 1) = std::cos(t);
    return m;
  }
}

template <Field F>
DenseMatrix<F> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open operator file '" + path + "'");
  std::vector<std::vector<Rational>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<Rational> row;
    for (auto cell : split(line, ',')) row.push_back(number(cell, "file " + path));
    rows.push_back(std::move(row));
  }
  const index_t d = rows.size();
  if (d == 0) throw SpecError("operator file '" + path + "' is empty");
  if (d > kMaxOperatorDim) throw SpecError("operator file '" + path + "' is too large");
  DenseMatrix<F> m(d, d);
  for (index_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) {
      throw SpecError("operator file '" + path + "' is not square: row " + std::to_string(i) +
                      " has " + std::to_string(rows[i].size()) + " entries, expected " +
                      std::to_string(d));
    }
    for (index_t j = 0; j < d; ++j) m(i, j) = convert<F>(rows[i][j]);
  }
  return m;
}

template <Field F>
DenseMatrix<F> random_operator(index_t d, std::uint64_t seed) {
  using traits = scalar_traits<F>;
  std::mt19937_64 rng(seed);
  std::vector<long> num(d * d);
  for (auto& v : num) v = static_cast<long>(rng() % 17) - 8;
  long norm = 0;
  for (index_t i = 0; i < d; ++i) {
    long s = 0;
    for (index_t j = 0; j < d; ++j) s += std::labs(num[i * d + j]);
    norm = std::max(norm, s);
  }
  if (norm == 0) norm = 1;
  DenseMatrix<F> m(d, d);
  for (index_t i = 0; i < d; ++i) {
    for (index_t j = 0; j < d; ++j) m(i, j) = traits::from_ratio(num[i * d + j], norm);
  }
  return m;
}

template <Field F>
FiniteOperator<F> build_operator(std::string_view spec) {
  using traits = scalar_traits<F>;
  const std::string id(spec);
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw SpecError("operator spec '" + id + "' has no ':'");
  std::string_view kind = spec.substr(0, colon);
  std::string_view rest = spec.substr(colon + 1);
  auto parts = split(rest, ':');
  auto need = [&](std::size_t n) {
    if (parts.size() != n) {
      throw SpecError("operator spec '" + id + "' expects " + std::to_string(n) + " field(s)");
    }
  };
  if (kind == "rot") {
    need(1);
    return FiniteOperator<F>(id, rotation<F>(number(parts[0], id)));
  }
  if (kind == "diag") {
    need(1);
    auto vals = split(parts[0], ',');
    if (vals.size() > kMaxOperatorDim) throw SpecError("operator spec '" + id + "' is too large");
    DenseMatrix<F> m(vals.size(), vals.size());
    for (index_t i = 0; i < vals.size(); ++i) m(i, i) = convert<F>(number(vals[i], id));
    return FiniteOperator<F>(id, std::move(m));
  }
  if (kind == "neg-id") {
    need(1);
    index_t d = dimension(parts[0], id);
    DenseMatrix<F> m = DenseMatrix<F>::identity(d);
    m *= traits::from_int(-1);
    return FiniteOperator<F>(id, std::move(m));
  }
  if (kind == "scale") {
    need(2);
    F c = convert<F>(number(parts[0], id));
    DenseMatrix<F> m = DenseMatrix<F>::identity(dimension(parts[1], id));
    m *= c;
    return FiniteOperator<F>(id, std::move(m));
  }
  if (kind == "jordan") {
    need(2);
    F lambda = convert<F>(number(parts[0], id));
    index_t d = dimension(parts[1], id);
    DenseMatrix<F> m(d, d);
    for (index_t i = 0; i < d; ++i) {
      m(i, i) = lambda;
      if (i + 1 < d) m(i, i + 1) = traits::one();
    }
    return FiniteOperator<F>(id, std::move(m));
  }
  if (kind == "random") {
    need(2);
    return FiniteOperator<F>(id, random_operator<F>(dimension(parts[0], id),
                                                    unsigned_int(parts[1], id)));
  }
  if (kind == "file") {
    return FiniteOperator<F>(id, read_csv<F>(std::string(rest)));
  }
  throw SpecError("unknown operator kind '" + std::string(kind) +
                  "'; known: rot, diag, neg-id, scale, jordan, random, file");
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"id", "cesaro", "Mp:<p>", "Mexp", "Mf:be", "delta", "delta-inv", "counterexample"};
}

template <Field F>
TriangularMatrix<F> parse_matrix(std::string_view spec) {
  if (spec.empty()) throw SpecError("empty matrix spec");
  auto terms = split(spec, '*');
  std::optional<TriangularMatrix<F>> acc;
  for (auto term : terms) {
    if (term.empty()) throw SpecError("empty factor in matrix spec '" + std::string(spec) + "'");
    auto m = matrix_term<F>(term);
    acc = acc ? multiply(*acc, m) : m;
  }
  return *acc;
}

template <Field F>
FiniteOperator<F> parse_operator(std::string_view spec) {
  try {
    return build_operator<F>(spec);
  } catch (const ArithmeticError& e) {
    throw SpecError("operator '" + std::string(spec) + "': " + e.what());
  }
}

template <Field F>
std::vector<F> parse_probe(std::string_view spec) {
  if (trim(spec).empty()) throw SpecError("empty probe vector");
  std::vector<F> x;
  for (auto cell : split(spec, ',')) x.push_back(convert<F>(number(cell, "probe vector")));
  return x;
}

template TriangularMatrix<double> parse_matrix<double>(std::string_view);
template TriangularMatrix<Rational> parse_matrix<Rational>(std::string_view);
template FiniteOperator<double> parse_operator<double>(std::string_view);
template FiniteOperator<Rational> parse_operator<Rational>(std::string_view);
template std::vector<double> parse_probe<double>(std::string_view);
template std::vector<Rational> parse_probe<Rational>(std::string_view);

}  // namespace summat
