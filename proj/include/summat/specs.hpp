#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "summat/operator_lab.hpp"
#include "summat/triangular.hpp"

namespace summat {

/// Malformed or unknown matrix, operator or probe string.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Catalog names accepted as matrix terms; "Mp:<p>" stands for the power family.
std::vector<std::string> catalog_names();

/// Matrix grammar: terms id, cesaro, Mp:<p>, Mexp, Mf:be, delta, delta-inv,
/// counterexample, joined by '*' for products (applied left to right).
///
/// The exact backend rejects Mexp, Mf:be and non-integer p with BackendError.
template <Field F>
TriangularMatrix<F> parse_matrix(std::string_view spec);

/// Operator grammar: rot:<deg>, diag:<a>,<b>,..., neg-id:<d>, scale:<c>:<d>,
/// jordan:<l>:<d>, random:<d>:<seed>, file:<path> (CSV, one row per line).
///
/// Exact rotations exist only for multiples of 90 degrees; random operators have
/// integer numerators in [-8, 8] scaled to sup norm 1.
template <Field F>
FiniteOperator<F> parse_operator(std::string_view spec);

/// Comma-separated probe vector such as "1,0".
template <Field F>
std::vector<F> parse_probe(std::string_view spec);

extern template TriangularMatrix<double> parse_matrix<double>(std::string_view);
extern template TriangularMatrix<Rational> parse_matrix<Rational>(std::string_view);
extern template FiniteOperator<double> parse_operator<double>(std::string_view);
extern template FiniteOperator<Rational> parse_operator<Rational>(std::string_view);
extern template std::vector<double> parse_probe<double>(std::string_view);
extern template std::vector<Rational> parse_probe<Rational>(std::string_view);

}  // namespace summat
