#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "oracles.hpp"
#include "summat/operator_lab.hpp"

using namespace summat;
using Q = Rational;
using D = double;

namespace {

template <Field F>
FiniteOperator<F> op(std::string id, const std::vector<std::vector<F>>& rows,
                     NormKind kind = NormKind::sup) {
  DenseMatrix<F> m(rows.size(), rows.size());
  for (index_t i = 0; i < rows.size(); ++i)
    for (index_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return FiniteOperator<F>(std::move(id), m, kind);
}

FiniteOperator<D> rotation(double radians) {
  const double c = std::cos(radians), s = std::sin(radians);
  return op<D>("rot", {{c, -s}, {s, c}});
}

template <Field F>
FiniteOperator<F> neg_id(index_t d) {
  DenseMatrix<F> m(d, d);
  for (index_t i = 0; i < d; ++i) m(i, i) = scalar_traits<F>::from_int(-1);
  return FiniteOperator<F>("neg-id", m);
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Probability matrix with positive integer weights 1..9 drawn from a hash of (n, k, seed).
template <Field F>
TriangularMatrix<F> random_probability(std::uint64_t seed) {
  auto weight = [seed](index_t n, index_t k) {
    return static_cast<long>(mix(seed * 1000003ULL + n * 7919ULL + k) % 9) + 1;
  };
  auto row = [weight](index_t n) {
    long total = 0;
    for (index_t k = 0; k <= n; ++k) total += weight(n, k);
    std::vector<F> r;
    for (index_t k = 0; k <= n; ++k) r.push_back(scalar_traits<F>::from_ratio(weight(n, k), total));
    return r;
  };
  return TriangularMatrix<F>::from_formula(
      "random#" + std::to_string(seed), [row](index_t n, index_t k) { return row(n)[k]; },
      MatrixFlags{true, true}, IndexBase::zero_based, row);
}

}  // namespace

TEST_CASE("expected values") {
  auto negI = SequenceFamily<Q>::power(neg_id<Q>(2));
  CHECK(expected_value(make_cesaro<Q>(), negI, 2) == Q(1, 3) * DenseMatrix<Q>::identity(2));

  auto t = op<Q>("t", {{Q(1, 2), 1}, {Q(-1, 3), 2}});
  auto fam = SequenceFamily<Q>::power(t);
  DenseMatrix<Q> tk = DenseMatrix<Q>::identity(2);
  for (index_t k = 0; k < 8; ++k) {
    CHECK(expected_value(make_identity<Q>(), fam, k) == tk);
    tk = tk * t.matrix();
  }
  for (index_t n = 0; n < 40; ++n) {
    CHECK(expected_value(make_counterexample_matrix<Q>(), negI, n) == DenseMatrix<Q>::identity(2));
  }
  std::vector<Q> x{1, 2};
  CHECK(expected_value_at(make_cesaro<Q>(), negI, std::span<const Q>(x), 4) ==
        std::vector<Q>{Q(1, 5), Q(2, 5)});
  std::vector<Q> bad{1, 2, 3};
  CHECK_THROWS_AS(expected_value_at(make_cesaro<Q>(), negI, std::span<const Q>(bad), 1),
                  DimensionError);
}

TEST_CASE("trajectory points equal evaluation from scratch") {
  auto t = op<Q>("t", {{Q(1, 2), Q(1, 3)}, {0, Q(-2, 3)}});
  auto fam = SequenceFamily<Q>::power(t);
  auto a = make_power_weighted<Q>({1});
  std::vector<Q> x{3, -1};
  auto pts = orbit_points(a, fam, std::span<const Q>(x), 30);
  for (index_t n = 0; n < 30; ++n) CHECK(pts[n] == expected_value_at(a, fam, std::span<const Q>(x), n));

  auto tr = trajectory(make_cesaro<D>(), SequenceFamily<D>::power(neg_id<D>(2)), 20,
                       std::vector<D>{1, 0});
  REQUIRE(tr.points.size() == 20);
  for (index_t n = 0; n < 20; ++n) {
    double expected = n % 2 == 0 ? 1.0 / (n + 1) : 0.0;
    CHECK(tr.norms[n] == doctest::Approx(expected).epsilon(1e-15).scale(1.0));
    CHECK(tr.points[n][0] == doctest::Approx(expected).epsilon(1e-15).scale(1.0));
  }
  std::ostringstream os;
  tr.write_csv(os);
  CHECK(os.str().rfind("n,norm,diff_norm\n0,1,1\n1,0,1\n", 0) == 0);
}

TEST_CASE("norms") {
  CHECK(rotation(0.7).norm() == doctest::Approx(std::cos(0.7) + std::sin(0.7)));
  CHECK(rotation(0.7).with_norm(NormKind::euclidean).norm() == doctest::Approx(1.0).epsilon(1e-9));
  // singular values of [[a, b], [0, c]]: oracle from the 2x2 eigenvalue formula of M^T M
  const double a = 2.0, b = -1.5, c = 0.5;
  const double tr = a * a + b * b + c * c, det = a * c;
  const double smax = std::sqrt((tr + std::sqrt(tr * tr - 4 * det * det)) / 2);
  CHECK(op<D>("u", {{a, b}, {0, c}}, NormKind::euclidean).norm() == doctest::Approx(smax).epsilon(1e-9));
  CHECK(euclidean_norm(DenseMatrix<D>(3, 3)) == 0.0);
}

TEST_CASE("power cache") {
  auto t = op<D>("big", {{1e200, 0}, {0, 1}});
  auto fam = SequenceFamily<D>::power(t);
  CHECK_NOTHROW(fam.power(1));
  CHECK_THROWS_AS(fam.power(2), ArithmeticError);

  auto small = SequenceFamily<D>::power(rotation(1.0), 40);
  CHECK_NOTHROW(small.power(9));
  CHECK_THROWS_AS(small.power(10), DimensionError);

  auto shared = SequenceFamily<D>::power(rotation(0.3));
  std::vector<double> sums(4, 0.0);
  std::vector<std::thread> threads;
  for (int k = 0; k < 4; ++k) {
    threads.emplace_back([&, k] {
      double s = 0.0;
      for (index_t i = 0; i < 300; ++i) s += shared.power(i)(0, 1);
      sums[k] = s;
    });
  }
  for (auto& th : threads) th.join();
  for (int k = 1; k < 4; ++k) CHECK(sums[k] == sums[0]);
}

TEST_CASE("classify: worked instances") {
  const index_t N = 512;
  const std::vector<std::vector<D>> e0{{1, 0}};
  auto negI = SequenceFamily<D>::power(neg_id<D>(2));

  SUBCASE("Cesaro means of -I vanish") {
    auto v = classify(make_cesaro<D>(), negI, e0, N);
    CHECK(v.ergodic.status == Status::holds);
    CHECK(v.null.status == Status::holds);
    CHECK(v.P.max_abs_entry() == 0.0);
    auto tr = trajectory(make_cesaro<D>(), negI, N);
    for (index_t n = 0; n < N; ++n) {
      double alt = 0.0;
      for (index_t k = 0; k <= n; ++k) alt += k % 2 == 0 ? 1.0 : -1.0;
      CHECK(tr.norms[n] == doctest::Approx(std::fabs(alt) / (n + 1)).epsilon(1e-14).scale(1.0));
    }
  }
  SUBCASE("counterexample matrix with -I") {
    auto v = classify(make_counterexample_matrix<D>(), negI, e0, N);
    CHECK(v.ergodic.status == Status::holds);
    CHECK(max_abs_diff(v.P, DenseMatrix<D>::identity(2)) < 1e-12);
    CHECK(v.delta_A_null.status == Status::holds);
    CHECK(v.limit_T_invariant.status == Status::fails);
    CHECK(v.limit_T_invariant_probes.status == Status::fails);
    CHECK(v.probes[0].residual_sup == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(v.probes[0].residual_last == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(v.A_delta_null.status == Status::fails);
    CHECK(v.first_column.status == Status::holds);
  }
  SUBCASE("identity operator under probability matrices") {
    auto I = SequenceFamily<D>::power(op<D>("I", {{1, 0}, {0, 1}}));
    for (auto a : {make_cesaro<D>(), make_exp_weighted(), make_power_weighted<D>({2}),
                   make_counterexample_matrix<D>()}) {
      CAPTURE(a.id());
      auto v = classify(a, I, e0, N);
      CHECK(v.ergodic.status == Status::holds);
      CHECK(max_abs_diff(v.P, DenseMatrix<D>::identity(2)) < 1e-12);
      CHECK(v.limit_T_invariant.status == Status::holds);
      CHECK(v.probes[0].residual_sup == 0.0);
    }
  }
  SUBCASE("probe dimension mismatch") {
    CHECK_THROWS_AS(classify(make_cesaro<D>(), negI, {{1, 0, 0}}, N), DimensionError);
    CHECK_THROWS_AS(classify(make_cesaro<D>(), negI, {}, N), DomainError);
  }
}

TEST_CASE("null implies ergodic with zero limit") {
  const index_t N = 256;
  std::vector<FiniteOperator<D>> ops{neg_id<D>(2), rotation(2.0), op<D>("c", {{0.5, 0.2}, {0, -0.3}}),
                                     op<D>("I", {{1, 0}, {0, 1}})};
  for (const auto& t : ops) {
    auto fam = SequenceFamily<D>::power(t);
    for (auto a : {make_identity<D>(), make_cesaro<D>(), make_exp_weighted(),
                   make_power_weighted<D>({1})}) {
      auto v = classify(a, fam, {{1, 1}}, N);
      if (v.null.status == Status::holds) {
        CHECK(v.ergodic.status == Status::holds);
        CHECK(v.P.max_abs_entry() == 0.0);
      }
    }
  }
}

TEST_CASE("difference conditions: both computation paths agree") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const index_t N = 200;
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_probability<D>(trial + 1);
    double angle = 0.5 + 2.5 * (u(rng) + 1.0);
    double r = trial % 2 == 0 ? 1.0 : 0.9;
    auto t = op<D>("t", {{r * std::cos(angle), -r * std::sin(angle)}, {r * std::sin(angle), r * std::cos(angle)}});
    auto fam = SequenceFamily<D>::power(t);
    auto direct = classify(a, fam, {{1, 0}}, N);
    auto via_delta = classify(multiply(make_delta<D>(), a), fam, {{1, 0}}, N);
    CAPTURE(trial);
    CHECK(direct.delta_A_null.status == via_delta.null.status);
    CHECK(std::fabs(direct.delta_A_null.evidence.last - via_delta.null.evidence.last) < 1e-12);
  }
}

TEST_CASE("difference identity holds exactly") {
  // T (A Delta T)_n - a_n0 I = (T - I)(A T)_n
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> num(-4, 4);
  for (int trial = 0; trial < 4; ++trial) {
    auto a = random_probability<Q>(100 + trial);
    std::vector<std::vector<Q>> rows(3, std::vector<Q>(3));
    for (auto& r : rows)
      for (auto& v : r) v = scalar_traits<Q>::from_ratio(num(rng), 4);
    auto t = op<Q>("t", rows);
    auto fam = SequenceFamily<Q>::power(t);
    auto ad = multiply(a, make_delta<Q>());
    const auto I = DenseMatrix<Q>::identity(3);
    for (index_t n = 0; n <= 50; n += 5) {
      auto lhs = t.matrix() * expected_value(ad, fam, n) - a.entry(n, 0) * I;
      auto rhs = (t.matrix() - I) * expected_value(a, fam, n);
      CAPTURE(n);
      CAPTURE(trial);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("Cesaro ergodicity matches boundedness plus stability") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.35, 2 * M_PI - 0.35), radius(0.2, 0.95);
  const index_t N = 512;
  for (int trial = 0; trial < 8; ++trial) {
    double th = angle(rng);
    double r = trial % 2 == 0 ? 1.0 : radius(rng);
    auto t = op<D>("t", {{r * std::cos(th), -r * std::sin(th)}, {r * std::sin(th), r * std::cos(th)}});
    auto v = classify(make_cesaro<D>(), SequenceFamily<D>::power(t), {{1, 0}}, N);
    CAPTURE(th);
    CAPTURE(r);
    bool lhs = v.bounded.status == Status::holds && v.A_delta_null.status == Status::holds;
    CHECK(v.ergodic.status != Status::inconclusive);
    CHECK(lhs == (v.ergodic.status == Status::holds));
  }
}

TEST_CASE("iterates versus exponential means") {
  const index_t N = 512;
  for (auto t : {op<D>("c1", {{0.5, 0.3}, {0, -0.6}}), op<D>("c2", {{0.1, -0.8}, {0.8, 0.1}}),
                 op<D>("c3", {{-0.9, 0}, {0, 0.2}})}) {
    auto fam = SequenceFamily<D>::power(t);
    CAPTURE(t.id());
    CHECK(classify(make_identity<D>(), fam, {{1, 1}}, N).ergodic.status == Status::holds);
    CHECK(classify(make_exp_weighted(), fam, {{1, 1}}, N).ergodic.status == Status::holds);
  }
  auto negI = SequenceFamily<D>::power(neg_id<D>(2));
  CHECK(classify(make_identity<D>(), negI, {{1, 0}}, N).ergodic.status == Status::fails);
  auto v = classify(make_exp_weighted(), negI, {{1, 0}}, N);
  CHECK(v.ergodic.status == Status::fails);

  // (M_exp(-I))_n = sum_k e^{k+1} (-1)^k / sum_k e^{k+1}, a ratio of geometric sums.
  const double e = std::exp(1.0);
  for (index_t n = 0; n < 30; ++n) {
    double num = e * (1.0 - std::pow(-e, n + 1)) / (1.0 + e);
    double den = e * (std::pow(e, n + 1) - 1.0) / (e - 1.0);
    CHECK(expected_value(make_exp_weighted(), negI, n)(0, 0) ==
          doctest::Approx(num / den).epsilon(1e-12));
  }
  const double limit = (e - 1.0) / (e + 1.0);
  for (index_t n = 200; n < 204; ++n) {
    double x = expected_value(make_exp_weighted(), negI, n)(0, 0);
    CHECK(std::fabs(std::fabs(x) - limit) < 1e-3);
    CHECK((x > 0) == (n % 2 == 0));
  }
}

TEST_CASE("Cesaro bounded operators with growing powers are bounded for every power weight") {
  auto found = find_cesaro_bounded_growing_powers(17, 512);
  REQUIRE(found.op.has_value());
  CHECK(found.power_run.bounded.status == Status::fails);
  CHECK(found.cesaro_run.bounded.status == Status::holds);
  auto fam = SequenceFamily<D>::power(*found.op);
  for (double p : {0.0, 1.0, 2.0}) {
    CAPTURE(p);
    auto v = classify(make_power_weighted<D>({p}), fam, {{1, 0}, {0, 1}}, 512);
    CHECK(v.bounded.status == Status::holds);
    // not mean ergodic, and no power weight changes that
    CHECK(v.ergodic.status == Status::fails);
  }
}

TEST_CASE("mean ergodic operators are ergodic for every power weight") {
  const index_t N = 512;
  for (auto t : {rotation(2.0), op<D>("c", {{0.5, 0.3}, {0, -0.6}}), op<D>("I", {{1, 0}, {0, 1}}),
                 op<D>("d", {{1, 0}, {0, -0.5}})}) {
    auto fam = SequenceFamily<D>::power(t);
    CAPTURE(t.id());
    REQUIRE(classify(make_cesaro<D>(), fam, {{1, 1}}, N).ergodic.status == Status::holds);
    for (double p : {-0.5, 1.0, 2.0}) {
      CAPTURE(p);
      CHECK(classify(make_power_weighted<D>({p}), fam, {{1, 1}}, N).ergodic.status == Status::holds);
    }
  }
}

TEST_CASE("absolute boundedness") {
  const index_t N = 256;
  auto rot = rotation(2 * M_PI / 3);
  auto fam = SequenceFamily<D>::power(rot);
  double sup_power = 0.0;
  for (index_t i = 0; i < N; ++i) sup_power = std::max(sup_power, fam.power(i).sup_norm());
  auto v = absolutely_bounded_check(make_cesaro<D>(), fam, N);
  CHECK(v.status == Status::holds);
  CHECK(v.evidence.sup <= sup_power + 1e-12);

  auto signs = TriangularMatrix<D>::from_formula(
      "signs", [](index_t, index_t i) { return i % 2 == 0 ? 1.0 : -1.0; }, MatrixFlags{});
  CHECK(absolutely_bounded_check(make_cesaro<D>(), fam, N, {}, signs).status == Status::holds);

  auto twice = SequenceFamily<D>::power(op<D>("2I", {{2, 0}, {0, 2}}));
  auto g = absolutely_bounded_check(make_cesaro<D>(), twice, 64);
  CHECK(g.status == Status::fails);
  // oracle: (2^{n+1} - 1)/(n+1) at the last row
  CHECK(g.evidence.last == doctest::Approx((std::pow(2.0, 64) - 1.0) / 64.0));
}

TEST_CASE("Eberlein check") {
  const index_t N = 512;
  SUBCASE("3-cycle rotation") {
    auto r = eberlein_check(make_cesaro<D>(), rotation(2 * M_PI / 3), {1, 0}, N);
    REQUIRE(r.limit_exists);
    // oracle: the exact average of the three orbit points is 0
    CHECK(std::hypot(r.y[0], r.y[1]) < 3.0 / N);
    CHECK(r.fixed_point_residual < 4.0 / N);
    CHECK(r.hull_distance < 1e-6);
  }
  SUBCASE("identity") {
    auto r = eberlein_check(make_cesaro<D>(), op<D>("I", {{1, 0}, {0, 1}}), {0.3, -2}, N);
    REQUIRE(r.limit_exists);
    CHECK(r.y[0] == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(r.y[1] == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(r.fixed_point_residual == 0.0);
    CHECK(r.hull_distance < 1e-12);
  }
  SUBCASE("diagonal contraction") {
    auto r = eberlein_check(make_cesaro<D>(), op<D>("d", {{1, 0}, {0, 0.5}}), {1, 1}, N);
    REQUIRE(r.limit_exists);
    // oracle: (1, (2 - 2^{-N+1})/N)
    CHECK(r.y[0] == doctest::Approx(1.0));
    CHECK(r.y[1] == doctest::Approx((2.0 - std::pow(0.5, N - 1)) / N).epsilon(1e-12));
    CHECK(r.fixed_point_residual < 2.0 / N);
    CHECK(r.hull_distance < 1e-6);
  }
  SUBCASE("divergent trajectory") {
    auto r = eberlein_check(make_identity<D>(), neg_id<D>(2), {1, 0}, N);
    CHECK_FALSE(r.limit_exists);
    CHECK(r.y.empty());
  }
  SUBCASE("needs a probability matrix") {
    CHECK_THROWS_AS(eberlein_check(make_delta<D>(), neg_id<D>(2), {1, 0}, N), DomainError);
  }
}

TEST_CASE("hull projection") {
  std::vector<std::vector<double>> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto inside = hull_project(square, {0.25, 0.6});
  CHECK(inside.distance < 1e-6);
  auto outside = hull_project(square, {2, 0.5});
  CHECK(outside.distance == doctest::Approx(1.0).epsilon(1e-6));
  auto corner = hull_project(square, {-1, -1});
  CHECK(corner.distance == doctest::Approx(std::sqrt(2.0)));
  CHECK(corner.iterations == 0);
  CHECK_THROWS_AS(hull_project({}, {0, 0}), DomainError);
  CHECK_THROWS_AS(hull_project(square, {0, 0, 0}), DimensionError);
}

TEST_CASE("shift family") {
  const index_t N = 256;
  SUBCASE("power-bounded shift under Cesaro means") {
    auto v = shift_family_test(make_identity<D>(), make_cesaro<D>(), N, N, FamilyMode::bounded);
    CHECK(v.status == Status::holds);
    CHECK(v.numeric == Status::holds);
    CHECK(v.evidence.sup <= 1.0 + 1e-12);
  }
  SUBCASE("inverse Cesaro family is unbounded") {
    auto v = shift_family_test(make_cesaro<D>(), make_identity<D>(), N, N, FamilyMode::bounded);
    CHECK(v.status == Status::fails);
    CHECK(v.numeric == Status::fails);
    // oracle: row n of the Cesaro inverse is (0, ..., -n, n+1), abs sum 2n+1
    for (std::size_t i = 0; i < v.rows.size(); ++i) CHECK(v.norms[i] == 2.0 * v.rows[i] + 1.0);
    CHECK(v.witness_value == doctest::Approx(2.0 * v.witness_row + 1.0));
    CHECK(v.witness_value == doctest::Approx(v.witness_norm));
  }
  SUBCASE("harmonic difference family vanishes") {
    auto h = multiply(make_power_weighted<D>({-1}), make_delta<D>()).renamed("Mp:-1*delta");
    auto v = shift_family_test(make_cesaro<D>(), h, N, N, FamilyMode::null);
    CHECK(v.status == Status::holds);
    // oracle: (3 - 4/n)/H_n with 1-based n >= 2
    for (std::size_t i = 0; i < v.rows.size(); ++i) {
      const double n = static_cast<double>(v.rows[i] + 1);
      if (n < 2) continue;
      CHECK(v.norms[i] == doctest::Approx((3.0 - 4.0 / n) / oracle::power_sum(v.rows[i] + 1, -1)).epsilon(1e-9));
    }
    CHECK(v.witness_value == doctest::Approx(v.witness_norm).epsilon(1e-9));
  }
  SUBCASE("depth beyond the truncation") {
    CHECK_THROWS_AS(shift_family_test(make_identity<D>(), make_cesaro<D>(), 100, 200, FamilyMode::bounded),
                    DimensionError);
  }
  SUBCASE("family members act as sums of shifts") {
    auto fam = SequenceFamily<Q>::shift(make_cesaro<Q>(), 5);
    // member 2 is 3 S^2 - 2 S
    auto m = fam.member(2);
    CHECK(m(0, 2) == 3);
    CHECK(m(0, 1) == -2);
    CHECK(m(2, 4) == 3);
    CHECK(m(3, 4) == -2);
    CHECK(m(0, 0) == 0);
    std::vector<Q> x{1, 2, 3, 4, 5};
    CHECK(m.apply(x) == std::vector<Q>{5, 6, 7, -10, 0});
  }
}

TEST_CASE("coordinate family") {
  const index_t N = 256;
  SUBCASE("Cesaro means on e_0") {
    auto v = coordinate_family_test(make_identity<D>(), make_cesaro<D>(), N, N);
    CHECK(v.status == Status::holds);
    REQUIRE(v.probes.front().first == "e_0");
    CHECK(v.probes.front().second.status == Status::holds);
    auto fam = SequenceFamily<D>::coordinate(make_identity<D>(), 64);
    std::vector<D> e0(64, 0.0);
    e0[0] = 1.0;
    for (index_t n = 0; n < 64; ++n) {
      auto y = expected_value_at(make_cesaro<D>(), fam, std::span<const D>(e0), n);
      CHECK(sup_norm(std::span<const D>(y)) == doctest::Approx(1.0 / (n + 1)));
    }
  }
  SUBCASE("A = B gives the coordinate projections") {
    auto a = make_power_weighted<D>({2});
    auto v = coordinate_family_test(a, a, N, N);
    CHECK(v.status == Status::holds);
    auto fam = SequenceFamily<D>::coordinate(make_exp_weighted(), 32);
    std::vector<D> x(32);
    for (index_t k = 0; k < 32; ++k) x[k] = 1.0 / (k + 1);
    for (index_t n = 0; n < 32; ++n) {
      auto y = expected_value_at(make_exp_weighted(), fam, std::span<const D>(x), n);
      CHECK(sup_norm(std::span<const D>(y)) == doctest::Approx(1.0 / (n + 1)).epsilon(1e-9));
    }
  }
  SUBCASE("inverse Cesaro family is not null") {
    auto v = coordinate_family_test(make_cesaro<D>(), make_identity<D>(), N, N);
    CHECK(v.status == Status::fails);
    // true norm is the largest coefficient n+1; the row abs sum 2n+1 is reported alongside
    for (std::size_t i = 0; i < v.rows.size(); ++i) {
      CHECK(v.norms[i] == v.rows[i] + 1.0);
      CHECK(v.row_abs_sums[i] == 2.0 * v.rows[i] + 1.0);
    }
  }
}

TEST_CASE("limit invariance transfer") {
  const index_t N = 512;
  SUBCASE("-I from Cesaro to M_2") {
    auto p = limit_invariant_transfer_probe(make_cesaro<D>(), make_power_weighted<D>({2}), neg_id<D>(2),
                                            {1, 0}, N);
    CHECK(p.applicable);
    CHECK(p.status == Status::holds);
    CHECK(p.bound_holds);
    // oracle: for -I the residual is 2 |sum_k a_nk (-1)^k|
    auto a = make_power_weighted<D>({2});
    for (index_t n = 0; n < N; n += 37) {
      double alt = 0.0;
      for (index_t k = 0; k <= n; ++k) alt += (k % 2 == 0 ? 1.0 : -1.0) * a.entry(n, k);
      CHECK(p.b_values[n] == doctest::Approx(2.0 * std::fabs(alt)).epsilon(1e-9).scale(1.0));
    }
  }
  SUBCASE("counterexample with itself is not applicable") {
    auto c = make_counterexample_matrix<D>();
    auto p = limit_invariant_transfer_probe(c, c, neg_id<D>(2), {1, 0}, N);
    CHECK_FALSE(p.applicable);
    CHECK(p.status == Status::inconclusive);
    CHECK(p.a_residual.status == Status::fails);
  }
  SUBCASE("identity operator") {
    auto p = limit_invariant_transfer_probe(make_cesaro<D>(), make_exp_weighted(),
                                            op<D>("I", {{1, 0}, {0, 1}}), {1, 2}, N);
    for (double r : p.a_values) CHECK(r == 0.0);
    for (double r : p.b_values) CHECK(r == 0.0);
  }
}

TEST_CASE("verdict documents") {
  auto v = classify(make_cesaro<D>(), SequenceFamily<D>::power(neg_id<D>(2)), {{1, 0}}, 64);
  auto j = to_json(v);
  CHECK(j["ergodic"]["status"] == "holds");
  CHECK(j["P"].size() == 2);
  CHECK(j["probes"][0]["probe"] == std::vector<double>{1, 0});
}

TEST_CASE("a failing probe decides the operator-level verdict") {
  // (T - I)(M_0 T)_n = (T^{n+1} - I)/(n+1) has norm 1 + O(1/n) for the Jordan block at -1.
  auto t = op<D>("jordan", {{-1, 1}, {0, -1}});
  auto v = classify(make_cesaro<D>(), SequenceFamily<D>::power(t), {{1.0, 1.0}}, 512);
  CHECK(v.probes.front().limit_T_invariant.status == Status::fails);
  CHECK(v.limit_T_invariant.status == Status::fails);
  CHECK(v.bounded.status == Status::holds);
}

TEST_CASE("coordinate family witness lies in c0") {
  auto v = coordinate_family_test(make_exp_weighted(), make_identity<D>(), 512, 512);
  CHECK(v.witness_row < 512 / 8);
  CHECK(v.numeric == Status::holds);
  auto w = coordinate_family_test(make_cesaro<D>(), make_power_weighted<D>({2.0}), 512, 512);
  CHECK(w.numeric == Status::holds);
}
