#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "summat/catalog.hpp"
#include "summat/evidence.hpp"
#include "summat/triangular.hpp"

namespace summat {

enum class Property { star_C, star_2C, star_3C };

std::string to_string(Property p);
std::optional<Property> parse_property(std::string_view s);

enum class Provenance { closed_form, blockwise };

std::string to_string(Provenance p);

template <Field F>
struct TransferMatrix {
  TriangularMatrix<F> C;
  std::string a_id;
  std::string b_id;
  Provenance provenance = Provenance::blockwise;
  /// Which construction produced C.
  std::string route;
};

/// Verdict for one of the three transfer conditions.
struct PropertyVerdict {
  Property property = Property::star_C;
  std::string a_id;
  std::string b_id;
  Status status = Status::inconclusive;
  /// Set when the pair belongs to a family with a known answer.
  std::optional<Status> analytic;
  std::string rationale;
  /// Numeric verdict from the probe rule; never overrides a known answer.
  Status numeric = Status::inconclusive;
  Evidence rows;
  /// (*2C) only: one vanishing verdict per probed column.
  std::vector<std::pair<index_t, Evidence>> columns;
  index_t probe_depth = 0;
  double tol = 0.0;
  std::string provenance;

  /// Analytic and numeric answers are both conclusive and disagree.
  bool conflict() const {
    return analytic && numeric != Status::inconclusive && *analytic != numeric;
  }
};

nlohmann::json to_json(const PropertyVerdict& v);

// ---------------------------------------------------------------------------
// Catalog identification
// ---------------------------------------------------------------------------

/// p for "Mp:<p>" and 0 for "cesaro".
std::optional<double> power_exponent_of(const std::string& id);

/// Known answer for (*C)/(*2C)/(*3C) of (A, B) identified by catalog ids.
struct AnalyticVerdict {
  Status status;
  std::string rationale;
};
std::optional<AnalyticVerdict> analytic_pair_verdict(const std::string& a_id,
                                                     const std::string& b_id, Property prop);

/// Known answer for lim_n b_{n0} = 0 for a catalog matrix.
std::optional<AnalyticVerdict> analytic_first_column_vanishes(const std::string& id);

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// Transfer for (M_p, M_q): with 1-based i < n,
/// c_{ni} = S(i,p)/S(n,q) (i^{q-p} - (i+1)^{q-p}) and c_{nn} = n^{q-p} S(n,p)/S(n,q).
template <Field F>
TriangularMatrix<F> power_pair_transfer(double p, double q) {
  auto sp = std::make_shared<const PowerPartialSums<F>>(PowerWeightSpec{p});
  auto sq = std::make_shared<const PowerPartialSums<F>>(PowerWeightSpec{q});
  auto ratio = [sp, sq](index_t i) { return F(sq->weight(i) / sp->weight(i)); };  // i^{q-p}
  auto entry = [sp, sq, ratio](index_t n, index_t k) -> F {
    const index_t N1 = n + 1, i = k + 1;
    if (i == N1) return F(ratio(N1) * sp->sum(N1) / sq->sum(N1));
    return F(sp->sum(i) / sq->sum(N1) * (ratio(i) - ratio(i + 1)));
  };
  auto row = [entry](index_t n) {
    std::vector<F> r(n + 1);
    for (index_t k = 0; k <= n; ++k) r[k] = entry(n, k);
    return r;
  };
  return TriangularMatrix<F>::from_formula(
      "T(" + power_weighted_id(p) + "," + power_weighted_id(q) + ")", entry, MatrixFlags{},
      IndexBase::one_based_shifted, row);
}

/// Transfer for (M_0, M_{-1} Delta): with 1-based rows and H = S(n,-1),
/// c_{nn} = 1/H, c_{n,n-1} = (2-n)/(n H), c_{ni} = 2/((i+1)(i+2) H) for i < n-1.
template <Field F>
TriangularMatrix<F> harmonic_difference_transfer() {
  using traits = scalar_traits<F>;
  auto h = std::make_shared<const PowerPartialSums<F>>(PowerWeightSpec{-1.0});
  auto entry = [h](index_t n, index_t k) -> F {
    const long N1 = static_cast<long>(n + 1), i = static_cast<long>(k + 1);
    const F H = h->sum(n + 1);
    if (i == N1) return F(traits::one() / H);
    if (i == N1 - 1) return F(traits::from_ratio(2 - N1, N1) / H);
    return F(traits::from_ratio(2, (i + 1) * (i + 2)) / H);
  };
  auto row = [entry](index_t n) {
    std::vector<F> r(n + 1);
    for (index_t k = 0; k <= n; ++k) r[k] = entry(n, k);
    return r;
  };
  return TriangularMatrix<F>::from_formula("T(cesaro,Mp:-1*delta)", entry, MatrixFlags{},
                                           IndexBase::one_based_shifted, row);
}

/// Row sum of the (M_p, M_q) transfer at 1-based row n: 1 if q <= p, else
/// 2 n^{q-p} S(n,p)/S(n,q) - 1. For p < q this is also the absolute row sum.
template <Field F>
F closed_form_rowsum(double p, double q, index_t n) {
  using traits = scalar_traits<F>;
  if (n == 0) throw DomainError("rows are 1-based here, n >= 1");
  if (q <= p) return traits::one();
  PowerPartialSums<F> sp(PowerWeightSpec{p});
  PowerPartialSums<F> sq(PowerWeightSpec{q});
  F ratio = sq.weight(n) / sp.weight(n);
  return F(traits::from_int(2) * ratio * sp.sum(n) / sq.sum(n) - traits::one());
}

// ---------------------------------------------------------------------------
// Transfer
// ---------------------------------------------------------------------------

/// C = B A^{-1}, preferring closed forms.
template <Field F>
TransferMatrix<F> transfer(const TriangularMatrix<F>& a, const TriangularMatrix<F>& b) {
  TransferMatrix<F> t{b, a.id(), b.id(), Provenance::closed_form, ""};
  const std::string tid = "T(" + a.id() + "," + b.id() + ")";
  if (a.id() == "id") {
    t.C = b.renamed(tid);
    t.route = "A = id, C = B";
    return t;
  }
  // Equal ids name the same matrix, which need not be invertible.
  if (a.id() == b.id()) {
    t.C = make_identity<F>().renamed(tid);
    t.route = "A = B, C = I";
    return t;
  }
  auto pa = power_exponent_of(a.id());
  auto pb = power_exponent_of(b.id());
  if (b.id() == "id" && a.closed_inverse()) {
    t.C = a.closed_inverse()->renamed(tid);
    t.route = "B = id, closed-form inverse of A";
    return t;
  }
  if (pa && pb) {
    bool representable = true;
    if constexpr (scalar_traits<F>::exact) {
      representable = PowerWeightSpec{*pa}.integer_exponent() &&
                      PowerWeightSpec{*pb}.integer_exponent();
    }
    if (representable) {
      t.C = power_pair_transfer<F>(*pa, *pb).renamed(tid);
      t.route = "power-weighted pair formula";
      return t;
    }
  }
  if (pa && *pa == 0.0 && b.id() == "Mp:-1*delta") {
    t.C = harmonic_difference_transfer<F>().renamed(tid);
    t.route = "harmonic difference formula";
    return t;
  }
  t.provenance = Provenance::blockwise;
  if (auto inv = a.closed_inverse()) {
    t.C = multiply(b, *inv).renamed(tid);
    t.route = "B times closed-form inverse of A";
  } else {
    t.C = right_divide(b, a).renamed(tid);
    t.route = "row-wise substitution";
  }
  return t;
}

// ---------------------------------------------------------------------------
// Property checks
// ---------------------------------------------------------------------------

template <Field F>
double row_abs_sum_double(const TriangularMatrix<F>& c, index_t n) {
  return to_double(row_abs_sum(c, n));
}

template <Field F>
Series row_abs_sum_series(const TriangularMatrix<F>& c, const std::vector<index_t>& rows) {
  return Series::sample(rows, [&](index_t n) { return row_abs_sum_double(c, n); });
}

inline index_t star2c_column_count(index_t N) {
  return static_cast<index_t>(std::ceil(std::log2(static_cast<double>(N)))) + 1;
}

namespace detail {

template <Field F>
PropertyVerdict numeric_verdict(const TriangularMatrix<F>& c, Property prop, index_t N,
                                const EvidenceConfig& cfg) {
  if (N < 16) throw DimensionError("probe depth must be at least 16");
  PropertyVerdict v;
  v.property = prop;
  v.probe_depth = N;
  v.tol = cfg.tol;
  auto grid = probe_grid(N, cfg.grid_ratio);
  Series sums = row_abs_sum_series(c, grid);
  if (prop == Property::star_3C) {
    v.rows = assess_vanishing(sums, N, cfg);
    v.numeric = v.rows.status;
    return v;
  }
  v.rows = assess_bounded(sums, N, cfg);
  v.numeric = v.rows.status;
  if (prop == Property::star_2C) {
    std::vector<Status> parts{v.rows.status};
    const index_t cols = star2c_column_count(N);
    for (index_t k = 0; k < cols && k < N; ++k) {
      Series col;
      for (index_t r : grid) {
        if (r < k) continue;
        col.rows.push_back(r);
        col.values.push_back(to_double(scalar_traits<F>::abs(c.entry(r, k))));
      }
      Evidence e = assess_vanishing(col, N, cfg);
      parts.push_back(e.status);
      v.columns.emplace_back(k, std::move(e));
    }
    v.numeric = conjunction(parts);
  }
  return v;
}

}  // namespace detail

/// Numeric-only checks on an explicit C (no family knowledge).
template <Field F>
PropertyVerdict check_star_C(const TriangularMatrix<F>& c, index_t N, const EvidenceConfig& cfg) {
  auto v = detail::numeric_verdict(c, Property::star_C, N, cfg);
  v.status = v.numeric;
  return v;
}
template <Field F>
PropertyVerdict check_star_2C(const TriangularMatrix<F>& c, index_t N, const EvidenceConfig& cfg) {
  auto v = detail::numeric_verdict(c, Property::star_2C, N, cfg);
  v.status = v.numeric;
  return v;
}
template <Field F>
PropertyVerdict check_star_3C(const TriangularMatrix<F>& c, index_t N, const EvidenceConfig& cfg) {
  auto v = detail::numeric_verdict(c, Property::star_3C, N, cfg);
  v.status = v.numeric;
  return v;
}

/// Verdict for (A, B): the known answer when the pair is recognized, otherwise
/// the numeric rule. Numeric evidence is always attached.
template <Field F>
PropertyVerdict check_pair(const TransferMatrix<F>& t, Property prop, index_t N,
                           const EvidenceConfig& cfg) {
  auto v = detail::numeric_verdict(t.C, prop, N, cfg);
  v.a_id = t.a_id;
  v.b_id = t.b_id;
  v.provenance = to_string(t.provenance) + ": " + t.route;
  if (auto known = analytic_pair_verdict(t.a_id, t.b_id, prop)) {
    v.analytic = known->status;
    v.rationale = known->rationale;
    v.status = known->status;
  } else {
    v.status = v.numeric;
  }
  return v;
}

template <Field F>
std::array<PropertyVerdict, 3> check_all(const TransferMatrix<F>& t, index_t N,
                                         const EvidenceConfig& cfg) {
  return {check_pair(t, Property::star_C, N, cfg), check_pair(t, Property::star_2C, N, cfg),
          check_pair(t, Property::star_3C, N, cfg)};
}

// ---------------------------------------------------------------------------
// (M_p, M_q) classification
// ---------------------------------------------------------------------------

struct PowerPairClassification {
  double p = 0, q = 0;
  Status star_C = Status::inconclusive;
  Status star_2C = Status::inconclusive;
  std::string rationale;
  PropertyVerdict numeric_C;
  PropertyVerdict numeric_2C;
  bool consistent() const {
    return !numeric_C.conflict() && !numeric_2C.conflict();
  }
};

PowerPairClassification classify_pair_mp_mq(double p, double q, index_t N = 256,
                                             const EvidenceConfig& cfg = {});

// ---------------------------------------------------------------------------
// Operator view, witnesses, composition
// ---------------------------------------------------------------------------

struct OperatorView {
  /// max_{n<N} sum_k |c_nk|: the sup-norm of the N x N truncation.
  double linf_norm_estimate = 0.0;
  index_t norm_row = 0;
  /// Column decay evidence (maps c0 into c0).
  PropertyVerdict c0_evidence;
  /// a_n = row abs sum of row n, n < N, and its decay verdict (compactness).
  std::vector<double> compact_majorant;
  Evidence majorant_decay;
};

template <Field F>
OperatorView operator_view(const TriangularMatrix<F>& c, index_t N, const EvidenceConfig& cfg) {
  OperatorView v;
  std::vector<index_t> all(N);
  for (index_t n = 0; n < N; ++n) all[n] = n;
  for (index_t n = 0; n < N; ++n) {
    double s = row_abs_sum_double(c, n);
    v.compact_majorant.push_back(s);
    if (s > v.linf_norm_estimate) {
      v.linf_norm_estimate = s;
      v.norm_row = n;
    }
  }
  v.majorant_decay = assess_vanishing(Series{all, v.compact_majorant}, N, cfg);
  v.c0_evidence = check_star_2C(c, N, cfg);
  return v;
}

template <Field F>
struct WitnessSequence {
  index_t n = 0;
  std::vector<F> values;
};

/// z_i = sign(c_{ni}) for i <= n and 0 beyond, length N.
template <Field F>
WitnessSequence<F> witness_sequence(const TriangularMatrix<F>& c, index_t n, index_t N) {
  using traits = scalar_traits<F>;
  if (n >= N) throw DimensionError("witness row must be below the truncation size");
  WitnessSequence<F> w{n, std::vector<F>(N, traits::zero())};
  auto r = c.row(n);
  for (index_t i = 0; i <= n; ++i) {
    const F& v = (*r)[i];
    if (traits::is_zero(v)) continue;
    w.values[i] = v < traits::zero() ? traits::from_int(-1) : traits::one();
  }
  return w;
}

/// Known statuses of the three conditions for a pair in a chain.
struct PropertySet {
  std::string a_id;
  std::string b_id;
  Status star_C = Status::inconclusive;
  Status star_2C = Status::inconclusive;
  Status star_3C = Status::inconclusive;
};

/// Conditions for (A, D) implied by those of (A, B) and (B, D). Only implications
/// are derived: a condition that does not follow is reported inconclusive.
PropertySet compose_verdicts(const PropertySet& ab, const PropertySet& bd);

// ---------------------------------------------------------------------------
// (BE)-property and ergodic transfer
// ---------------------------------------------------------------------------

struct SubCheck {
  std::string description;
  Status status = Status::inconclusive;
  nlohmann::json evidence;
};

struct CompositeVerdict {
  std::string name;
  std::string a_id;
  std::string b_id;
  Status status = Status::inconclusive;
  std::vector<SubCheck> sub_checks;
};

nlohmann::json to_json(const SubCheck& s);
nlohmann::json to_json(const CompositeVerdict& v);

namespace detail {

template <Field F>
SubCheck first_column_check(const TriangularMatrix<F>& b, index_t N, const EvidenceConfig& cfg) {
  SubCheck s;
  s.description = "first column of " + b.id() + " tends to 0";
  auto grid = probe_grid(N, cfg.grid_ratio);
  Evidence e = assess_vanishing(
      Series::sample(grid, [&](index_t n) { return std::fabs(to_double(b.entry(n, 0))); }), N,
      cfg);
  s.evidence = {{"numeric", to_json(e)}};
  if (auto known = analytic_first_column_vanishes(b.id())) {
    s.status = known->status;
    s.evidence["analytic"] = to_string(known->status);
    s.evidence["rationale"] = known->rationale;
  } else {
    s.status = e.status;
  }
  return s;
}

inline SubCheck property_sub_check(const PropertyVerdict& v) {
  SubCheck s;
  s.description = "(" + v.a_id + ", " + v.b_id + ") satisfies " + to_string(v.property);
  s.status = v.status;
  s.evidence = to_json(v);
  return s;
}

inline Status combine(const std::vector<SubCheck>& subs) {
  std::vector<Status> st;
  for (const auto& s : subs) st.push_back(s.status);
  return conjunction(st);
}

}  // namespace detail

/// lim b_{n0} = 0, (A,B) satisfies (*C), and (A, B Delta) satisfies (*3C).
template <Field F>
CompositeVerdict be_property_check(const TriangularMatrix<F>& a, const TriangularMatrix<F>& b,
                                   index_t N, const EvidenceConfig& cfg) {
  CompositeVerdict v{"be-property", a.id(), b.id(), Status::inconclusive, {}};
  v.sub_checks.push_back(detail::first_column_check(b, N, cfg));
  v.sub_checks.push_back(detail::property_sub_check(check_pair(transfer(a, b), Property::star_C, N, cfg)));
  auto b_delta = multiply(b, make_delta_with_inverse<F>());
  v.sub_checks.push_back(
      detail::property_sub_check(check_pair(transfer(a, b_delta), Property::star_3C, N, cfg)));
  v.status = detail::combine(v.sub_checks);
  return v;
}

/// lim b_{n0} = 0, (A,B) satisfies (*C), and (Delta A, B Delta) satisfies (*2C).
template <Field F>
CompositeVerdict ergodic_transfer_check(const TriangularMatrix<F>& a,
                                        const TriangularMatrix<F>& b, index_t N,
                                        const EvidenceConfig& cfg) {
  CompositeVerdict v{"ergodic-transfer", a.id(), b.id(), Status::inconclusive, {}};
  v.sub_checks.push_back(detail::first_column_check(b, N, cfg));
  v.sub_checks.push_back(detail::property_sub_check(check_pair(transfer(a, b), Property::star_C, N, cfg)));
  auto delta = make_delta_with_inverse<F>();
  auto delta_a = multiply(delta, a);
  auto b_delta = multiply(b, delta);
  v.sub_checks.push_back(detail::property_sub_check(
      check_pair(transfer(delta_a, b_delta), Property::star_2C, N, cfg)));
  v.status = detail::combine(v.sub_checks);
  return v;
}

}  // namespace summat
