#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "summat/catalog.hpp"
#include "summat/dense.hpp"
#include "summat/evidence.hpp"
#include "summat/hull.hpp"
#include "summat/memo.hpp"
#include "summat/pair_analysis.hpp"
#include "summat/triangular.hpp"

namespace summat {

enum class NormKind { sup, euclidean };

std::string to_string(NormKind k);

/// Largest singular value by power iteration on M^T M.
double euclidean_norm(const DenseMatrix<double>& m, double tol = 1e-10, int max_iter = 10000);

template <Field F>
DenseMatrix<double> to_double_matrix(const DenseMatrix<F>& m) {
  DenseMatrix<double> out(m.rows(), m.cols());
  for (index_t i = 0; i < m.rows(); ++i)
    for (index_t j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

template <Field F>
std::vector<double> to_double_vector(std::span<const F> x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& v : x) out.push_back(to_double(v));
  return out;
}

template <Field F>
double operator_norm(const DenseMatrix<F>& m, NormKind kind) {
  if (kind == NormKind::sup) return m.sup_norm();
  return euclidean_norm(to_double_matrix(m));
}

template <Field F>
double vector_norm(std::span<const F> x, NormKind kind) {
  if (kind == NormKind::sup) return sup_norm(x);
  double s = 0.0;
  for (const auto& v : x) {
    double d = to_double(v);
    s += d * d;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Operators and families
// ---------------------------------------------------------------------------

/// Square matrix acting on R^d with a chosen operator norm.
template <Field F>
class FiniteOperator {
 public:
  FiniteOperator(std::string id, DenseMatrix<F> m, NormKind kind = NormKind::sup)
      : id_(std::move(id)), m_(std::move(m)), kind_(kind) {
    if (!m_.square() || m_.rows() == 0) throw DimensionError("operator matrix must be square");
    m_.check_finite("operator matrix");
  }

  const std::string& id() const noexcept { return id_; }
  index_t dim() const noexcept { return m_.rows(); }
  const DenseMatrix<F>& matrix() const noexcept { return m_; }
  NormKind norm_kind() const noexcept { return kind_; }
  double norm() const { return operator_norm(m_, kind_); }

  FiniteOperator with_norm(NormKind kind) const { return FiniteOperator(id_, m_, kind); }

 private:
  std::string id_;
  DenseMatrix<F> m_;
  NormKind kind_;
};

/// T^0, T^1, ... memoized; safe for concurrent readers.
template <Field F>
class PowerCache {
 public:
  /// Default budget: 2^26 stored scalars.
  static constexpr index_t kDefaultBudget = index_t{1} << 26;

  explicit PowerCache(DenseMatrix<F> t, index_t budget = kDefaultBudget)
      : dim_(t.rows()), budget_(budget) {
    auto base = std::make_shared<const DenseMatrix<F>>(std::move(t));
    table_ = std::make_shared<MemoTable<DenseMatrix<F>>>(
        [base](index_t, const DenseMatrix<F>* prev) {
          if (prev == nullptr) return DenseMatrix<F>::identity(base->rows());
          DenseMatrix<F> next = *prev * *base;
          next.check_finite("operator power");
          return next;
        });
  }

  const DenseMatrix<F>& power(index_t i) const {
    if ((i + 1) * dim_ * dim_ > budget_) {
      throw DimensionError("power cache would exceed its memory budget of " +
                           std::to_string(budget_) + " scalars");
    }
    return (*table_)[i];
  }

 private:
  index_t dim_;
  index_t budget_;
  std::shared_ptr<MemoTable<DenseMatrix<F>>> table_;
};

enum class FamilyKind { power, shift, coordinate };

std::string to_string(FamilyKind k);

/// Sequence of operators T_0, T_1, ... on a finite-dimensional space.
///
/// power: T_i = T^i. shift: T_i = sum_k (A^{-1})_{ik} S^k with S the backward
/// shift on a d-truncation of l-infinity (last coordinate fed 0, so S is
/// nilpotent). coordinate: T_i = sum_k (A^{-1})_{ik} E_k with E_k x = x_k e_k.
template <Field F>
class SequenceFamily {
 public:
  using traits = scalar_traits<F>;

  static SequenceFamily power(FiniteOperator<F> t,
                              index_t budget = PowerCache<F>::kDefaultBudget) {
    SequenceFamily f(FamilyKind::power, t.dim(), t.id(), t.norm_kind());
    f.powers_ = std::make_shared<PowerCache<F>>(t.matrix(), budget);
    f.op_ = std::make_shared<FiniteOperator<F>>(std::move(t));
    return f;
  }

  static SequenceFamily shift(const TriangularMatrix<F>& a, index_t n_dim) {
    return from_matrix(FamilyKind::shift, a, n_dim);
  }

  static SequenceFamily coordinate(const TriangularMatrix<F>& a, index_t n_dim) {
    return from_matrix(FamilyKind::coordinate, a, n_dim);
  }

  FamilyKind kind() const noexcept { return kind_; }
  index_t dim() const noexcept { return dim_; }
  const std::string& id() const noexcept { return id_; }
  NormKind norm_kind() const noexcept { return norm_; }

  /// The generating operator of a power family.
  const FiniteOperator<F>& generator() const {
    if (!op_) throw DomainError("only power families have a generating operator");
    return *op_;
  }

  const DenseMatrix<F>& power(index_t i) const {
    if (!powers_) throw DomainError("only power families have operator powers");
    return powers_->power(i);
  }

  /// sum_{i < c.size()} c_i T_i
  DenseMatrix<F> combine(std::span<const F> c) const {
    if (kind_ == FamilyKind::power) {
      DenseMatrix<F> out(dim_, dim_);
      for (index_t i = 0; i < c.size(); ++i) out.add_scaled(c[i], powers_->power(i));
      out.check_finite("expected value");
      return out;
    }
    std::vector<F> e = coefficients(c);
    DenseMatrix<F> out(dim_, dim_);
    for (index_t k = 0; k < e.size() && k < dim_; ++k) {
      if (traits::is_zero(e[k])) continue;
      if (kind_ == FamilyKind::coordinate) {
        out(k, k) = e[k];
      } else {
        for (index_t m = 0; m + k < dim_; ++m) out(m, m + k) = e[k];
      }
    }
    out.check_finite("expected value");
    return out;
  }

  DenseMatrix<F> member(index_t i) const {
    std::vector<F> c(i + 1, traits::zero());
    c[i] = traits::one();
    return combine(c);
  }

  /// Coefficients e = c A^{-1} of the combination in the basis S^k or E_k.
  std::vector<F> coefficients(std::span<const F> c) const {
    if (!inverse_) throw DomainError("power families have no coefficient transform");
    std::vector<F> e(c.size(), traits::zero());
    for (index_t i = 0; i < c.size(); ++i) {
      if (traits::is_zero(c[i])) continue;
      auto r = inverse_->row(i);
      for (index_t k = 0; k <= i; ++k) e[k] += c[i] * (*r)[k];
    }
    for (auto& v : e) traits::checked(v, "family coefficients");
    return e;
  }

 private:
  SequenceFamily(FamilyKind kind, index_t dim, std::string id, NormKind norm)
      : kind_(kind), dim_(dim), id_(std::move(id)), norm_(norm) {}

  static SequenceFamily from_matrix(FamilyKind kind, const TriangularMatrix<F>& a, index_t n_dim) {
    if (n_dim == 0) throw DimensionError("family truncation must be positive");
    std::string id = (kind == FamilyKind::shift ? "inv(" + a.id() + ")S" : "inv(" + a.id() + ")E") +
                     "[" + std::to_string(n_dim) + "]";
    SequenceFamily f(kind, n_dim, std::move(id), NormKind::sup);
    auto inv = a.closed_inverse();
    f.inverse_ = std::make_shared<TriangularMatrix<F>>(inv ? *inv : blockwise_inverse(a));
    return f;
  }

  FamilyKind kind_;
  index_t dim_;
  std::string id_;
  NormKind norm_;
  std::shared_ptr<const FiniteOperator<F>> op_;
  std::shared_ptr<const PowerCache<F>> powers_;
  std::shared_ptr<const TriangularMatrix<F>> inverse_;
};

template <Field F>
std::vector<F> row_vector(const TriangularMatrix<F>& a, index_t n) {
  auto r = a.row(n);
  return std::vector<F>(r->begin(), r->end());
}

/// (A T)_n = sum_{i<=n} a_ni T_i
template <Field F>
DenseMatrix<F> expected_value(const TriangularMatrix<F>& a, const SequenceFamily<F>& fam,
                              index_t n) {
  auto r = a.row(n);
  return fam.combine(std::span<const F>(r->data(), r->size()));
}

template <Field F>
Vector<F> expected_value_at(const TriangularMatrix<F>& a, const SequenceFamily<F>& fam,
                            std::span<const F> x, index_t n) {
  if (x.size() != fam.dim()) throw DimensionError("probe dimension does not match the family");
  return expected_value(a, fam, n).apply(x);
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct Trajectory {
  std::string matrix_id;
  std::string operator_id;
  /// ||(AT)_n||, n < N
  std::vector<double> norms;
  /// ||(AT)_n - (AT)_{n-1}||, with diffs[0] = norms[0]
  std::vector<double> diffs;
  /// (AT)_n x for the probe, when one was given.
  std::vector<std::vector<double>> points;

  /// "n,norm,diff_norm" rows.
  void write_csv(std::ostream& os) const;
};

/// Points are accumulated from the orbit x, Tx, T^2 x, ... (power families).
template <Field F>
std::vector<Vector<F>> orbit_points(const TriangularMatrix<F>& a, const SequenceFamily<F>& fam,
                                    std::span<const F> x, index_t N) {
  using traits = scalar_traits<F>;
  if (x.size() != fam.dim()) throw DimensionError("probe dimension does not match the family");
  const auto& t = fam.generator().matrix();
  std::vector<Vector<F>> orbit;
  orbit.emplace_back(x.begin(), x.end());
  std::vector<Vector<F>> points;
  for (index_t n = 0; n < N; ++n) {
    if (orbit.size() <= n) orbit.push_back(t.apply(orbit.back()));
    auto r = a.row(n);
    Vector<F> y(fam.dim(), traits::zero());
    for (index_t i = 0; i <= n; ++i) {
      if (traits::is_zero((*r)[i])) continue;
      for (index_t j = 0; j < y.size(); ++j) y[j] += (*r)[i] * orbit[i][j];
    }
    points.push_back(std::move(y));
  }
  return points;
}

template <Field F>
Trajectory trajectory(const TriangularMatrix<F>& a, const SequenceFamily<F>& fam, index_t N,
                      std::optional<std::vector<std::type_identity_t<F>>> probe = std::nullopt) {
  Trajectory tr{a.id(), fam.id(), {}, {}, {}};
  DenseMatrix<F> prev;
  for (index_t n = 0; n < N; ++n) {
    DenseMatrix<F> cur = expected_value(a, fam, n);
    tr.norms.push_back(operator_norm(cur, fam.norm_kind()));
    tr.diffs.push_back(n == 0 ? tr.norms.back() : operator_norm(cur - prev, fam.norm_kind()));
    prev = std::move(cur);
  }
  if (probe) {
    if (fam.kind() == FamilyKind::power) {
      for (auto& p : orbit_points(a, fam, std::span<const F>(*probe), N)) {
        tr.points.push_back(to_double_vector<F>(p));
      }
    } else {
      for (index_t n = 0; n < N; ++n) {
        tr.points.push_back(to_double_vector<F>(expected_value_at(a, fam, std::span<const F>(*probe), n)));
      }
    }
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

struct LabVerdict {
  Status status = Status::inconclusive;
  Evidence evidence;
  std::string note;
};

nlohmann::json to_json(const LabVerdict& v);

struct ProbeResult {
  std::vector<double> probe;
  /// Cauchy tail of (AT)_n x.
  LabVerdict convergence;
  /// (AT)_n x -> 0
  LabVerdict null;
  /// (T - I)(AT)_n x -> 0 and (AT)_n (T - I) x -> 0
  LabVerdict limit_T_invariant;
  /// max_n ||(T - I)(AT)_n x|| over the horizon and its last value.
  double residual_sup = 0.0;
  double residual_last = 0.0;
  /// (AT)_{N-1} x
  std::vector<double> limit;
};

struct ErgodicVerdict {
  std::string matrix_id;
  std::string operator_id;
  index_t depth = 0;
  double tol = 0.0;
  NormKind norm = NormKind::sup;
  LabVerdict bounded;
  /// Operator-level convergence; holds whenever null holds.
  LabVerdict ergodic;
  LabVerdict null;
  LabVerdict delta_A_null;
  LabVerdict A_delta_null;
  /// Both residuals vanish in operator norm, i.e. for every x at once.
  LabVerdict limit_T_invariant;
  /// Residuals vanish for each supplied probe separately.
  LabVerdict limit_T_invariant_probes;
  /// lim_n a_n0 = 0
  LabVerdict first_column;
  /// Estimate of lim (AT)_n: (AT)_{N-1}, or 0 when null holds.
  DenseMatrix<double> P;
  std::vector<ProbeResult> probes;
};

nlohmann::json to_json(const ErgodicVerdict& v);

namespace detail {

inline std::vector<index_t> all_rows(index_t N) {
  std::vector<index_t> r(N);
  for (index_t n = 0; n < N; ++n) r[n] = n;
  return r;
}

inline LabVerdict from_evidence(Evidence e, std::string note = {}) {
  LabVerdict v;
  v.status = e.status;
  v.evidence = std::move(e);
  v.note = std::move(note);
  return v;
}

/// osc(m) = max_{m <= n <= 2m} dist(x_n, x_{2m}) on m = probe grid of N/2.
template <class Dist>
Series oscillation_series(index_t N, const EvidenceConfig& cfg, Dist dist) {
  Series s;
  for (index_t m : probe_grid(N / 2, cfg.grid_ratio)) {
    double best = 0.0;
    for (index_t n = m; n <= 2 * m; ++n) best = std::max(best, dist(n, 2 * m));
    s.rows.push_back(m);
    s.values.push_back(best);
  }
  return s;
}

template <Field F>
Vector<F> sub(std::span<const F> a, std::span<const F> b) {
  Vector<F> out(a.begin(), a.end());
  for (index_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

}  // namespace detail

template <Field F>
ErgodicVerdict classify(const TriangularMatrix<F>& a, const SequenceFamily<F>& fam,
                        const std::vector<std::vector<F>>& probes, index_t N,
                        const EvidenceConfig& cfg = {}) {
  if (probes.empty()) throw DomainError("classification needs at least one probe vector");
  if (N < 16) throw DimensionError("operator runs need depth at least 16");
  for (const auto& x : probes) {
    if (x.size() != fam.dim()) {
      throw DimensionError("probe of dimension " + std::to_string(x.size()) +
                           " does not match operator dimension " + std::to_string(fam.dim()));
    }
  }
  const NormKind nk = fam.norm_kind();
  const index_t d = fam.dim();
  const auto rows = detail::all_rows(N);

  ErgodicVerdict v;
  v.matrix_id = a.id();
  v.operator_id = fam.id();
  v.depth = N;
  v.tol = cfg.tol;
  v.norm = nk;

  std::vector<DenseMatrix<F>> ops;
  ops.reserve(N);
  for (index_t n = 0; n < N; ++n) ops.push_back(expected_value(a, fam, n));
  auto norm = [nk](const DenseMatrix<F>& m) { return operator_norm(m, nk); };

  Series norms{rows, {}};
  for (const auto& m : ops) norms.values.push_back(norm(m));
  v.bounded = detail::from_evidence(assess_bounded(norms, N, cfg), "sup_n ||(AT)_n||");
  v.null = detail::from_evidence(assess_vanishing(norms, N, cfg), "||(AT)_n|| -> 0");

  Series osc = detail::oscillation_series(
      N, cfg, [&](index_t i, index_t j) { return norm(ops[i] - ops[j]); });
  Evidence conv = assess_vanishing(osc, N / 2, cfg);
  if (v.null.status == Status::holds) {
    v.ergodic = detail::from_evidence(conv, "null, so convergent with limit 0");
    v.ergodic.status = Status::holds;
    v.P = DenseMatrix<double>(d, d);
  } else {
    v.ergodic = detail::from_evidence(conv, "Cauchy oscillation of (AT)_n over [m, 2m]");
    v.ergodic.status = conjunction({v.bounded.status, conv.status});
    v.P = to_double_matrix(ops[N - 1]);
  }

  Series steps{rows, {}};
  for (index_t n = 0; n < N; ++n) {
    steps.values.push_back(n == 0 ? norm(ops[0]) : norm(ops[n] - ops[n - 1]));
  }
  v.delta_A_null =
      detail::from_evidence(assess_vanishing(steps, N, cfg), "||(AT)_n - (AT)_{n-1}|| -> 0");

  auto a_delta = multiply(a, make_delta<F>());
  Series ad{rows, {}};
  for (index_t n = 0; n < N; ++n) ad.values.push_back(norm(expected_value(a_delta, fam, n)));
  v.A_delta_null = detail::from_evidence(assess_vanishing(ad, N, cfg), "||(A Delta T)_n|| -> 0");

  auto grid = probe_grid(N, cfg.grid_ratio);
  Evidence col = assess_vanishing(
      Series::sample(grid, [&](index_t n) { return std::fabs(to_double(a.entry(n, 0))); }), N, cfg);
  v.first_column = detail::from_evidence(col, "a_n0 -> 0");
  if (auto known = analytic_first_column_vanishes(a.id())) {
    v.first_column.status = known->status;
    v.first_column.note = known->rationale;
  }

  const bool is_power = fam.kind() == FamilyKind::power;
  DenseMatrix<F> t_minus_i;
  if (is_power) {
    t_minus_i = fam.generator().matrix() - DenseMatrix<F>::identity(d);
    Series left{rows, {}}, right{rows, {}};
    for (const auto& m : ops) {
      left.values.push_back(norm(t_minus_i * m));
      right.values.push_back(norm(m * t_minus_i));
    }
    Evidence l = assess_vanishing(left, N, cfg), r = assess_vanishing(right, N, cfg);
    v.limit_T_invariant = detail::from_evidence(l, "||(T - I)(AT)_n|| and ||(AT)_n (T - I)|| -> 0");
    v.limit_T_invariant.status = conjunction({l.status, r.status});
  } else {
    v.limit_T_invariant.note = "defined for power families only";
    v.limit_T_invariant_probes.note = "defined for power families only";
  }

  std::vector<Status> per_probe;
  for (const auto& x : probes) {
    std::span<const F> xs(x);
    ProbeResult pr;
    pr.probe = to_double_vector<F>(xs);
    std::vector<Vector<F>> pts;
    pts.reserve(N);
    for (const auto& m : ops) pts.push_back(m.apply(xs));
    auto vnorm = [nk](std::span<const F> y) { return vector_norm<F>(y, nk); };
    Series pn{rows, {}};
    for (const auto& y : pts) pn.values.push_back(vnorm(y));
    pr.null = detail::from_evidence(assess_vanishing(pn, N, cfg), "(AT)_n x -> 0");
    Series posc = detail::oscillation_series(N, cfg, [&](index_t i, index_t j) {
      return vnorm(detail::sub<F>(pts[i], pts[j]));
    });
    pr.convergence = detail::from_evidence(assess_vanishing(posc, N / 2, cfg),
                                           "Cauchy oscillation of (AT)_n x over [m, 2m]");
    if (pr.null.status == Status::holds) {
      pr.convergence.status = Status::holds;
      pr.limit.assign(d, 0.0);
    } else {
      pr.limit = to_double_vector<F>(std::span<const F>(pts[N - 1]));
    }
    if (is_power) {
      Vector<F> tx = t_minus_i.apply(xs);
      Series left{rows, {}}, right{rows, {}};
      for (index_t n = 0; n < N; ++n) {
        double res = vnorm(t_minus_i.apply(pts[n]));
        pr.residual_sup = std::max(pr.residual_sup, res);
        pr.residual_last = res;
        left.values.push_back(res);
        right.values.push_back(vnorm(ops[n].apply(tx)));
      }
      Evidence l = assess_vanishing(left, N, cfg), r = assess_vanishing(right, N, cfg);
      pr.limit_T_invariant =
          detail::from_evidence(l, "||(T - I)(AT)_n x|| and ||(AT)_n (T - I) x|| -> 0");
      pr.limit_T_invariant.status = conjunction({l.status, r.status});
      per_probe.push_back(pr.limit_T_invariant.status);
    }
    v.probes.push_back(std::move(pr));
  }
  if (is_power) {
    v.limit_T_invariant_probes.status = conjunction(per_probe);
    v.limit_T_invariant_probes.note = "each supplied probe separately";
  }
  // A probe that fails refutes the operator-norm statement it is an instance of.
  auto refute = [](LabVerdict& op_level, Status probe_status, const char* what) {
    if (op_level.status == Status::inconclusive && probe_status == Status::fails) {
      op_level.status = Status::fails;
      op_level.note += std::string("; fails at a supplied probe (") + what + ")";
    }
  };
  for (const auto& pr : v.probes) {
    refute(v.null, pr.null.status, "(AT)_n x does not tend to 0");
    refute(v.ergodic, pr.convergence.status, "(AT)_n x does not converge");
    if (is_power) refute(v.limit_T_invariant, pr.limit_T_invariant.status, "residual persists");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Absolute boundedness and the Eberlein equivalences
// ---------------------------------------------------------------------------

/// sup_n sum_{i<=n} |d_ni a_ni| ||T_i||, with d = 1 when no multiplier is given.
template <Field F>
LabVerdict absolutely_bounded_check(const TriangularMatrix<F>& a, const SequenceFamily<F>& fam,
                                    index_t N, const EvidenceConfig& cfg = {},
                                    const std::optional<TriangularMatrix<std::type_identity_t<F>>>& multiplier = {}) {
  auto m = multiplier ? schur_product(*multiplier, a) : a;
  std::vector<double> member_norms;
  member_norms.reserve(N);
  for (index_t i = 0; i < N; ++i) {
    member_norms.push_back(fam.kind() == FamilyKind::power
                               ? operator_norm(fam.power(i), fam.norm_kind())
                               : operator_norm(fam.member(i), fam.norm_kind()));
  }
  Series s{detail::all_rows(N), {}};
  for (index_t n = 0; n < N; ++n) {
    auto r = m.row(n);
    double acc = 0.0;
    for (index_t i = 0; i <= n; ++i) acc += std::fabs(to_double((*r)[i])) * member_norms[i];
    s.values.push_back(acc);
  }
  std::string note = "sup_n sum_i |a_ni| ||T_i||";
  if (multiplier) note += " with Schur multiplier " + multiplier->id();
  return detail::from_evidence(assess_bounded(s, N, cfg), note);
}

struct EberleinReport {
  bool limit_exists = false;
  /// Cauchy tail of (AT)_n x0.
  LabVerdict convergence;
  /// Boundedness of ||(AT)_n x0||.
  LabVerdict growth;
  /// Limit estimate (AT)_{N-1} x0; empty when no limit was detected.
  std::vector<double> y;
  /// ||Ty - y||
  double fixed_point_residual = std::numeric_limits<double>::quiet_NaN();
  /// Euclidean distance from y to conv{T^k x0 : k < N}.
  double hull_distance = std::numeric_limits<double>::quiet_NaN();
  HullProjection hull;
  index_t hull_vertices = 0;
};

nlohmann::json to_json(const EberleinReport& r);

template <Field F>
EberleinReport eberlein_check(const TriangularMatrix<F>& a, const FiniteOperator<F>& t,
                              const std::vector<F>& x0, index_t N,
                              const EvidenceConfig& cfg = {}) {
  if (!is_probability_prefix(a, N)) {
    throw DomainError("the Eberlein check needs a probability matrix; " + a.id() + " is not one");
  }
  if (x0.size() != t.dim()) throw DimensionError("probe dimension does not match the operator");
  auto fam = SequenceFamily<F>::power(t);
  auto pts = orbit_points(a, fam, std::span<const F>(x0), N);
  const NormKind nk = t.norm_kind();
  auto vnorm = [nk](std::span<const F> y) { return vector_norm<F>(y, nk); };
  EberleinReport rep;
  Series pn{detail::all_rows(N), {}};
  for (const auto& y : pts) pn.values.push_back(vnorm(y));
  rep.growth = detail::from_evidence(assess_bounded(pn, N, cfg), "sup_n ||(AT)_n x0||");
  Series osc = detail::oscillation_series(
      N, cfg, [&](index_t i, index_t j) { return vnorm(detail::sub<F>(pts[i], pts[j])); });
  rep.convergence = detail::from_evidence(assess_vanishing(osc, N / 2, cfg),
                                          "Cauchy oscillation of (AT)_n x0 over [m, 2m]");
  rep.limit_exists = rep.convergence.status == Status::holds;
  if (!rep.limit_exists) return rep;

  const auto& y = pts[N - 1];
  rep.y = to_double_vector<F>(std::span<const F>(y));
  rep.fixed_point_residual = vnorm(detail::sub<F>(t.matrix().apply(y), y));
  std::vector<std::vector<double>> vertices;
  vertices.reserve(N);
  Vector<F> cur(x0);
  for (index_t k = 0; k < N; ++k) {
    vertices.push_back(to_double_vector<F>(std::span<const F>(cur)));
    cur = t.matrix().apply(cur);
  }
  rep.hull_vertices = vertices.size();
  rep.hull = hull_project(vertices, rep.y);
  rep.hull_distance = rep.hull.distance;
  return rep;
}

// ---------------------------------------------------------------------------
// Witness families on l-infinity and c0 truncations
// ---------------------------------------------------------------------------

enum class FamilyMode { bounded, null };

std::string to_string(FamilyMode m);

struct FamilyVerdict {
  FamilyKind family = FamilyKind::shift;
  FamilyMode mode = FamilyMode::bounded;
  std::string a_id;
  std::string b_id;
  Status status = Status::inconclusive;
  Status numeric = Status::inconclusive;
  std::optional<Status> analytic;
  std::string rationale;
  /// Norm evidence over the probed rows.
  Evidence evidence;
  std::vector<index_t> rows;
  std::vector<double> norms;
  /// Coordinate family: row abs sums of C on the same rows, reported alongside.
  std::vector<double> row_abs_sums;
  /// Coordinate family: one vanishing verdict per probe vector.
  std::vector<std::pair<std::string, Evidence>> probes;
  /// Shift family: norm of row witness_row realized by evaluating the
  /// combined operator at the sign witness.
  index_t witness_row = 0;
  double witness_value = 0.0;
  double witness_norm = 0.0;
  index_t n_dim = 0;
  index_t depth = 0;
  std::string caveat;
};

nlohmann::json to_json(const FamilyVerdict& v);

template <Field F>
FamilyVerdict shift_family_test(const TriangularMatrix<F>& a, const TriangularMatrix<F>& b,
                                index_t n_dim, index_t N, FamilyMode mode,
                                const EvidenceConfig& cfg = {}) {
  using traits = scalar_traits<F>;
  if (N > n_dim) {
    throw DimensionError("shift family rows up to " + std::to_string(N) +
                         " need a truncation of at least that size, got " + std::to_string(n_dim));
  }
  if (N < 16) throw DimensionError("probe depth must be at least 16");
  auto t = transfer(a, b);
  FamilyVerdict v;
  v.family = FamilyKind::shift;
  v.mode = mode;
  v.a_id = a.id();
  v.b_id = b.id();
  v.n_dim = n_dim;
  v.depth = N;
  v.caveat = "the truncated shift is nilpotent; rows n < " + std::to_string(N) +
             " <= truncation " + std::to_string(n_dim) + " see every coefficient";
  v.rows = probe_grid(N, cfg.grid_ratio);
  for (index_t n : v.rows) {
    auto r = t.C.row(n);
    F s = traits::zero();
    for (index_t k = 0; k <= n && k < n_dim; ++k) s += traits::abs((*r)[k]);
    v.norms.push_back(to_double(s));
  }
  Series s{v.rows, v.norms};
  v.evidence = mode == FamilyMode::bounded ? assess_bounded(s, N, cfg) : assess_vanishing(s, N, cfg);
  v.numeric = v.evidence.status;

  // Realize the largest probed norm through the family itself: the combined
  // operator (B S)_n on a truncation just wide enough, evaluated at the signs of C.
  std::size_t arg = 0;
  for (std::size_t i = 0; i < v.norms.size(); ++i) {
    if (v.norms[i] > v.norms[arg]) arg = i;
  }
  v.witness_row = v.rows[arg];
  v.witness_norm = v.norms[arg];
  auto fam = SequenceFamily<F>::shift(a, v.witness_row + 1);
  auto op = expected_value(b, fam, v.witness_row);
  auto z = witness_sequence(t.C, v.witness_row, v.witness_row + 1);
  v.witness_value = to_double(op.apply(z.values)[0]);

  auto prop = mode == FamilyMode::bounded ? Property::star_C : Property::star_3C;
  if (auto known = analytic_pair_verdict(a.id(), b.id(), prop)) {
    v.analytic = known->status;
    v.rationale = to_string(prop) + ": " + known->rationale;
    v.status = known->status;
  } else {
    v.status = v.numeric;
  }
  return v;
}

template <Field F>
FamilyVerdict coordinate_family_test(const TriangularMatrix<F>& a, const TriangularMatrix<F>& b,
                                     index_t n_dim, index_t N, const EvidenceConfig& cfg = {}) {
  using traits = scalar_traits<F>;
  if (N < 16) throw DimensionError("probe depth must be at least 16");
  auto t = transfer(a, b);
  FamilyVerdict v;
  v.family = FamilyKind::coordinate;
  v.mode = FamilyMode::null;
  v.a_id = a.id();
  v.b_id = b.id();
  v.n_dim = n_dim;
  v.depth = N;
  v.caveat = "coefficients beyond the truncation " + std::to_string(n_dim) + " are dropped";
  v.rows = probe_grid(N, cfg.grid_ratio);
  std::vector<std::shared_ptr<const std::vector<F>>> crow;
  for (index_t n : v.rows) {
    auto r = t.C.row(n);
    crow.push_back(r);
    F s = traits::zero();
    double mx = 0.0;
    for (index_t k = 0; k <= n && k < n_dim; ++k) {
      s += traits::abs((*r)[k]);
      mx = std::max(mx, to_double(traits::abs((*r)[k])));
    }
    v.norms.push_back(mx);
    v.row_abs_sums.push_back(to_double(s));
  }
  Evidence bounded = assess_bounded(Series{v.rows, v.norms}, N, cfg);
  v.evidence = bounded;
  std::vector<Status> parts{bounded.status};

  // ||(B (A^{-1} E))_n x|| = max_k |c_nk x_k| on the truncation.
  auto probe_series = [&](const std::function<double(index_t)>& x) {
    Series s;
    for (std::size_t i = 0; i < v.rows.size(); ++i) {
      const index_t n = v.rows[i];
      double mx = 0.0;
      for (index_t k = 0; k <= n && k < n_dim; ++k) {
        double xk = x(k);
        if (xk != 0.0) mx = std::max(mx, std::fabs(to_double((*crow[i])[k])) * std::fabs(xk));
      }
      s.rows.push_back(n);
      s.values.push_back(mx);
    }
    return s;
  };
  const index_t basis = std::min(star2c_column_count(N), n_dim);
  for (index_t k = 0; k < basis; ++k) {
    Evidence e = assess_vanishing(probe_series([k](index_t j) { return j == k ? 1.0 : 0.0; }), N, cfg);
    parts.push_back(e.status);
    v.probes.emplace_back("e_" + std::to_string(k), std::move(e));
  }
  // The witness is finitely supported, so it lies in c0; pick its row before the
  // tail window or its own nonzero value would sit inside the window.
  const index_t window_start = N / cfg.tail_divisor;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < v.norms.size() && v.rows[i] < window_start; ++i) {
    if (v.norms[i] > v.norms[arg]) arg = i;
  }
  v.witness_row = v.rows[arg];
  v.witness_norm = v.norms[arg];
  auto z = witness_sequence(t.C, v.witness_row, std::max(v.witness_row + 1, n_dim));
  {
    Evidence e = assess_vanishing(
        probe_series([&](index_t j) { return to_double(z.values[j]); }), N, cfg);
    parts.push_back(e.status);
    v.probes.emplace_back("z(" + std::to_string(v.witness_row) + ")", std::move(e));
  }
  {
    Evidence e = assess_vanishing(
        probe_series([](index_t j) { return 1.0 / std::sqrt(static_cast<double>(j) + 1.0); }), N,
        cfg);
    parts.push_back(e.status);
    v.probes.emplace_back("1/sqrt(k+1)", std::move(e));
  }
  v.numeric = conjunction(parts);
  v.status = v.numeric;
  v.witness_value = v.witness_norm;
  if (auto known = analytic_pair_verdict(a.id(), b.id(), Property::star_2C)) {
    if (known->status == Status::holds) {
      v.analytic = Status::holds;
      v.rationale = "(*2C) holds, which suffices: " + known->rationale;
      v.status = Status::holds;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Transfer of limit T-invariance between matrices
// ---------------------------------------------------------------------------

struct TransferProbe {
  bool applicable = false;
  Status status = Status::inconclusive;
  std::string note;
  PropertyVerdict pair_2C;
  Evidence a_residual;
  Evidence b_residual;
  /// sup of the row abs sums of C over the probed rows.
  double K_C = 0.0;
  bool bound_holds = false;
  /// min_n (K_C max_{j<=n} r^A_j + tol - r^B_n)
  double worst_margin = 0.0;
  index_t worst_row = 0;
  std::vector<double> a_values;
  std::vector<double> b_values;
};

nlohmann::json to_json(const TransferProbe& p);

/// Residual r_n = max(||(T - I)(AT)_n x||, ||(AT)_n (T - I) x||) for n < N.
template <Field F>
std::vector<double> invariance_residuals(const TriangularMatrix<F>& a, const FiniteOperator<F>& t,
                                         const std::vector<F>& x, index_t N) {
  auto fam = SequenceFamily<F>::power(t);
  const auto tmi = t.matrix() - DenseMatrix<F>::identity(t.dim());
  const NormKind nk = t.norm_kind();
  auto left = orbit_points(a, fam, std::span<const F>(x), N);
  Vector<F> tx = tmi.apply(x);
  auto right = orbit_points(a, fam, std::span<const F>(tx), N);
  std::vector<double> r;
  r.reserve(N);
  for (index_t n = 0; n < N; ++n) {
    r.push_back(std::max(vector_norm<F>(tmi.apply(left[n]), nk),
                         vector_norm<F>(std::span<const F>(right[n]), nk)));
  }
  return r;
}

template <Field F>
TransferProbe limit_invariant_transfer_probe(const TriangularMatrix<F>& a,
                                             const TriangularMatrix<F>& b,
                                             const FiniteOperator<F>& t, const std::vector<F>& x,
                                             index_t N, const EvidenceConfig& cfg = {}) {
  if (x.size() != t.dim()) throw DimensionError("probe dimension does not match the operator");
  TransferProbe p;
  auto tr = transfer(a, b);
  p.pair_2C = check_pair(tr, Property::star_2C, N, cfg);
  p.a_values = invariance_residuals(a, t, x, N);
  p.b_values = invariance_residuals(b, t, x, N);
  auto rows = detail::all_rows(N);
  p.a_residual = assess_vanishing(Series{rows, p.a_values}, N, cfg);
  p.b_residual = assess_vanishing(Series{rows, p.b_values}, N, cfg);
  for (index_t n = 0; n < N; ++n) p.K_C = std::max(p.K_C, row_abs_sum_double(tr.C, n));
  double running = 0.0;
  p.worst_margin = std::numeric_limits<double>::infinity();
  for (index_t n = 0; n < N; ++n) {
    running = std::max(running, p.a_values[n]);
    double margin = p.K_C * running + cfg.tol - p.b_values[n];
    if (margin < p.worst_margin) {
      p.worst_margin = margin;
      p.worst_row = n;
    }
  }
  p.bound_holds = p.worst_margin >= 0.0;
  if (p.pair_2C.status != Status::holds) {
    p.note = "not applicable: (*2C) is " + to_string(p.pair_2C.status) + " for the pair";
    return p;
  }
  if (p.a_residual.status != Status::holds) {
    p.note = "not applicable: the residuals for " + a.id() + " do not vanish";
    return p;
  }
  p.applicable = true;
  if (!p.bound_holds) {
    p.status = Status::fails;
    p.note = "residual bound violated at row " + std::to_string(p.worst_row);
  } else {
    p.status = p.b_residual.status;
    p.note = "residuals for " + b.id() + " stay below K_C times those for " + a.id();
  }
  return p;
}

// ---------------------------------------------------------------------------
// Sample operators
// ---------------------------------------------------------------------------

/// Deterministic uniform draw in [lo, hi) from the raw engine bits.
double uniform_from_bits(std::uint64_t bits, double lo, double hi);

struct JordanSearch {
  std::optional<FiniteOperator<double>> op;
  int attempts = 0;
  ErgodicVerdict power_run;
  ErgodicVerdict cesaro_run;
};

/// Searches conjugates P(-I + sN)P^{-1} of a 2x2 Jordan block for one whose
/// powers grow while its Cesaro means stay bounded, verifying both numerically.
JordanSearch find_cesaro_bounded_growing_powers(std::uint64_t seed, index_t N, int max_attempts = 20,
                                                const EvidenceConfig& cfg = {});

}  // namespace summat
