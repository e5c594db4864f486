#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "summat/dense.hpp"
#include "summat/memo.hpp"
#include "summat/scalar.hpp"

namespace summat {

/// Which convention the defining formula was written in. Storage is always
/// 0-based; catalog constructors shift 1-based formulas (i = k+1, row n+1).
enum class IndexBase { zero_based, one_based_shifted };

struct MatrixFlags {
  std::optional<bool> is_probability;
  std::optional<bool> diagonal_nonzero;
  /// Known number of nonzero subdiagonals (0 = diagonal, 1 = bidiagonal).
  std::optional<index_t> lower_bandwidth;
};

template <Field F>
class TriangularMatrix;

namespace detail {

template <Field F>
class MatrixNode {
 public:
  using Row = std::shared_ptr<const std::vector<F>>;
  virtual ~MatrixNode() = default;
  /// Only called with k <= n.
  virtual F entry(index_t n, index_t k) const = 0;
  /// Entries 0..n of row n.
  virtual Row row(index_t n) const {
    auto r = std::make_shared<std::vector<F>>();
    r->reserve(n + 1);
    for (index_t k = 0; k <= n; ++k) r->push_back(entry(n, k));
    return r;
  }
};

}  // namespace detail

/// Immutable, lazily evaluated infinite lower-triangular matrix.
///
/// Copies share the underlying oracle. entry(n, k) is zero for k > n without
/// consulting the oracle. Derived matrices (products, inverses) memoize rows in
/// an internally synchronized cache, so any number of threads may read.
template <Field F>
class TriangularMatrix {
 public:
  using traits = scalar_traits<F>;
  using Node = detail::MatrixNode<F>;
  using Row = typename Node::Row;
  using EntryFn = std::function<F(index_t n, index_t k)>;
  using RowFn = std::function<std::vector<F>(index_t n)>;

  /// Builds a matrix from an entry formula; row_fn, when given, must agree with
  /// entry_fn and exists only to evaluate whole rows faster.
  static TriangularMatrix from_formula(std::string id, EntryFn entry_fn, MatrixFlags flags,
                                       IndexBase base = IndexBase::zero_based,
                                       RowFn row_fn = {});

  static TriangularMatrix from_node(std::string id, std::shared_ptr<const Node> node,
                                    MatrixFlags flags, IndexBase base = IndexBase::zero_based) {
    TriangularMatrix m;
    m.node_ = std::move(node);
    auto meta = std::make_shared<Meta>();
    meta->id = std::move(id);
    meta->flags = flags;
    meta->base = base;
    m.meta_ = std::move(meta);
    return m;
  }

  F entry(index_t n, index_t k) const {
    if (k > n) return traits::zero();
    return node_->entry(n, k);
  }

  Row row(index_t n) const { return node_->row(n); }

  const std::string& id() const noexcept { return meta_->id; }
  const MatrixFlags& flags() const noexcept { return meta_->flags; }
  IndexBase index_base() const noexcept { return meta_->base; }
  std::string index_base_note() const {
    return meta_->base == IndexBase::zero_based
               ? "0-based formula"
               : "1-based formula shifted: entry(n,k) uses i=k+1, row n+1";
  }

  std::optional<TriangularMatrix> closed_inverse() const {
    if (!meta_->closed_inverse) return std::nullopt;
    return *meta_->closed_inverse;
  }

  TriangularMatrix with_closed_inverse(TriangularMatrix inverse) const {
    TriangularMatrix m = *this;
    auto meta = std::make_shared<Meta>(*meta_);
    meta->closed_inverse = std::make_shared<const TriangularMatrix>(std::move(inverse));
    m.meta_ = std::move(meta);
    return m;
  }

  TriangularMatrix renamed(std::string id) const {
    TriangularMatrix m = *this;
    auto meta = std::make_shared<Meta>(*meta_);
    meta->id = std::move(id);
    m.meta_ = std::move(meta);
    return m;
  }

 private:
  struct Meta {
    std::string id;
    MatrixFlags flags;
    IndexBase base = IndexBase::zero_based;
    std::shared_ptr<const TriangularMatrix> closed_inverse;
  };

  std::shared_ptr<const Node> node_;
  std::shared_ptr<const Meta> meta_;
};

namespace detail {

template <Field F>
class FormulaNode final : public MatrixNode<F> {
 public:
  using typename MatrixNode<F>::Row;
  FormulaNode(typename TriangularMatrix<F>::EntryFn e, typename TriangularMatrix<F>::RowFn r)
      : entry_(std::move(e)), row_(std::move(r)) {}

  F entry(index_t n, index_t k) const override {
    return scalar_traits<F>::checked(entry_(n, k), "matrix entry");
  }

  Row row(index_t n) const override {
    if (!row_) return MatrixNode<F>::row(n);
    auto r = std::make_shared<std::vector<F>>(row_(n));
    for (const auto& v : *r) scalar_traits<F>::checked(v, "matrix row");
    return r;
  }

 private:
  typename TriangularMatrix<F>::EntryFn entry_;
  typename TriangularMatrix<F>::RowFn row_;
};

/// Rows of C*A: row n is the combination sum_j c_{nj} * (row j of A).
template <Field F>
class ProductNode final : public MatrixNode<F> {
 public:
  using typename MatrixNode<F>::Row;
  ProductNode(TriangularMatrix<F> c, TriangularMatrix<F> a) : c_(std::move(c)), a_(std::move(a)) {}

  F entry(index_t n, index_t k) const override { return (*row(n))[k]; }

  Row row(index_t n) const override {
    return cache_.get_or_compute(n, [&] {
      using traits = scalar_traits<F>;
      std::vector<F> out(n + 1, traits::zero());
      auto crow = c_.row(n);
      for (index_t j = 0; j <= n; ++j) {
        const F& cnj = (*crow)[j];
        if (traits::is_zero(cnj)) continue;
        if (auto bw = a_.flags().lower_bandwidth) {
          for (index_t k = j > *bw ? j - *bw : 0; k <= j; ++k) out[k] += cnj * a_.entry(j, k);
          continue;
        }
        auto arow = a_.row(j);
        for (index_t k = 0; k <= j; ++k) out[k] += cnj * (*arow)[k];
      }
      for (const auto& v : out) traits::checked(v, "product row");
      return out;
    });
  }

 private:
  TriangularMatrix<F> c_;
  TriangularMatrix<F> a_;
  RowCache<std::vector<F>> cache_;
};

/// Rows of B * A^{-1} by substitution: solve r A = (row n of B), r_k for k = n..0.
/// With B = I this is the blockwise inverse; rows are independent of each other.
template <Field F>
class RightDivideNode final : public MatrixNode<F> {
 public:
  using typename MatrixNode<F>::Row;
  RightDivideNode(std::optional<TriangularMatrix<F>> b, TriangularMatrix<F> a)
      : b_(std::move(b)), a_(std::move(a)) {}

  F entry(index_t n, index_t k) const override { return (*row(n))[k]; }

  Row row(index_t n) const override {
    return cache_.get_or_compute(n, [&] {
      using traits = scalar_traits<F>;
      std::vector<F> rhs;
      if (b_) {
        auto brow = b_->row(n);
        rhs = *brow;
      } else {
        rhs.assign(n + 1, traits::zero());
        rhs[n] = traits::one();
      }
      // rhs doubles as the accumulator: rhs[k] -= r_j * a(j,k) for processed j > k.
      std::vector<F> out(n + 1, traits::zero());
      const auto bw = a_.flags().lower_bandwidth;
      for (index_t jj = n + 1; jj-- > 0;) {
        F diag;
        Row arow;
        if (bw) {
          diag = a_.entry(jj, jj);
        } else {
          arow = a_.row(jj);
          diag = (*arow)[jj];
        }
        if (traits::is_zero(diag)) {
          throw InvertibilityError(jj, "zero diagonal entry at row " + std::to_string(jj) +
                                           " of " + a_.id());
        }
        F rj = rhs[jj] / diag;
        if (!traits::is_zero(rj)) {
          if (bw) {
            for (index_t k = jj > *bw ? jj - *bw : 0; k < jj; ++k) rhs[k] -= rj * a_.entry(jj, k);
          } else {
            for (index_t k = 0; k < jj; ++k) rhs[k] -= rj * (*arow)[k];
          }
        }
        out[jj] = std::move(rj);
      }
      for (const auto& v : out) traits::checked(v, "inverse row");
      return out;
    });
  }

 private:
  std::optional<TriangularMatrix<F>> b_;
  TriangularMatrix<F> a_;
  RowCache<std::vector<F>> cache_;
};

template <Field F>
class SchurNode final : public MatrixNode<F> {
 public:
  using typename MatrixNode<F>::Row;
  SchurNode(TriangularMatrix<F> d, TriangularMatrix<F> a) : d_(std::move(d)), a_(std::move(a)) {}

  F entry(index_t n, index_t k) const override { return d_.entry(n, k) * a_.entry(n, k); }

  Row row(index_t n) const override {
    auto dr = d_.row(n);
    auto ar = a_.row(n);
    auto out = std::make_shared<std::vector<F>>(n + 1);
    for (index_t k = 0; k <= n; ++k) (*out)[k] = (*dr)[k] * (*ar)[k];
    return out;
  }

 private:
  TriangularMatrix<F> d_;
  TriangularMatrix<F> a_;
};

}  // namespace detail

template <Field F>
TriangularMatrix<F> TriangularMatrix<F>::from_formula(std::string id, EntryFn entry_fn,
                                                      MatrixFlags flags, IndexBase base,
                                                      RowFn row_fn) {
  return from_node(std::move(id),
                   std::make_shared<detail::FormulaNode<F>>(std::move(entry_fn), std::move(row_fn)),
                   flags, base);
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

template <Field F>
F entry(const TriangularMatrix<F>& a, index_t n, index_t k) {
  return a.entry(n, k);
}

template <Field F>
DenseBlock<F> truncate(const TriangularMatrix<F>& a, index_t size) {
  if (size == 0) throw DimensionError("truncation size must be >= 1");
  DenseBlock<F> block(size, size);
  for (index_t n = 0; n < size; ++n) {
    auto r = a.row(n);
    for (index_t k = 0; k <= n; ++k) block(n, k) = (*r)[k];
  }
  return block;
}

inline std::string product_id(const std::string& left, const std::string& right) {
  return left + "*" + right;
}

/// Lazy product C*A; probability if both factors are flagged probability.
template <Field F>
TriangularMatrix<F> multiply(const TriangularMatrix<F>& c, const TriangularMatrix<F>& a) {
  MatrixFlags flags;
  if (c.flags().is_probability.value_or(false) && a.flags().is_probability.value_or(false)) {
    flags.is_probability = true;
  }
  if (c.flags().diagonal_nonzero.value_or(false) && a.flags().diagonal_nonzero.value_or(false)) {
    flags.diagonal_nonzero = true;
  }
  if (c.flags().lower_bandwidth && a.flags().lower_bandwidth) {
    flags.lower_bandwidth = *c.flags().lower_bandwidth + *a.flags().lower_bandwidth;
  }
  auto m = TriangularMatrix<F>::from_node(product_id(c.id(), a.id()),
                                          std::make_shared<detail::ProductNode<F>>(c, a), flags);
  auto ci = c.closed_inverse();
  auto ai = a.closed_inverse();
  if (ci && ai) {
    // (CA)^{-1} = A^{-1} C^{-1}
    auto inv = TriangularMatrix<F>::from_node(
        product_id(ai->id(), ci->id()), std::make_shared<detail::ProductNode<F>>(*ai, *ci),
        MatrixFlags{std::nullopt, true});
    m = m.with_closed_inverse(inv);
  }
  return m;
}

/// Exact inverse computed row by row by substitution; the N x N truncation of
/// the result is the inverse of the N x N truncation of A for every N.
template <Field F>
TriangularMatrix<F> blockwise_inverse(const TriangularMatrix<F>& a) {
  if (a.flags().diagonal_nonzero == false) {
    throw InvertibilityError(0, a.id() + " is flagged as having a zero diagonal entry");
  }
  auto inv = TriangularMatrix<F>::from_node(
      "inv(" + a.id() + ")",
      std::make_shared<detail::RightDivideNode<F>>(std::nullopt, a),
      MatrixFlags{std::nullopt, true});
  return inv.with_closed_inverse(a);
}

/// B * A^{-1} without materializing A^{-1}: row n costs O(n^2) entry reads.
template <Field F>
TriangularMatrix<F> right_divide(const TriangularMatrix<F>& b, const TriangularMatrix<F>& a) {
  if (a.flags().diagonal_nonzero == false) {
    throw InvertibilityError(0, a.id() + " is flagged as having a zero diagonal entry");
  }
  return TriangularMatrix<F>::from_node(
      product_id(b.id(), "inv(" + a.id() + ")"),
      std::make_shared<detail::RightDivideNode<F>>(b, a), MatrixFlags{});
}

template <Field F>
TriangularMatrix<F> schur_product(const TriangularMatrix<F>& d, const TriangularMatrix<F>& a) {
  MatrixFlags flags;
  if (d.flags().lower_bandwidth && a.flags().lower_bandwidth) {
    flags.lower_bandwidth = std::min(*d.flags().lower_bandwidth, *a.flags().lower_bandwidth);
  } else if (d.flags().lower_bandwidth) {
    flags.lower_bandwidth = d.flags().lower_bandwidth;
  } else {
    flags.lower_bandwidth = a.flags().lower_bandwidth;
  }
  return TriangularMatrix<F>::from_node("(" + d.id() + ")x(" + a.id() + ")",
                                        std::make_shared<detail::SchurNode<F>>(d, a), flags);
}

template <Field F>
F row_abs_sum(const TriangularMatrix<F>& a, index_t n) {
  using traits = scalar_traits<F>;
  auto r = a.row(n);
  F s = traits::zero();
  for (const auto& v : *r) s += traits::abs(v);
  return s;
}

template <Field F>
std::vector<F> column_sequence(const TriangularMatrix<F>& a, index_t k, index_t size) {
  std::vector<F> out;
  out.reserve(size);
  for (index_t n = 0; n < size; ++n) out.push_back(a.entry(n, k));
  return out;
}

/// Nonnegative entries and unit row sums on rows 0..N-1 (exact in the rational
/// backend, |sum - 1| <= 1e-12 in float64).
template <Field F>
bool is_probability_prefix(const TriangularMatrix<F>& a, index_t size) {
  using traits = scalar_traits<F>;
  for (index_t n = 0; n < size; ++n) {
    auto r = a.row(n);
    F s = traits::zero();
    for (const auto& v : *r) {
      if (v < traits::zero()) return false;
      s += v;
    }
    if constexpr (traits::exact) {
      if (s != traits::one()) return false;
    } else {
      if (std::fabs(s - 1.0) > 1e-12) return false;
    }
  }
  return true;
}

}  // namespace summat
