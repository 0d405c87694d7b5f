#include "fpp/zmatrix.hpp"

#include "fpp/errors.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <sstream>
#include <utility>

namespace fpp {

ZMatrix::ZMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ZMatrix::ZMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

ZMatrix ZMatrix::identity(std::size_t n) {
  ZMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

ZMatrix ZMatrix::diagonal(std::span<const Integer> entries) {
  ZMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

ZVector ZMatrix::column(std::size_t j) const {
  ZVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

ZMatrix ZMatrix::transpose() const {
  ZMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool ZMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Integer& v) { return sgn(v) == 0; });
}

ZMatrix ZMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0,
                       std::size_t c1) const {
  ZMatrix b(r1 - r0, c1 - c0);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = c0; j < c1; ++j) b(i - r0, j - c0) = (*this)(i, j);
  return b;
}

ZMatrix operator*(const ZMatrix& a, const ZMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  ZMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Integer& x = a(i, l);
      if (sgn(x) == 0) continue;
      auto brow = b.row(l);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (sgn(brow[j]) == 0) continue;
        mpz_addmul(out[j].get_mpz_t(), x.get_mpz_t(), brow[j].get_mpz_t());
      }
    }
  }
  return c;
}

ZMatrix operator+(const ZMatrix& a, const ZMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix sum: dimension mismatch");
  ZMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

ZMatrix operator-(const ZMatrix& a, const ZMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: dimension mismatch");
  ZMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

ZVector operator*(const ZMatrix& a, std::span<const Integer> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector: dimension mismatch");
  ZVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (sgn(r[j]) == 0 || sgn(x[j]) == 0) continue;
      mpz_addmul(y[i].get_mpz_t(), r[j].get_mpz_t(), x[j].get_mpz_t());
    }
  }
  return y;
}

ZVector left_multiply(std::span<const Integer> x, const ZMatrix& a) {
  if (a.rows() != x.size()) throw std::invalid_argument("vector-matrix: dimension mismatch");
  ZVector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (sgn(x[i]) == 0) continue;
    auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (sgn(r[j]) == 0) continue;
      mpz_addmul(y[j].get_mpz_t(), x[i].get_mpz_t(), r[j].get_mpz_t());
    }
  }
  return y;
}

ZMatrix hconcat(const ZMatrix& a, const ZMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hconcat: row mismatch");
  ZMatrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

ZMatrix block_diagonal(const ZMatrix& a, const ZMatrix& b) {
  ZMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, a.cols() + j) = b(i, j);
  return c;
}

std::string to_string(const ZMatrix& m) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? ", " : "") << m(i, j).get_str();
    out << ']';
  }
  out << ']';
  return out.str();
}

Integer determinant(const ZMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  ZMatrix m = a;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && sgn(m(swap, k)) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

namespace {

// q = round(a / p), ties toward floor.
void nearest_quotient(Integer& q, const Integer& a, const Integer& p) {
  Integer r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
  Integer twice = 2 * abs(r);
  if (twice > abs(p)) {
    q += 1;
  }
}

// row_i -= q * row_t, over the given columns of m (or all columns).
void row_submul(ZMatrix& m, std::size_t i, std::size_t t, const Integer& q) {
  auto ri = m.row(i);
  auto rt = m.row(t);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (sgn(rt[c]) == 0) continue;
    mpz_submul(ri[c].get_mpz_t(), q.get_mpz_t(), rt[c].get_mpz_t());
  }
}

// col_j -= q * col_t
void col_submul(ZMatrix& m, std::size_t j, std::size_t t, const Integer& q) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (sgn(m(r, t)) == 0) continue;
    mpz_submul(m(r, j).get_mpz_t(), q.get_mpz_t(), m(r, t).get_mpz_t());
  }
}

void swap_rows(ZMatrix& m, std::size_t i, std::size_t j) {
  if (i == j) return;
  auto a = m.row(i);
  auto b = m.row(j);
  for (std::size_t c = 0; c < m.cols(); ++c) mpz_swap(a[c].get_mpz_t(), b[c].get_mpz_t());
}

void swap_cols(ZMatrix& m, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < m.rows(); ++r)
    mpz_swap(m(r, i).get_mpz_t(), m(r, j).get_mpz_t());
}

void negate_row(ZMatrix& m, std::size_t i) {
  for (auto& v : m.row(i)) v = -v;
}

void negate_col(ZMatrix& m, std::size_t j) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, j) = -m(r, j);
}

// [row_i; row_j] <- [[a, b], [c, d]] * [row_i; row_j]
void rows_transform(ZMatrix& m, std::size_t i, std::size_t j, const Integer& a,
                    const Integer& b, const Integer& c, const Integer& d) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    Integer x = m(i, k), y = m(j, k);
    m(i, k) = a * x + b * y;
    m(j, k) = c * x + d * y;
  }
}

// [col_i, col_j] <- [col_i, col_j] * [[a, b], [c, d]]
void cols_transform(ZMatrix& m, std::size_t i, std::size_t j, const Integer& a,
                    const Integer& b, const Integer& c, const Integer& d) {
  for (std::size_t k = 0; k < m.rows(); ++k) {
    Integer x = m(k, i), y = m(k, j);
    m(k, i) = a * x + c * y;
    m(k, j) = b * x + d * y;
  }
}

// Elimination state. Every operation on A is mirrored on the requested
// transforms so that U * A0 * V = A holds throughout.
class SmithReducer {
public:
  SmithReducer(const ZMatrix& a, const SmithOptions& opt) : a_(a), opt_(opt) {
    if (opt.left) u_ = ZMatrix::identity(a.rows());
    if (opt.left_inverse) ui_ = ZMatrix::identity(a.rows());
    if (opt.right) v_ = ZMatrix::identity(a.cols());
    if (opt.right_inverse) vi_ = ZMatrix::identity(a.cols());
  }

  SmithDecomposition run() {
    const std::size_t m = a_.rows(), n = a_.cols();
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
      if (!select_pivot(t)) break;
      eliminate(t);
    }
    const std::size_t rank = t;
    for (std::size_t i = 0; i < rank; ++i)
      if (sgn(a_(i, i)) < 0) op_negate_row(i);
    fix_divisibility(rank);

    SmithDecomposition out;
    out.rank = rank;
    for (std::size_t i = 0; i < rank; ++i) {
      out.diagonal.push_back(a_(i, i));
      if (a_(i, i) > 1) out.invariant_factors.push_back(a_(i, i));
    }
    out.S = std::move(a_);
    out.U = std::move(u_);
    out.V = std::move(v_);
    out.U_inverse = std::move(ui_);
    out.V_inverse = std::move(vi_);
    return out;
  }

private:
  // Moves a nonzero entry of least absolute value in the active block to
  // (t, t); among unit candidates prefers the least Markowitz cost.
  bool select_pivot(std::size_t t) {
    const std::size_t m = a_.rows(), n = a_.cols();
    row_nnz_.assign(m, 0);
    col_nnz_.assign(n, 0);
    candidates_.clear();
    const Integer* best = nullptr;
    for (std::size_t i = t; i < m; ++i) {
      auto r = a_.row(i);
      for (std::size_t j = t; j < n; ++j) {
        if (sgn(r[j]) == 0) continue;
        ++row_nnz_[i];
        ++col_nnz_[j];
        int cmp = best ? cmpabs(r[j], *best) : -1;
        if (cmp < 0) {
          best = &r[j];
          candidates_.clear();
          candidates_.emplace_back(i, j);
        } else if (cmp == 0 && candidates_.size() < 4096) {
          candidates_.emplace_back(i, j);
        }
      }
    }
    if (!best) return false;
    std::size_t pi = candidates_.front().first, pj = candidates_.front().second;
    std::size_t best_cost = std::numeric_limits<std::size_t>::max();
    for (auto [i, j] : candidates_) {
      std::size_t cost = (row_nnz_[i] - 1) * (col_nnz_[j] - 1);
      if (cost < best_cost) {
        best_cost = cost;
        pi = i;
        pj = j;
      }
    }
    op_swap_rows(t, pi);
    op_swap_cols(t, pj);
    return true;
  }

  static int cmpabs(const Integer& x, const Integer& y) {
    return mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t());
  }

  void eliminate(std::size_t t) {
    const std::size_t m = a_.rows(), n = a_.cols();
    Integer q;
    for (;;) {
      const Integer pivot = a_(t, t);
      bool dirty = false;
      nz_.clear();
      for (std::size_t c = t; c < n; ++c)
        if (sgn(a_(t, c)) != 0) nz_.push_back(c);
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(a_(i, t)) == 0) continue;
        nearest_quotient(q, a_(i, t), pivot);
        if (sgn(q) != 0) op_row_submul(i, t, q);
        if (sgn(a_(i, t)) != 0) dirty = true;
      }
      if (dirty) {
        std::size_t best = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (sgn(a_(i, t)) != 0 && (best == t || cmpabs(a_(i, t), a_(best, t)) < 0))
            best = i;
        op_swap_rows(t, best);
        continue;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(a_(t, j)) == 0) continue;
        nearest_quotient(q, a_(t, j), pivot);
        if (sgn(q) != 0) op_col_submul_pivot_only(j, t, q);
        if (sgn(a_(t, j)) != 0) dirty = true;
      }
      if (dirty) {
        std::size_t best = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(a_(t, j)) != 0 && (best == t || cmpabs(a_(t, j), a_(t, best)) < 0))
            best = j;
        op_swap_cols(t, best);
        continue;
      }
      return;
    }
  }

  void fix_divisibility(std::size_t rank) {
    for (std::size_t i = 0; i < rank; ++i) {
      for (std::size_t j = i + 1; j < rank; ++j) {
        const Integer a = a_(i, i), b = a_(j, j);
        if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) continue;
        Integer g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        const Integer ag = a / g, bg = b / g;
        // [[x, y], [-b/g, a/g]] diag(a, b) [[1, -y b/g], [1, x a/g]] = diag(g, ab/g)
        op_rows_transform(i, j, x, y, -bg, ag);
        op_cols_transform(i, j, 1, -y * bg, 1, x * ag);
        assert(a_(i, i) == g);
      }
    }
  }

  void op_row_submul(std::size_t i, std::size_t t, const Integer& q) {
    auto ri = a_.row(i);
    auto rt = a_.row(t);
    for (std::size_t c : nz_) mpz_submul(ri[c].get_mpz_t(), q.get_mpz_t(), rt[c].get_mpz_t());
    if (opt_.left) row_submul(u_, i, t, q);
    if (opt_.left_inverse) {
      // U^-1 <- U^-1 (I + q e_it)
      for (std::size_t r = 0; r < ui_.rows(); ++r)
        if (sgn(ui_(r, i)) != 0)
          mpz_addmul(ui_(r, t).get_mpz_t(), q.get_mpz_t(), ui_(r, i).get_mpz_t());
    }
  }

  // Column t is zero apart from the pivot, so on A only row t changes.
  void op_col_submul_pivot_only(std::size_t j, std::size_t t, const Integer& q) {
    mpz_submul(a_(t, j).get_mpz_t(), q.get_mpz_t(), a_(t, t).get_mpz_t());
    if (opt_.right) col_submul(v_, j, t, q);
    if (opt_.right_inverse) {
      // V^-1 <- (I + q e_tj) V^-1
      auto rt = vi_.row(t);
      auto rj = vi_.row(j);
      for (std::size_t c = 0; c < vi_.cols(); ++c)
        if (sgn(rj[c]) != 0) mpz_addmul(rt[c].get_mpz_t(), q.get_mpz_t(), rj[c].get_mpz_t());
    }
  }

  void op_swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    swap_rows(a_, i, j);
    if (opt_.left) swap_rows(u_, i, j);
    if (opt_.left_inverse) swap_cols(ui_, i, j);
  }

  void op_swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    swap_cols(a_, i, j);
    if (opt_.right) swap_cols(v_, i, j);
    if (opt_.right_inverse) swap_rows(vi_, i, j);
  }

  void op_negate_row(std::size_t i) {
    negate_row(a_, i);
    if (opt_.left) negate_row(u_, i);
    if (opt_.left_inverse) negate_col(ui_, i);
  }

  void op_rows_transform(std::size_t i, std::size_t j, const Integer& a, const Integer& b,
                         const Integer& c, const Integer& d) {
    rows_transform(a_, i, j, a, b, c, d);
    if (opt_.left) rows_transform(u_, i, j, a, b, c, d);
    if (opt_.left_inverse) cols_transform(ui_, i, j, d, -b, -c, a);
  }

  void op_cols_transform(std::size_t i, std::size_t j, const Integer& a, const Integer& b,
                         const Integer& c, const Integer& d) {
    cols_transform(a_, i, j, a, b, c, d);
    if (opt_.right) cols_transform(v_, i, j, a, b, c, d);
    if (opt_.right_inverse) rows_transform(vi_, i, j, d, -b, -c, a);
  }

  ZMatrix a_;
  SmithOptions opt_;
  ZMatrix u_, ui_, v_, vi_;
  std::vector<std::size_t> row_nnz_, col_nnz_, nz_;
  std::vector<std::pair<std::size_t, std::size_t>> candidates_;
};

}  // namespace

SmithDecomposition smith_normal_form(const ZMatrix& a, SmithOptions options) {
  return SmithReducer(a, options).run();
}

HermiteForm hermite_normal_form(const ZMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  HermiteForm out{a, ZMatrix::identity(m), 0};
  ZMatrix& h = out.H;
  ZMatrix& u = out.U;
  std::size_t pr = 0;
  Integer q;
  for (std::size_t c = 0; c < n && pr < m; ++c) {
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = pr; i < m; ++i)
        if (sgn(h(i, c)) != 0 &&
            (best == m || mpz_cmpabs(h(i, c).get_mpz_t(), h(best, c).get_mpz_t()) < 0))
          best = i;
      if (best == m) break;
      swap_rows(h, pr, best);
      swap_rows(u, pr, best);
      bool done = true;
      for (std::size_t i = pr + 1; i < m; ++i) {
        if (sgn(h(i, c)) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(pr, c).get_mpz_t());
        row_submul(h, i, pr, q);
        row_submul(u, i, pr, q);
        if (sgn(h(i, c)) != 0) done = false;
      }
      if (done) break;
    }
    if (sgn(h(pr, c)) == 0) continue;
    if (sgn(h(pr, c)) < 0) {
      negate_row(h, pr);
      negate_row(u, pr);
    }
    for (std::size_t i = 0; i < pr; ++i) {
      mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(pr, c).get_mpz_t());
      if (sgn(q) == 0) continue;
      row_submul(h, i, pr, q);
      row_submul(u, i, pr, q);
    }
    ++pr;
  }
  out.rank = pr;
  return out;
}

std::optional<ZVector> solve_with(const SmithDecomposition& dec, std::span<const Integer> b) {
  // A x = b  <=>  S (V^-1 x) = U b
  const ZMatrix& u = dec.U;
  const ZMatrix& v = dec.V;
  if (u.empty() && dec.S.rows() != 0) throw std::invalid_argument("solve_with: U not tracked");
  if (b.size() != dec.S.rows()) throw std::invalid_argument("solve_with: dimension mismatch");
  ZVector ub = u * b;
  ZVector w(dec.S.cols());
  for (std::size_t k = 0; k < ub.size(); ++k) {
    if (k < dec.rank) {
      if (!mpz_divisible_p(ub[k].get_mpz_t(), dec.diagonal[k].get_mpz_t())) return std::nullopt;
      mpz_divexact(w[k].get_mpz_t(), ub[k].get_mpz_t(), dec.diagonal[k].get_mpz_t());
    } else if (sgn(ub[k]) != 0) {
      return std::nullopt;
    }
  }
  if (dec.S.cols() == 0) return w;
  return v * w;
}

std::optional<ZVector> solve_left(const SmithDecomposition& dec, std::span<const Integer> y) {
  // x A = y  <=>  (x U^-1) S = y V
  const ZMatrix& u = dec.U;
  const ZMatrix& v = dec.V;
  if (y.size() != dec.S.cols()) throw std::invalid_argument("solve_left: dimension mismatch");
  if (v.empty() && dec.S.cols() != 0) throw std::invalid_argument("solve_left: V not tracked");
  ZVector yv = dec.S.cols() == 0 ? ZVector{} : left_multiply(y, v);
  ZVector x(dec.S.rows());
  Integer coeff;
  for (std::size_t k = 0; k < yv.size(); ++k) {
    if (k < dec.rank) {
      if (!mpz_divisible_p(yv[k].get_mpz_t(), dec.diagonal[k].get_mpz_t())) return std::nullopt;
      mpz_divexact(coeff.get_mpz_t(), yv[k].get_mpz_t(), dec.diagonal[k].get_mpz_t());
      if (sgn(coeff) == 0) continue;
      auto ur = u.row(k);
      for (std::size_t c = 0; c < x.size(); ++c)
        if (sgn(ur[c]) != 0) mpz_addmul(x[c].get_mpz_t(), coeff.get_mpz_t(), ur[c].get_mpz_t());
    } else if (sgn(yv[k]) != 0) {
      return std::nullopt;
    }
  }
  return x;
}

std::optional<ZVector> solve_integer_system(const ZMatrix& a, std::span<const Integer> b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve: dimension mismatch");
  return solve_with(smith_normal_form(a), b);
}

ZMatrix kernel_basis(const ZMatrix& a) {
  // U A^T = H; the rows of U against zero rows of H span the left kernel of
  // A^T, i.e. the right kernel of A.
  HermiteForm hf = hermite_normal_form(a.transpose());
  const std::size_t n = a.cols();
  ZMatrix basis(n, n - hf.rank);
  for (std::size_t k = hf.rank; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) basis(i, k - hf.rank) = hf.U(k, i);
  return basis;
}

std::size_t rank(const ZMatrix& a) {
  return smith_normal_form(a, {.left = false, .right = false}).rank;
}

ZVector cokernel_invariant_factors(const ZMatrix& a) {
  return smith_normal_form(a, {.left = false, .right = false}).invariant_factors;
}

ZVector FpAbelianGroup::coordinates(std::span<const Integer> cycle) const {
  ZVector c = coordinate_map * cycle;
  for (std::size_t i = 0; i < invariant_factors.size(); ++i)
    mpz_fdiv_r(c[i].get_mpz_t(), c[i].get_mpz_t(), invariant_factors[i].get_mpz_t());
  return c;
}

FpAbelianGroup homology_of_pair(const ZMatrix& d_hi, const ZMatrix& d_lo) {
  const std::size_t n = d_lo.cols();
  if (d_hi.rows() != n)
    throw std::invalid_argument("homology_of_pair: d_hi rows must equal d_lo cols");
  if (!(d_lo * d_hi).is_zero())
    throw CompositionNotZero("homology_of_pair: d_lo * d_hi != 0");

  const ZMatrix cycles = kernel_basis(d_lo);  // n x k
  const std::size_t k = cycles.cols();

  // Left inverse of the cycle basis: U K V = [I; 0]  =>  L = V [I 0] U.
  ZMatrix left_inverse(k, n);
  if (k > 0) {
    SmithDecomposition kd = smith_normal_form(cycles);
    if (kd.rank != k || !kd.invariant_factors.empty())
      throw ConsistencyError("kernel basis does not span a saturated lattice");
    left_inverse = kd.V * kd.U.block(0, k, 0, n);
  }

  // Boundaries written in the cycle basis.
  ZMatrix relations = left_inverse * d_hi;  // k x m
  SmithDecomposition rd = smith_normal_form(
      relations, {.left = true, .right = false, .left_inverse = true});

  std::vector<std::size_t> kept;
  FpAbelianGroup out;
  for (std::size_t i = 0; i < rd.rank; ++i) {
    if (rd.diagonal[i] > 1) {
      kept.push_back(i);
      out.invariant_factors.push_back(rd.diagonal[i]);
    }
  }
  for (std::size_t i = rd.rank; i < k; ++i) kept.push_back(i);
  out.free_rank = k - rd.rank;

  const ZMatrix full_map = k > 0 ? rd.U * left_inverse : ZMatrix(0, n);
  const ZMatrix full_gens = k > 0 ? cycles * rd.U_inverse : ZMatrix(n, 0);
  out.coordinate_map = ZMatrix(kept.size(), n);
  out.generators = ZMatrix(n, kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) {
    for (std::size_t j = 0; j < n; ++j) {
      out.coordinate_map(c, j) = full_map(kept[c], j);
      out.generators(j, c) = full_gens(j, kept[c]);
    }
  }
  return out;
}

}  // namespace fpp
