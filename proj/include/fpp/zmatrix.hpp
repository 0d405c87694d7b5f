#pragma once

// Exact integer linear algebra over arbitrary-precision integers.
//
// Matrices act on column vectors unless a function says otherwise
// (`solve_left` works with row vectors). All routines are exact.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fpp {

using Integer = mpz_class;
using ZVector = std::vector<Integer>;

/// Dense row-major integer matrix.
class ZMatrix {
public:
  ZMatrix() = default;
  ZMatrix(std::size_t rows, std::size_t cols);
  ZMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static ZMatrix identity(std::size_t n);
  static ZMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ZMatrix diagonal(std::span<const Integer> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<Integer> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Integer> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  ZVector column(std::size_t j) const;

  ZMatrix transpose() const;
  bool is_zero() const;
  /// Sub-matrix of rows [r0, r1) and columns [c0, c1).
  ZMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;

  friend bool operator==(const ZMatrix&, const ZMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

ZMatrix operator*(const ZMatrix& a, const ZMatrix& b);
ZMatrix operator+(const ZMatrix& a, const ZMatrix& b);
ZMatrix operator-(const ZMatrix& a, const ZMatrix& b);
ZVector operator*(const ZMatrix& a, std::span<const Integer> x);
/// Row vector times matrix.
ZVector left_multiply(std::span<const Integer> x, const ZMatrix& a);

/// Horizontal concatenation of [a | b].
ZMatrix hconcat(const ZMatrix& a, const ZMatrix& b);
/// Block diagonal diag(a, b).
ZMatrix block_diagonal(const ZMatrix& a, const ZMatrix& b);

std::string to_string(const ZMatrix& m);

/// Determinant via fraction-free (Bareiss) elimination. Square input only.
Integer determinant(const ZMatrix& a);

struct HermiteForm {
  ZMatrix H;
  ZMatrix U;
  std::size_t rank = 0;
};

/// Row-style Hermite normal form: U * A = H with U unimodular. Pivots are
/// positive; entries above a pivot lie in [0, pivot). Zero rows come last.
HermiteForm hermite_normal_form(const ZMatrix& a);

struct SmithOptions {
  bool left = true;           ///< track U
  bool right = true;          ///< track V
  bool left_inverse = false;  ///< track U^-1
  bool right_inverse = false; ///< track V^-1
};

/// U * A * V = S. Transforms that were not requested are left empty.
struct SmithDecomposition {
  ZMatrix S;
  ZMatrix U;
  ZMatrix V;
  ZMatrix U_inverse;
  ZMatrix V_inverse;
  std::size_t rank = 0;
  /// Diagonal entries d_1 | ... | d_rank, all positive.
  ZVector diagonal;
  /// Diagonal entries greater than one.
  ZVector invariant_factors;
};

SmithDecomposition smith_normal_form(const ZMatrix& a, SmithOptions options = {});

/// Solves A x = b. Requires U and V in `dec`.
std::optional<ZVector> solve_with(const SmithDecomposition& dec,
                                  std::span<const Integer> b);
/// Solves x A = y for a row vector x. Requires U and V in `dec`.
std::optional<ZVector> solve_left(const SmithDecomposition& dec,
                                  std::span<const Integer> y);
/// Solves A x = b over the integers; nullopt when no integer solution exists.
std::optional<ZVector> solve_integer_system(const ZMatrix& a,
                                            std::span<const Integer> b);

/// Columns form a lattice basis of {x : A x = 0}.
ZMatrix kernel_basis(const ZMatrix& a);

std::size_t rank(const ZMatrix& a);

/// A finitely generated abelian group presented as a subquotient
/// ker(d_lo) / im(d_hi) of an ambient lattice Z^n, together with the data
/// needed to read off homology coordinates of cycles.
struct FpAbelianGroup {
  std::size_t free_rank = 0;
  ZVector invariant_factors;
  /// (#factors + free_rank) x n. Row i maps an ambient cycle to its i-th
  /// coordinate (torsion coordinates first, then free ones).
  ZMatrix coordinate_map;
  /// n x (#factors + free_rank). Column i is a cycle whose coordinates are e_i.
  ZMatrix generators;

  std::size_t coordinate_count() const { return invariant_factors.size() + free_rank; }
  bool trivial() const { return coordinate_count() == 0; }
  /// Coordinates of an ambient cycle; torsion coordinates reduced into [0, d_i).
  ZVector coordinates(std::span<const Integer> cycle) const;
};

/// Homology ker(d_lo) / im(d_hi) for maps Z^m -> Z^n -> Z^p given as
/// matrices d_hi (n x m) and d_lo (p x n). Throws CompositionNotZero when
/// d_lo * d_hi != 0.
FpAbelianGroup homology_of_pair(const ZMatrix& d_hi, const ZMatrix& d_lo);

/// Invariant factors (entries > 1) of the cokernel of A.
ZVector cokernel_invariant_factors(const ZMatrix& a);

}  // namespace fpp
