#include "support.hpp"

#include <doctest.h>

using namespace fpp;
using namespace fpp::test;

namespace {

bool unimodular(const ZMatrix& m) {
  const Integer d = determinant(m);
  return d == 1 || d == -1;
}

bool is_diagonal_chain(const SmithDecomposition& s) {
  for (std::size_t i = 0; i < s.S.rows(); ++i)
    for (std::size_t j = 0; j < s.S.cols(); ++j)
      if (i != j && s.S(i, j) != 0) return false;
  for (std::size_t i = 0; i < s.rank; ++i) {
    if (s.S(i, i) <= 0) return false;
    if (i + 1 < s.rank && !mpz_divisible_p(s.S(i + 1, i + 1).get_mpz_t(), s.S(i, i).get_mpz_t())) return false;
  }
  for (std::size_t i = s.rank; i < std::min(s.S.rows(), s.S.cols()); ++i)
    if (s.S(i, i) != 0) return false;
  return true;
}

// b lies in the column lattice of A iff adding it leaves the Hermite form unchanged.
bool in_column_lattice(const ZMatrix& a, const ZVector& b) {
  ZMatrix extended(a.cols() + 1, a.rows());
  const ZMatrix at = a.transpose();
  for (std::size_t i = 0; i < at.rows(); ++i)
    for (std::size_t j = 0; j < at.cols(); ++j) extended(i, j) = at(i, j);
  for (std::size_t j = 0; j < b.size(); ++j) extended(a.cols(), j) = b[j];
  const HermiteForm h1 = hermite_normal_form(at), h2 = hermite_normal_form(extended);
  if (h1.rank != h2.rank) return false;
  return h1.H.block(0, h1.rank, 0, a.rows()) == h2.H.block(0, h2.rank, 0, a.rows());
}

}  // namespace

TEST_CASE("smith form of small examples") {
  SUBCASE("diag(2,3) becomes diag(1,6)") {
    const auto s = smith_normal_form(ZMatrix{{2, 0}, {0, 3}});
    CHECK(s.diagonal == ZVector{1, 6});
    CHECK(s.invariant_factors == ZVector{6});
  }
  SUBCASE("exponent matrix of the order-243 fixture") {
    const auto p = parse_presentation(kG);
    CHECK(cokernel_invariant_factors(exponent_matrix(p).transpose()) == ZVector{3, 3});
  }
  SUBCASE("zero matrix") {
    const auto s = smith_normal_form(ZMatrix::zero(3, 2));
    CHECK(s.rank == 0);
    CHECK(s.invariant_factors.empty());
    CHECK(s.U * ZMatrix::zero(3, 2) * s.V == s.S);
  }
  SUBCASE("empty shapes") {
    CHECK(smith_normal_form(ZMatrix(0, 4)).rank == 0);
    CHECK(smith_normal_form(ZMatrix(4, 0)).rank == 0);
    CHECK(kernel_basis(ZMatrix(0, 3)) == ZMatrix::identity(3));
  }
  SUBCASE("1x1 negative entry") {
    const auto s = smith_normal_form(ZMatrix{{-4}});
    CHECK(s.diagonal == ZVector{4});
    CHECK(s.U * ZMatrix{{-4}} * s.V == s.S);
  }
}

TEST_CASE("smith form property suite") {
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(uniform(1, 6));
    const std::size_t cols = static_cast<std::size_t>(uniform(1, 6));
    const long bound = trial % 3 == 0 ? 50 : 6;
    ZMatrix a = random_matrix(rows, cols, bound);
    if (trial % 5 == 0 && rows > 1)  // force rank deficiency
      for (std::size_t j = 0; j < cols; ++j) a(rows - 1, j) = a(0, j) * 2 - a(rows / 2, j);
    CAPTURE(to_string(a));
    const auto s = smith_normal_form(a, {.left = true, .right = true, .left_inverse = true, .right_inverse = true});
    REQUIRE(s.U * a * s.V == s.S);
    CHECK(unimodular(s.U));
    CHECK(unimodular(s.V));
    CHECK(s.U * s.U_inverse == ZMatrix::identity(rows));
    CHECK(s.V * s.V_inverse == ZMatrix::identity(cols));
    CHECK(is_diagonal_chain(s));
    // Determinantal divisors: d_1 ... d_k equals the gcd of the k x k minors.
    if (rows <= 4 && cols <= 4) {
      const auto dd = determinantal_divisors(a);
      Integer prefix = 1;
      for (std::size_t k = 0; k < dd.size(); ++k) {
        if (k < s.rank) {
          prefix *= s.diagonal[k];
          CHECK(dd[k] == prefix);
        } else {
          CHECK(dd[k] == 0);
        }
      }
    }
  }
}

TEST_CASE("hermite form property suite") {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(uniform(1, 6));
    const std::size_t cols = static_cast<std::size_t>(uniform(1, 6));
    const ZMatrix a = random_matrix(rows, cols, 9);
    const auto h = hermite_normal_form(a);
    REQUIRE(h.U * a == h.H);
    CHECK(unimodular(h.U));
    CHECK(h.rank == rank(a));
    std::size_t last_pivot = 0;
    for (std::size_t i = 0; i < h.rank; ++i) {
      std::size_t j = 0;
      while (j < cols && h.H(i, j) == 0) ++j;
      REQUIRE(j < cols);
      CHECK(h.H(i, j) > 0);
      if (i > 0) CHECK(j > last_pivot);
      last_pivot = j;
      for (std::size_t above = 0; above < i; ++above) {
        CHECK(h.H(above, j) >= 0);
        CHECK(h.H(above, j) < h.H(i, j));
      }
    }
    for (std::size_t i = h.rank; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) CHECK(h.H(i, j) == 0);
  }
}

TEST_CASE("solve by substitution") {
  int solvable = 0, unsolvable = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(uniform(1, 5));
    const std::size_t cols = static_cast<std::size_t>(uniform(1, 5));
    const ZMatrix a = random_matrix(rows, cols, 7);
    ZVector b(rows);
    if (trial % 2 == 0) {
      ZVector x(cols);
      for (auto& v : x) v = uniform(-20, 20);
      b = a * x;
    } else {
      for (auto& v : b) v = uniform(-20, 20);
    }
    const auto x = solve_integer_system(a, b);
    CHECK(x.has_value() == in_column_lattice(a, b));
    if (x) {
      ++solvable;
      CHECK(a * *x == b);
    } else {
      ++unsolvable;
    }
    // Row-vector form on the transpose.
    const auto dec = smith_normal_form(a.transpose());
    const auto y = solve_left(dec, b);
    CHECK(y.has_value() == x.has_value());
    if (y) CHECK(left_multiply(*y, a.transpose()) == b);
  }
  CHECK(solvable >= 150);
  CHECK(unsolvable > 0);
}

TEST_CASE("solve reports no solution") {
  CHECK_FALSE(solve_integer_system(ZMatrix{{2}}, ZVector{1}).has_value());
  CHECK_FALSE(solve_integer_system(ZMatrix{{2, 4}, {6, 8}}, ZVector{1, 0}).has_value());
  CHECK(solve_integer_system(ZMatrix{{2, 3}}, ZVector{1}).has_value());
  CHECK_FALSE(solve_integer_system(ZMatrix{{1}, {1}}, ZVector{1, 2}).has_value());
}

TEST_CASE("kernel basis is a saturated lattice basis") {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(uniform(1, 5));
    const std::size_t cols = static_cast<std::size_t>(uniform(1, 6));
    ZMatrix a = random_matrix(rows, cols, 5);
    const ZMatrix k = kernel_basis(a);
    CHECK(k.cols() == cols - rank(a));
    CHECK((a * k).is_zero());
    if (k.cols() > 0) {
      const auto s = smith_normal_form(k);
      CHECK(s.rank == k.cols());
      CHECK(s.invariant_factors.empty());
    }
  }
}

TEST_CASE("determinant agrees with cofactor expansion") {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform(1, 5));
    const ZMatrix a = random_matrix(n, n, 9);
    CHECK(determinant(a) == laplace_determinant(a));
  }
  CHECK_THROWS_AS(determinant(ZMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("homology of a pair") {
  SUBCASE("Z --2--> Z --0--> 0 gives Z_2") {
    const auto h = homology_of_pair(ZMatrix{{2}}, ZMatrix(0, 1));
    CHECK(h.invariant_factors == ZVector{2});
    CHECK(h.free_rank == 0);
    CHECK(h.coordinates(ZVector{3}) == ZVector{1});
  }
  SUBCASE("composition must vanish") {
    CHECK_THROWS_AS(homology_of_pair(ZMatrix{{1}}, ZMatrix{{1}}), CompositionNotZero);
  }
  SUBCASE("cycle, boundary and torsion coordinates") {
    // Z^3 -> Z^3 with image 2Z + 0 + 0 inside the kernel Z^2 + 0 of d_lo.
    const ZMatrix d_hi{{2, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    const ZMatrix d_lo{{0, 0, 1}};
    const auto h = homology_of_pair(d_hi, d_lo);
    CHECK(h.invariant_factors == ZVector{2});
    CHECK(h.free_rank == 1);
    CHECK(h.coordinates(ZVector{2, 0, 0}) == ZVector{0, 0});
    for (std::size_t c = 0; c < h.coordinate_count(); ++c) {
      ZVector e(h.coordinate_count(), 0);
      e[c] = 1;
      CHECK(h.coordinates(h.generators.column(c)) == e);
    }
  }
  SUBCASE("random pairs") {
    for (int trial = 0; trial < 200; ++trial) {
      // d_hi = K * R maps into ker d_lo by construction.
      const std::size_t p = static_cast<std::size_t>(uniform(1, 3));
      const std::size_t n = static_cast<std::size_t>(uniform(1, 5));
      const std::size_t m = static_cast<std::size_t>(uniform(1, 5));
      const ZMatrix d_lo = random_matrix(p, n, 3);
      const ZMatrix k = kernel_basis(d_lo);
      const ZMatrix d_hi = k * random_matrix(k.cols(), m, 4);
      const auto h = homology_of_pair(d_hi, d_lo);
      // Invariant factors and rank follow from the relation matrix in cycle coordinates.
      CHECK(h.free_rank + rank(d_hi) == k.cols());
      for (std::size_t c = 0; c < h.coordinate_count(); ++c) {
        CHECK((d_lo * h.generators.column(c)) == ZVector(p, 0));
        ZVector e(h.coordinate_count(), 0);
        e[c] = 1;
        CHECK(h.coordinates(h.generators.column(c)) == e);
      }
      for (std::size_t j = 0; j < m; ++j)
        CHECK(h.coordinates(d_hi.column(j)) == ZVector(h.coordinate_count(), 0));
      Integer prod = 1, oracle = 1;
      for (const auto& d : h.invariant_factors) prod *= d;
      const auto s = smith_normal_form(d_hi, {.left = false, .right = false});
      // Torsion of coker(d_hi) inside Z^n equals the torsion of H because ker d_lo is saturated.
      for (const auto& d : s.invariant_factors) oracle *= d;
      CHECK(prod == oracle);
    }
  }
}
