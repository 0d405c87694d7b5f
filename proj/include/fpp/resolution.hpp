#pragma once

// Free resolution F3 -> F2 -> F1 -> F0 -> Z of the trivial module over the
// integral group ring of an enumerated group, and the induced action of
// endomorphisms on H_2.
//
// Conventions: modules are left modules and free-module elements are row
// vectors, so a map with matrix D sends v to v * D. A map twisted by phi
// satisfies f(g * v) = phi(g) * f(v). The tensored complex (coefficients
// replaced by augmentations) is returned in column-vector form to match
// `homology_of_pair`.

#include "fpp/enumerator.hpp"
#include "fpp/group_endomorphism.hpp"
#include "fpp/presentation.hpp"
#include "fpp/zmatrix.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fpp {

/// Element of Z[G] with finite support, terms sorted by element.
class GroupRingElement {
public:
  using Term = std::pair<Element, Integer>;

  GroupRingElement() = default;
  static GroupRingElement basis(Element g, const Integer& coeff = 1);
  /// Drops zero coefficients.
  static GroupRingElement from_dense(std::span<const Integer> coeffs);
  /// Sorts, merges repeated elements and drops zero coefficients.
  static GroupRingElement from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Integer coefficient(Element g) const;
  Integer augmentation() const;
  /// out[g] += scale * coeff(g)
  void accumulate(std::span<Integer> out, const Integer& scale = 1) const;

  friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

private:
  std::vector<Term> terms_;
};

GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b);
GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b);
GroupRingElement multiply(const GroupTable& t, const GroupRingElement& a, const GroupRingElement& b);
/// sum_g a_g phi(g), with phi given on all elements.
GroupRingElement twist(const GroupRingElement& a, std::span<const Element> phi);
/// Image of a free-group-ring element under the projection onto Z[G].
GroupRingElement project(const GroupTable& t, const FreeAlgebraSum& s);

/// Dense row-major matrix over Z[G].
class GroupRingMatrix {
public:
  GroupRingMatrix() = default;
  GroupRingMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  GroupRingElement& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const GroupRingElement& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  bool is_zero() const;

  friend bool operator==(const GroupRingMatrix&, const GroupRingMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GroupRingElement> data_;
};

GroupRingMatrix multiply(const GroupTable& t, const GroupRingMatrix& a, const GroupRingMatrix& b);
GroupRingMatrix identity_matrix(std::size_t n);

/// Integer matrix of the Z-linear map v -> v * D on Z[G]^rows, with basis
/// element g * e_i at index i * |G| + g.
ZMatrix realize(const GroupTable& t, const GroupRingMatrix& d);

/// Group-ring matrix of a realized row vector block: entry i is the element
/// with coefficients v[i*|G| .. (i+1)*|G|).
std::vector<GroupRingElement> to_group_ring(std::span<const Integer> v, std::size_t order);

struct FreeResolution3 {
  GroupTable group;
  /// Ranks of F0..F3 over Z[G].
  std::size_t rank0 = 1, rank1 = 0, rank2 = 0, rank3 = 0;
  GroupRingMatrix d1{};  // rank1 x 1,  d1(e_j) = x_j - 1
  GroupRingMatrix d2{};  // rank2 x rank1, Fox derivatives
  GroupRingMatrix d3{};  // rank3 x rank2, lattice basis of ker d2
  ZMatrix d1_integer{};  // rank1|G| x |G|
  ZMatrix d2_integer{};  // rank2|G| x rank1|G|
  /// Smith decomposition of d2_integer with U and V, shared by every lift.
  SmithDecomposition d2_smith{};

  /// Integer realization of d3, size rank3|G| x rank2|G|. Built on demand.
  ZMatrix d3_integer() const;
};

FreeResolution3 build_resolution(const GroupTable& t, const Presentation& p);

/// Z tensored with the resolution, as column-convention integer matrices:
/// d1: Z^g -> Z, d2: Z^r -> Z^g, d3: Z^m -> Z^r.
struct TrivialComplex {
  ZMatrix d1;
  ZMatrix d2;
  ZMatrix d3;
};

TrivialComplex tensor_trivial(const FreeResolution3& r);

struct H2Data {
  /// Homology at Z^r of the tensored complex.
  FpAbelianGroup h2;
  const ZVector& invariant_factors() const { return h2.invariant_factors; }
};

H2Data h2_of_group(const FreeResolution3& r);
/// Homology of the tensored complex at degree 1 (the abelianization).
FpAbelianGroup h1_of_group(const FreeResolution3& r);

/// phi-equivariant chain map F -> F over phi, with f0 the identity of Z[G].
struct ChainMap3 {
  GroupEndomorphism endomorphism;
  GroupRingMatrix f1;  // g x g
  GroupRingMatrix f2;  // r x r
};

struct LiftOptions {
  /// Words representing phi(x_j); empty means the group table's
  /// representative words.
  std::vector<Word> image_words;
  /// Nonzero: add a pseudo-random combination of ker(d2) to each f2 row,
  /// giving a different but equally valid lift.
  std::uint64_t perturbation_seed = 0;
};

ChainMap3 lift_chain_map(const FreeResolution3& r, const Presentation& p,
                         const GroupEndomorphism& phi, const LiftOptions& options = {});

/// Throws ConsistencyError if the twisted chain-map identities fail.
void verify_chain_map(const FreeResolution3& r, const ChainMap3& c);

/// Induced endomorphism of H_2 in homology coordinates. Entry (i, j) is
/// reduced into [0, d_i).
struct H2Endo {
  ZMatrix matrix;
  ZVector moduli;

  friend bool operator==(const H2Endo& a, const H2Endo& b) { return a.key() == b.key(); }
  friend bool operator<(const H2Endo& a, const H2Endo& b) {
    const auto ka = a.key(), kb = b.key();
    return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end());
  }

  /// Entries row-major, for ordering.
  std::vector<Integer> key() const;
  Integer trace() const;
};

H2Endo induced_h2(const ChainMap3& c, const H2Data& h);

/// Product a * b reduced by the moduli of `a`.
H2Endo compose(const H2Endo& a, const H2Endo& b);

inline constexpr std::size_t kBarOracleCap = 16;

/// Degree-2 homology of the normalized bar complex, independent of any
/// presentation. Throws OrderTooLarge if |G| > cap.
FpAbelianGroup h2_via_bar_complex(const GroupTable& t, std::size_t cap = kBarOracleCap);

}  // namespace fpp
