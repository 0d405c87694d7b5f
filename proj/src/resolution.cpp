#include "fpp/resolution.hpp"

#include "fpp/errors.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace fpp {

GroupRingElement GroupRingElement::basis(Element g, const Integer& coeff) {
  GroupRingElement e;
  if (sgn(coeff) != 0) e.terms_.emplace_back(g, coeff);
  return e;
}

GroupRingElement GroupRingElement::from_dense(std::span<const Integer> coeffs) {
  GroupRingElement e;
  for (std::size_t g = 0; g < coeffs.size(); ++g)
    if (sgn(coeffs[g]) != 0) e.terms_.emplace_back(static_cast<Element>(g), coeffs[g]);
  return e;
}

GroupRingElement GroupRingElement::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  GroupRingElement e;
  for (auto& t : terms) {
    if (!e.terms_.empty() && e.terms_.back().first == t.first) {
      e.terms_.back().second += t.second;
      continue;
    }
    if (!e.terms_.empty() && sgn(e.terms_.back().second) == 0) e.terms_.pop_back();
    e.terms_.push_back(std::move(t));
  }
  if (!e.terms_.empty() && sgn(e.terms_.back().second) == 0) e.terms_.pop_back();
  return e;
}

Integer GroupRingElement::coefficient(Element g) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), g,
                             [](const Term& t, Element x) { return t.first < x; });
  return it != terms_.end() && it->first == g ? it->second : Integer(0);
}

Integer GroupRingElement::augmentation() const {
  Integer total = 0;
  for (const auto& [g, c] : terms_) total += c;
  return total;
}

void GroupRingElement::accumulate(std::span<Integer> out, const Integer& scale) const {
  for (const auto& [g, c] : terms_) mpz_addmul(out[g].get_mpz_t(), scale.get_mpz_t(), c.get_mpz_t());
}

GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
  std::vector<GroupRingElement::Term> all = a.terms();
  all.insert(all.end(), b.terms().begin(), b.terms().end());
  return GroupRingElement::from_terms(std::move(all));
}

GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) {
  std::vector<GroupRingElement::Term> all = a.terms();
  for (const auto& [g, c] : b.terms()) all.emplace_back(g, -c);
  return GroupRingElement::from_terms(std::move(all));
}

GroupRingElement multiply(const GroupTable& t, const GroupRingElement& a, const GroupRingElement& b) {
  std::vector<GroupRingElement::Term> all;
  all.reserve(a.terms().size() * b.terms().size());
  for (const auto& [g, c] : a.terms())
    for (const auto& [h, d] : b.terms()) all.emplace_back(t.multiply(g, h), c * d);
  return GroupRingElement::from_terms(std::move(all));
}

GroupRingElement twist(const GroupRingElement& a, std::span<const Element> phi) {
  std::vector<GroupRingElement::Term> all;
  all.reserve(a.terms().size());
  for (const auto& [g, c] : a.terms()) all.emplace_back(phi[g], c);
  return GroupRingElement::from_terms(std::move(all));
}

GroupRingElement project(const GroupTable& t, const FreeAlgebraSum& s) {
  std::vector<GroupRingElement::Term> all;
  for (const auto& [w, c] : s.terms()) all.emplace_back(evaluate_word(t, w), Integer(static_cast<long>(c)));
  return GroupRingElement::from_terms(std::move(all));
}

bool GroupRingMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const auto& e) { return e.is_zero(); });
}

GroupRingMatrix multiply(const GroupTable& t, const GroupRingMatrix& a, const GroupRingMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("group ring product: dimension mismatch");
  GroupRingMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < b.cols(); ++k) {
      std::vector<GroupRingElement::Term> all;
      for (std::size_t j = 0; j < a.cols(); ++j)
        for (const auto& [g, x] : a(i, j).terms())
          for (const auto& [h, y] : b(j, k).terms()) all.emplace_back(t.multiply(g, h), x * y);
      c(i, k) = GroupRingElement::from_terms(std::move(all));
    }
  }
  return c;
}

GroupRingMatrix identity_matrix(std::size_t n) {
  GroupRingMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = GroupRingElement::basis(GroupTable::identity());
  return m;
}

ZMatrix realize(const GroupTable& t, const GroupRingMatrix& d) {
  const std::size_t n = t.order();
  ZMatrix out(d.rows() * n, d.cols() * n);
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      for (const auto& [h, c] : d(i, j).terms())
        for (std::size_t g = 0; g < n; ++g)
          out(i * n + g, j * n + t.multiply(static_cast<Element>(g), h)) += c;
  return out;
}

std::vector<GroupRingElement> to_group_ring(std::span<const Integer> v, std::size_t order) {
  if (order == 0 || v.size() % order != 0) throw std::invalid_argument("to_group_ring: bad length");
  std::vector<GroupRingElement> out;
  for (std::size_t i = 0; i < v.size(); i += order)
    out.push_back(GroupRingElement::from_dense(v.subspan(i, order)));
  return out;
}

ZMatrix FreeResolution3::d3_integer() const { return realize(group, d3); }

FreeResolution3 build_resolution(const GroupTable& t, const Presentation& p) {
  validate(p);
  if (p.generator_count() != t.generator_count())
    throw std::invalid_argument("build_resolution: table and presentation disagree");
  for (const Word& w : p.relators)
    if (evaluate_word(t, w) != GroupTable::identity())
      throw std::invalid_argument("build_resolution: table was not enumerated from this presentation");

  const std::size_t g = p.generator_count(), r = p.relator_count(), n = t.order();
  FreeResolution3 res{.group = t};
  res.rank1 = g;
  res.rank2 = r;

  res.d1 = GroupRingMatrix(g, 1);
  for (std::size_t j = 0; j < g; ++j)
    res.d1(j, 0) = GroupRingElement::basis(t.generator_element(j)) -
                   GroupRingElement::basis(GroupTable::identity());

  res.d2 = GroupRingMatrix(r, g);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < g; ++j) res.d2(i, j) = project(t, fox_derivative(p.relators[i], j));

  if (!multiply(t, res.d2, res.d1).is_zero())
    throw ConsistencyError("resolution: d1 * d2 != 0");

  res.d1_integer = realize(t, res.d1);
  res.d2_integer = realize(t, res.d2);
  res.d2_smith = smith_normal_form(res.d2_integer, {.left = true, .right = true});

  const std::size_t nullity_d1 = g * n - rank(res.d1_integer);
  if (res.d2_smith.rank != nullity_d1)
    throw ConsistencyError("resolution: not exact at F1");

  // Rows of U past the rank are a lattice basis of the left kernel of d2.
  const std::size_t m = r * n - res.d2_smith.rank;
  res.rank3 = m;
  res.d3 = GroupRingMatrix(m, r);
  for (std::size_t k = 0; k < m; ++k) {
    auto blocks = to_group_ring(res.d2_smith.U.row(res.d2_smith.rank + k), n);
    for (std::size_t i = 0; i < r; ++i) res.d3(k, i) = std::move(blocks[i]);
  }
  if (!multiply(t, res.d3, res.d2).is_zero())
    throw ConsistencyError("resolution: d2 * d3 != 0");
  return res;
}

TrivialComplex tensor_trivial(const FreeResolution3& r) {
  auto augment = [](const GroupRingMatrix& d) {
    ZMatrix out(d.cols(), d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j) out(j, i) = d(i, j).augmentation();
    return out;
  };
  return {augment(r.d1), augment(r.d2), augment(r.d3)};
}

H2Data h2_of_group(const FreeResolution3& r) {
  TrivialComplex c = tensor_trivial(r);
  return {homology_of_pair(c.d3, c.d2)};
}

FpAbelianGroup h1_of_group(const FreeResolution3& r) {
  TrivialComplex c = tensor_trivial(r);
  return homology_of_pair(c.d2, c.d1);
}

ChainMap3 lift_chain_map(const FreeResolution3& r, const Presentation& p,
                         const GroupEndomorphism& phi, const LiftOptions& options) {
  const GroupTable& t = r.group;
  const std::size_t g = r.rank1, rel = r.rank2, n = t.order();
  if (p.generator_count() != g || p.relator_count() != rel)
    throw std::invalid_argument("lift_chain_map: presentation does not match the resolution");
  const std::vector<Element> phi_el = phi.element_images(t);

  std::vector<Word> words = options.image_words;
  if (words.empty())
    for (std::size_t j = 0; j < g; ++j) words.push_back(t.representative_word(phi.image(j)));
  if (words.size() != g) throw std::invalid_argument("lift_chain_map: wrong number of image words");
  for (std::size_t j = 0; j < g; ++j)
    if (evaluate_word(t, words[j]) != phi.image(j))
      throw std::invalid_argument("lift_chain_map: image word does not represent phi(x_j)");

  ChainMap3 c{phi, GroupRingMatrix(g, g), GroupRingMatrix(rel, rel)};
  for (std::size_t j = 0; j < g; ++j)
    for (std::size_t k = 0; k < g; ++k) c.f1(j, k) = project(t, fox_derivative(words[j], k));

  std::mt19937_64 rng(options.perturbation_seed);
  const std::size_t kernel_rows = r.d2_smith.U.rows() - r.d2_smith.rank;
  for (std::size_t i = 0; i < rel; ++i) {
    // target = f1(d2(e_i)) = sum_j phi(d2_ij) f1(e_j)
    ZVector target(g * n);
    for (std::size_t j = 0; j < g; ++j) {
      const GroupRingElement a = twist(r.d2(i, j), phi_el);
      if (a.is_zero()) continue;
      for (std::size_t k = 0; k < g; ++k) {
        if (c.f1(j, k).is_zero()) continue;
        multiply(t, a, c.f1(j, k)).accumulate(std::span(target).subspan(k * n, n));
      }
    }
    std::optional<ZVector> z = solve_left(r.d2_smith, target);
    if (!z) throw ConsistencyError("lift_chain_map: lifting system has no integer solution");
    if (options.perturbation_seed != 0 && kernel_rows > 0) {
      std::uniform_int_distribution<std::size_t> pick(0, kernel_rows - 1);
      std::uniform_int_distribution<long> coeff(-2, 2);
      for (int s = 0; s < 4; ++s) {
        const Integer q = coeff(rng);
        const auto row = r.d2_smith.U.row(r.d2_smith.rank + pick(rng));
        for (std::size_t x = 0; x < row.size(); ++x)
          if (sgn(row[x]) != 0) mpz_addmul((*z)[x].get_mpz_t(), q.get_mpz_t(), row[x].get_mpz_t());
      }
    }
    auto blocks = to_group_ring(*z, n);
    for (std::size_t k = 0; k < rel; ++k) c.f2(i, k) = std::move(blocks[k]);
  }
  verify_chain_map(r, c);
  return c;
}

void verify_chain_map(const FreeResolution3& r, const ChainMap3& c) {
  const GroupTable& t = r.group;
  const std::vector<Element> phi_el = c.endomorphism.element_images(t);

  // d1 f1 = f0 d1: row j of f1 * d1 is phi(x_j) - 1.
  const GroupRingMatrix f1d1 = multiply(t, c.f1, r.d1);
  for (std::size_t j = 0; j < r.rank1; ++j) {
    const GroupRingElement expected = GroupRingElement::basis(c.endomorphism.image(j)) -
                                      GroupRingElement::basis(GroupTable::identity());
    if (!(f1d1(j, 0) == expected)) throw ConsistencyError("chain map: d1 f1 != f0 d1");
  }

  // d2 f2 = f1 d2 with the twisted scalars of d2 pushed through phi.
  GroupRingMatrix d2_twisted(r.d2.rows(), r.d2.cols());
  for (std::size_t i = 0; i < r.d2.rows(); ++i)
    for (std::size_t j = 0; j < r.d2.cols(); ++j) d2_twisted(i, j) = twist(r.d2(i, j), phi_el);
  if (!(multiply(t, c.f2, r.d2) == multiply(t, d2_twisted, c.f1)))
    throw ConsistencyError("chain map: d2 f2 != f1 d2");
}

std::vector<Integer> H2Endo::key() const {
  std::vector<Integer> k;
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    for (std::size_t j = 0; j < matrix.cols(); ++j) k.push_back(matrix(i, j));
  return k;
}

Integer H2Endo::trace() const {
  Integer s = 0;
  for (std::size_t i = 0; i < matrix.rows() && i < matrix.cols(); ++i) s += matrix(i, i);
  return s;
}

namespace {

void reduce_rows(ZMatrix& m, const ZVector& moduli) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i >= moduli.size() || sgn(moduli[i]) == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      mpz_fdiv_r(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), moduli[i].get_mpz_t());
  }
}

}  // namespace

H2Endo induced_h2(const ChainMap3& c, const H2Data& h) {
  const FpAbelianGroup& hg = h.h2;
  const std::size_t rel = c.f2.rows();
  const std::size_t k = hg.coordinate_count();
  // Column convention of the tensored f2: column i is the augmentation of f2(e_i).
  ZMatrix tensored(rel, rel);
  for (std::size_t i = 0; i < rel; ++i)
    for (std::size_t j = 0; j < rel; ++j) tensored(j, i) = c.f2(i, j).augmentation();

  H2Endo out{ZMatrix(k, k), hg.invariant_factors};
  out.moduli.resize(k, 0);  // free coordinates are exact
  for (std::size_t j = 0; j < k; ++j) {
    const ZVector image = tensored * hg.generators.column(j);
    const ZVector coords = hg.coordinates(image);
    for (std::size_t i = 0; i < k; ++i) out.matrix(i, j) = coords[i];
  }
  return out;
}

H2Endo compose(const H2Endo& a, const H2Endo& b) {
  H2Endo out{a.matrix * b.matrix, a.moduli};
  reduce_rows(out.matrix, out.moduli);
  return out;
}

FpAbelianGroup h2_via_bar_complex(const GroupTable& t, std::size_t cap) {
  const std::size_t n = t.order();
  if (n > cap) throw OrderTooLarge(n, cap);
  const std::size_t k = n - 1;  // non-identity elements 1..n-1
  auto idx1 = [](Element a) { return static_cast<std::size_t>(a - 1); };
  auto idx2 = [k](Element a, Element b) { return (a - 1) * k + (b - 1); };

  // d2[a|b] = [b] - [ab] + [a]
  ZMatrix d2(k, k * k);
  for (Element a = 1; a < n; ++a) {
    for (Element b = 1; b < n; ++b) {
      const std::size_t col = idx2(a, b);
      d2(idx1(b), col) += 1;
      const Element ab = t.multiply(a, b);
      if (ab != 0) d2(idx1(ab), col) -= 1;
      d2(idx1(a), col) += 1;
    }
  }
  // d3[a|b|c] = [b|c] - [ab|c] + [a|bc] - [a|b]
  ZMatrix d3(k * k, k * k * k);
  for (Element a = 1; a < n; ++a) {
    for (Element b = 1; b < n; ++b) {
      const Element ab = t.multiply(a, b);
      for (Element c = 1; c < n; ++c) {
        const std::size_t col = ((a - 1) * k + (b - 1)) * k + (c - 1);
        const Element bc = t.multiply(b, c);
        d3(idx2(b, c), col) += 1;
        if (ab != 0) d3(idx2(ab, c), col) -= 1;
        if (bc != 0) d3(idx2(a, bc), col) += 1;
        d3(idx2(a, b), col) -= 1;
      }
    }
  }
  return homology_of_pair(d3, d2);
}

}  // namespace fpp
