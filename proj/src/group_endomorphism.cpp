#include "fpp/group_endomorphism.hpp"

#include <stdexcept>

namespace fpp {

Element evaluate_substituted(const GroupTable& t, const Word& w, const std::vector<Element>& images) {
  Element x = GroupTable::identity();
  for (const Letter& l : w.letters()) {
    const Element y = power(t, images.at(l.gen), l.exp);
    x = t.multiply(x, y);
  }
  return x;
}

GroupEndomorphism::GroupEndomorphism(const GroupTable& t, const Presentation& p,
                                     std::vector<Element> images)
    : images_(std::move(images)) {
  if (images_.size() != p.generator_count())
    throw std::invalid_argument("endomorphism: wrong number of generator images");
  for (Element e : images_)
    if (e >= t.order()) throw std::invalid_argument("endomorphism: image out of range");
  for (const Word& r : p.relators)
    if (evaluate_substituted(t, r, images_) != GroupTable::identity())
      throw std::invalid_argument("endomorphism: a relator does not map to the identity");
}

GroupEndomorphism GroupEndomorphism::identity(const GroupTable& t, const Presentation& p) {
  std::vector<Element> images;
  for (std::size_t j = 0; j < p.generator_count(); ++j) images.push_back(t.generator_element(j));
  return {t, p, std::move(images)};
}

GroupEndomorphism GroupEndomorphism::trivial(const GroupTable& t, const Presentation& p) {
  return {t, p, std::vector<Element>(p.generator_count(), GroupTable::identity())};
}

std::vector<Element> GroupEndomorphism::element_images(const GroupTable& t) const {
  std::vector<Element> out(t.order());
  for (std::size_t e = 0; e < t.order(); ++e)
    out[e] = evaluate_substituted(t, t.representative_word(static_cast<Element>(e)), images_);
  return out;
}

GroupEndomorphism compose(const GroupTable& t, const GroupEndomorphism& psi,
                          const GroupEndomorphism& phi) {
  GroupEndomorphism out;
  for (Element e : phi.images_)
    out.images_.push_back(evaluate_substituted(t, t.representative_word(e), psi.images_));
  return out;
}

GroupEndomorphism conjugate(const GroupTable& t, Element g, const GroupEndomorphism& phi) {
  GroupEndomorphism out;
  const Element gi = t.inverse(g);
  for (Element e : phi.images_) out.images_.push_back(t.multiply(t.multiply(g, e), gi));
  return out;
}

}  // namespace fpp
