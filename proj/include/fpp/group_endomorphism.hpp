#pragma once

#include "fpp/enumerator.hpp"

#include <vector>

namespace fpp {

/// Endomorphism of an enumerated group, given by the images of the
/// presentation generators. Construction checks every relator.
class GroupEndomorphism {
public:
  /// Throws std::invalid_argument if some relator does not map to the identity.
  GroupEndomorphism(const GroupTable& t, const Presentation& p, std::vector<Element> images);

  static GroupEndomorphism identity(const GroupTable& t, const Presentation& p);
  static GroupEndomorphism trivial(const GroupTable& t, const Presentation& p);

  const std::vector<Element>& images() const noexcept { return images_; }
  Element image(std::size_t gen) const { return images_[gen]; }

  /// Image of every element, indexed by element.
  std::vector<Element> element_images(const GroupTable& t) const;

  friend auto operator<=>(const GroupEndomorphism&, const GroupEndomorphism&) = default;

private:
  GroupEndomorphism() = default;
  std::vector<Element> images_;

  friend GroupEndomorphism compose(const GroupTable&, const GroupEndomorphism&,
                                   const GroupEndomorphism&);
  friend GroupEndomorphism conjugate(const GroupTable&, Element, const GroupEndomorphism&);
};

/// psi o phi
GroupEndomorphism compose(const GroupTable& t, const GroupEndomorphism& psi,
                          const GroupEndomorphism& phi);
/// c_g o phi, where c_g(h) = g h g^-1.
GroupEndomorphism conjugate(const GroupTable& t, Element g, const GroupEndomorphism& phi);

/// Evaluates `w` with generator j replaced by `images[j]`.
Element evaluate_substituted(const GroupTable& t, const Word& w, const std::vector<Element>& images);

}  // namespace fpp
