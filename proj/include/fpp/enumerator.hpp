#pragma once

#include "fpp/presentation.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fpp {

using Element = std::uint32_t;

inline constexpr std::size_t kDefaultMaxCosets = 1'000'000;

/// A finite group in its regular representation, as produced by coset
/// enumeration over the trivial subgroup. Element 0 is the identity.
/// Elements are numbered in breadth-first order from the identity with
/// columns x_0..x_{g-1}, x_0^-1..x_{g-1}^-1.
class GroupTable {
public:
  GroupTable(std::size_t generator_count, std::vector<std::vector<Element>> action);

  std::size_t order() const noexcept { return order_; }
  std::size_t generator_count() const noexcept { return action_.size(); }
  static constexpr Element identity() noexcept { return 0; }

  /// e * x_gen
  Element act(Element e, std::size_t gen) const { return action_[gen][e]; }
  /// e * x_gen^-1
  Element act_inverse(Element e, std::size_t gen) const { return inverse_action_[gen][e]; }
  Element multiply(Element a, Element b) const;
  Element inverse(Element e) const { return inverse_[e]; }
  Element generator_element(std::size_t gen) const { return action_[gen][0]; }
  /// Shortlex-least word in the column order that evaluates to `e`.
  const Word& representative_word(Element e) const { return representative_[e]; }

  const std::vector<Element>& action(std::size_t gen) const { return action_[gen]; }

private:
  std::size_t order_;
  std::vector<std::vector<Element>> action_;
  std::vector<std::vector<Element>> inverse_action_;
  std::vector<Element> inverse_;
  std::vector<Word> representative_;
  std::vector<Element> mul_;  // order^2 table; empty for very large groups
};

/// HLT coset enumeration over the trivial subgroup. Throws
/// CosetLimitExceeded when more than `max_cosets` cosets would be live.
GroupTable todd_coxeter(const Presentation& p, std::size_t max_cosets = kDefaultMaxCosets);

/// Right action of `w` on `start` (the identity by default).
Element evaluate_word(const GroupTable& t, const Word& w, Element start = GroupTable::identity());

std::size_t element_order(const GroupTable& t, Element e);

Element power(const GroupTable& t, Element e, long n);

}  // namespace fpp
