#pragma once

#include "fpp/zmatrix.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fpp {

/// One run x_gen^exp of a run-length encoded word.
struct Letter {
  std::size_t gen = 0;
  long exp = 0;

  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// Element of the free group on numbered generators, stored run-length
/// encoded and kept freely reduced: exponents are nonzero and adjacent runs
/// use distinct generators.
class Word {
public:
  Word() = default;
  /// Builds and freely reduces.
  explicit Word(std::vector<Letter> letters);

  static Word generator(std::size_t gen, long exp = 1);

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  bool empty() const noexcept { return letters_.empty(); }
  /// Number of syllables x^{+-1} in the expanded word.
  std::size_t length() const;
  /// Largest generator index used plus one (0 for the empty word).
  std::size_t generator_bound() const;

  Word inverse() const;
  Word power(long n) const;
  friend Word operator*(const Word& a, const Word& b);

  friend auto operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;

private:
  std::vector<Letter> letters_;
};

/// Freely reduces an arbitrary letter sequence (zero exponents allowed,
/// adjacent runs of one generator merged).
Word free_reduce(const std::vector<Letter>& letters);
inline Word free_reduce(const Word& w) { return w; }

/// Expands a word into a sequence of signed unit letters: +(g+1) for x_g and
/// -(g+1) for x_g^-1.
std::vector<long> expand(const Word& w);

struct Presentation {
  std::vector<std::string> generator_names;
  std::vector<Word> relators;

  std::size_t generator_count() const noexcept { return generator_names.size(); }
  std::size_t relator_count() const noexcept { return relators.size(); }

  friend bool operator==(const Presentation&, const Presentation&) = default;
};

/// Checks the structural invariants; throws std::invalid_argument.
void validate(const Presentation& p);

Presentation parse_presentation(std::string_view text);
std::string format_word(const Word& w, const std::vector<std::string>& names);
std::string format_presentation(const Presentation& p);

/// Formal integer combination of free-group words.
class FreeAlgebraSum {
public:
  FreeAlgebraSum() = default;
  static FreeAlgebraSum of(const Word& w, std::int64_t coeff = 1);

  const std::map<Word, std::int64_t>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::int64_t coefficient(const Word& w) const;
  /// Sum of coefficients.
  std::int64_t augmentation() const;

  void add(const Word& w, std::int64_t coeff);
  FreeAlgebraSum& operator+=(const FreeAlgebraSum& other);
  FreeAlgebraSum& operator-=(const FreeAlgebraSum& other);

  friend FreeAlgebraSum operator+(FreeAlgebraSum a, const FreeAlgebraSum& b) { return a += b; }
  friend FreeAlgebraSum operator-(FreeAlgebraSum a, const FreeAlgebraSum& b) { return a -= b; }
  friend FreeAlgebraSum operator*(const Word& w, const FreeAlgebraSum& s);
  friend FreeAlgebraSum operator*(const FreeAlgebraSum& s, const Word& w);
  friend FreeAlgebraSum operator*(const FreeAlgebraSum& a, const FreeAlgebraSum& b);
  friend bool operator==(const FreeAlgebraSum&, const FreeAlgebraSum&) = default;

private:
  std::map<Word, std::int64_t> terms_;
};

/// Fox derivative d w / d x_gen.
FreeAlgebraSum fox_derivative(const Word& w, std::size_t gen);

/// r x g matrix of exponent sums: entry (i, j) is the total exponent of
/// generator j in relator i.
ZMatrix exponent_matrix(const Presentation& p);

/// 1 - g + r.
long euler_characteristic(const Presentation& p);

/// Presentation of the free product; its complex is the one-point union.
/// Names of the second operand that collide get a numeric suffix.
Presentation wedge_presentation(const Presentation& a, const Presentation& b);

}  // namespace fpp
