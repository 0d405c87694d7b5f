#include "fpp/presentation.hpp"

#include "fpp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <set>
#include <stdexcept>

namespace fpp {

Word free_reduce(const std::vector<Letter>& letters) {
  Word out;
  std::vector<Letter> stack;
  stack.reserve(letters.size());
  for (const Letter& l : letters) {
    if (l.exp == 0) continue;
    if (!stack.empty() && stack.back().gen == l.gen) {
      stack.back().exp += l.exp;
      if (stack.back().exp == 0) stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

Word::Word(std::vector<Letter> letters) {
  // Fast path when already reduced; otherwise reduce through the stack.
  bool reduced = true;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (letters[i].exp == 0 || (i > 0 && letters[i].gen == letters[i - 1].gen)) {
      reduced = false;
      break;
    }
  }
  if (reduced) {
    letters_ = std::move(letters);
    return;
  }
  *this = free_reduce(letters);
}

Word Word::generator(std::size_t gen, long exp) {
  return exp == 0 ? Word{} : Word({Letter{gen, exp}});
}

std::size_t Word::length() const {
  std::size_t n = 0;
  for (const Letter& l : letters_) n += static_cast<std::size_t>(l.exp < 0 ? -l.exp : l.exp);
  return n;
}

std::size_t Word::generator_bound() const {
  std::size_t b = 0;
  for (const Letter& l : letters_) b = std::max(b, l.gen + 1);
  return b;
}

Word Word::inverse() const {
  std::vector<Letter> inv(letters_.rbegin(), letters_.rend());
  for (Letter& l : inv) l.exp = -l.exp;
  return Word(std::move(inv));
}

Word Word::power(long n) const {
  if (n < 0) return inverse().power(-n);
  Word out;
  for (long i = 0; i < n; ++i) out = out * *this;
  return out;
}

Word operator*(const Word& a, const Word& b) {
  std::vector<Letter> joined = a.letters_;
  joined.insert(joined.end(), b.letters_.begin(), b.letters_.end());
  return free_reduce(joined);
}

std::vector<long> expand(const Word& w) {
  std::vector<long> out;
  out.reserve(w.length());
  for (const Letter& l : w.letters()) {
    const long code = static_cast<long>(l.gen) + 1;
    const long n = l.exp < 0 ? -l.exp : l.exp;
    for (long i = 0; i < n; ++i) out.push_back(l.exp < 0 ? -code : code);
  }
  return out;
}

void validate(const Presentation& p) {
  if (p.generator_names.empty()) throw std::invalid_argument("presentation has no generators");
  std::set<std::string> seen;
  for (const auto& n : p.generator_names)
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate generator name '" + n + "'");
  for (const auto& r : p.relators)
    if (r.generator_bound() > p.generator_count())
      throw std::invalid_argument("relator references an undeclared generator");
}

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Presentation parse() {
    Presentation p;
    expect('<');
    p.generator_names.push_back(name());
    while (peek() == ',') {
      ++pos_;
      p.generator_names.push_back(name());
    }
    for (std::size_t i = 0; i < p.generator_names.size(); ++i) {
      if (!index_.emplace(p.generator_names[i], i).second)
        fail("duplicate generator name '" + p.generator_names[i] + "'", name_start_[i]);
    }
    expect('|');
    if (peek() != '>') {
      p.relators.push_back(relator());
      while (peek() == ',') {
        ++pos_;
        p.relators.push_back(relator());
      }
    }
    expect('>');
    if (peek() != '\0') fail("unexpected trailing input", pos_);
    return p;
  }

private:
  [[noreturn]] void fail(const std::string& message, std::size_t at) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(message, at, line, col);
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) {
      std::string found = pos_ < text_.size() ? std::string(1, text_[pos_]) : "end of input";
      fail(std::string("expected '") + c + "', found '" + found + "'", pos_);
    }
    ++pos_;
  }

  std::string name() {
    skip();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_])))
      fail("expected a generator name", pos_);
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    name_start_.push_back(start);
    return std::string(text_.substr(start, pos_ - start));
  }

  Word relator() {
    skip();
    const std::size_t start = pos_;
    if (peek() == '1') fail("empty relator '1' is not allowed", pos_);
    Word w = word();
    if (w.empty()) fail("relator reduces to the empty word", start);
    return w;
  }

  Word word() {
    std::vector<Letter> letters;
    append(letters, factor());
    while (peek() == '*') {
      ++pos_;
      append(letters, factor());
    }
    return free_reduce(letters);
  }

  static void append(std::vector<Letter>& out, const Word& w) {
    out.insert(out.end(), w.letters().begin(), w.letters().end());
  }

  Word factor() {
    Word base;
    if (peek() == '(') {
      ++pos_;
      base = word();
      expect(')');
    } else {
      skip();
      const std::size_t start = pos_;
      std::string n = name();
      name_start_.pop_back();
      auto it = index_.find(n);
      if (it == index_.end()) fail("unknown generator '" + n + "'", start);
      base = Word::generator(it->second);
    }
    if (peek() == '^') {
      ++pos_;
      return base.power(integer());
    }
    return base;
  }

  long integer() {
    skip();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected an integer exponent", start);
    long value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_) fail("exponent out of range", start);
    if (value == 0) fail("exponent must be nonzero", start);
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> name_start_;
};

}  // namespace

Presentation parse_presentation(std::string_view text) { return Parser(text).parse(); }

std::string format_word(const Word& w, const std::vector<std::string>& names) {
  if (w.empty()) return "1";
  std::string out;
  for (const Letter& l : w.letters()) {
    if (!out.empty()) out += '*';
    out += names.at(l.gen);
    if (l.exp != 1) out += "^" + std::to_string(l.exp);
  }
  return out;
}

std::string format_presentation(const Presentation& p) {
  std::string out = "< ";
  for (std::size_t i = 0; i < p.generator_names.size(); ++i)
    out += (i ? ", " : "") + p.generator_names[i];
  out += " |";
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    out += (i ? ", " : " ") + format_word(p.relators[i], p.generator_names);
  out += " >";
  return out;
}

FreeAlgebraSum FreeAlgebraSum::of(const Word& w, std::int64_t coeff) {
  FreeAlgebraSum s;
  s.add(w, coeff);
  return s;
}

std::int64_t FreeAlgebraSum::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0 : it->second;
}

std::int64_t FreeAlgebraSum::augmentation() const {
  std::int64_t total = 0;
  for (const auto& [w, c] : terms_) total += c;
  return total;
}

void FreeAlgebraSum::add(const Word& w, std::int64_t coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(w, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

FreeAlgebraSum& FreeAlgebraSum::operator+=(const FreeAlgebraSum& other) {
  for (const auto& [w, c] : other.terms_) add(w, c);
  return *this;
}

FreeAlgebraSum& FreeAlgebraSum::operator-=(const FreeAlgebraSum& other) {
  for (const auto& [w, c] : other.terms_) add(w, -c);
  return *this;
}

FreeAlgebraSum operator*(const Word& w, const FreeAlgebraSum& s) {
  FreeAlgebraSum out;
  for (const auto& [v, c] : s.terms_) out.add(w * v, c);
  return out;
}

FreeAlgebraSum operator*(const FreeAlgebraSum& s, const Word& w) {
  FreeAlgebraSum out;
  for (const auto& [v, c] : s.terms_) out.add(v * w, c);
  return out;
}

FreeAlgebraSum operator*(const FreeAlgebraSum& a, const FreeAlgebraSum& b) {
  FreeAlgebraSum out;
  for (const auto& [v, c] : a.terms_)
    for (const auto& [u, d] : b.terms_) out.add(v * u, c * d);
  return out;
}

FreeAlgebraSum fox_derivative(const Word& w, std::size_t gen) {
  FreeAlgebraSum out;
  Word prefix;
  for (const Letter& l : w.letters()) {
    if (l.gen == gen) {
      // d(x^e)/dx = 1 + x + ... + x^(e-1) for e > 0,
      //           = -(x^-1 + ... + x^e)   for e < 0.
      if (l.exp > 0) {
        for (long k = 0; k < l.exp; ++k) out.add(prefix * Word::generator(gen, k), 1);
      } else {
        for (long k = 1; k <= -l.exp; ++k) out.add(prefix * Word::generator(gen, -k), -1);
      }
    }
    prefix = prefix * Word::generator(l.gen, l.exp);
  }
  return out;
}

ZMatrix exponent_matrix(const Presentation& p) {
  ZMatrix m(p.relator_count(), p.generator_count());
  for (std::size_t i = 0; i < p.relator_count(); ++i)
    for (const Letter& l : p.relators[i].letters()) m(i, l.gen) += l.exp;
  return m;
}

long euler_characteristic(const Presentation& p) {
  return 1 - static_cast<long>(p.generator_count()) + static_cast<long>(p.relator_count());
}

Presentation wedge_presentation(const Presentation& a, const Presentation& b) {
  Presentation out = a;
  std::set<std::string> used(a.generator_names.begin(), a.generator_names.end());
  used.insert(b.generator_names.begin(), b.generator_names.end());
  std::set<std::string> taken(a.generator_names.begin(), a.generator_names.end());
  for (const auto& name : b.generator_names) {
    std::string chosen = name;
    if (taken.count(name)) {
      for (int k = 2;; ++k) {
        chosen = name + "_" + std::to_string(k);
        if (!used.count(chosen)) break;
      }
      used.insert(chosen);
    }
    taken.insert(chosen);
    out.generator_names.push_back(chosen);
  }
  const std::size_t shift = a.generator_count();
  for (const Word& r : b.relators) {
    std::vector<Letter> letters = r.letters();
    for (Letter& l : letters) l.gen += shift;
    out.relators.emplace_back(std::move(letters));
  }
  return out;
}

}  // namespace fpp
