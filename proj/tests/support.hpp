#pragma once

// Shared fixtures, random generators and brute-force oracles for the test
// suites. Oracles here avoid the library's elimination and search code.

#include "fpp/certify.hpp"
#include "fpp/errors.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fpp::test {

inline const char* kG =
    "< x, y | x^3, x*y*x^-1*y*x*y^-1*x^-1*y^-1, x^-1*y^-4*x^-1*y^2*x^-1*y^-1 >";
inline const char* kH = "< x, y | x^4, y^4, (x*y)^2, (x^-1*y)^2 >";
inline const char* kKlein = "< a, b | a^2, b^2, (a*b)^2 >";
inline const char* kS3 = "< a, b | a^3, b^2, (a*b)^2 >";
inline const char* kD4 = "< a, b | a^4, b^2, (a*b)^2 >";
inline const char* kQ8 = "< a, b | a^4, a^2*b^-2, a*b*a*b^-1 >";
inline const char* kZ3xZ3 = "< a, b | a^3, b^3, a*b*a^-1*b^-1 >";

inline std::string cyclic(int n) { return "< x | x^" + std::to_string(n) + " >"; }

// Parsed fixture data, cached across test cases.
struct Fixture {
  Presentation p;
  GroupTable t;
  FreeResolution3 r;
  H2Data h;
  std::vector<GroupEndomorphism> endos;
};

inline const Fixture& fixture(const std::string& text) {
  static std::map<std::string, std::unique_ptr<Fixture>> cache;
  auto& slot = cache[text];
  if (!slot) {
    Presentation p = parse_presentation(text);
    GroupTable t = todd_coxeter(p);
    FreeResolution3 r = build_resolution(t, p);
    H2Data h = h2_of_group(r);
    auto endos = enumerate_endomorphisms(t, p);
    slot.reset(new Fixture{std::move(p), std::move(t), std::move(r), std::move(h), std::move(endos)});
  }
  return *slot;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline Word random_word(std::size_t gens, std::size_t max_letters) {
  std::vector<Letter> letters;
  const std::size_t n = static_cast<std::size_t>(uniform(0, static_cast<long>(max_letters)));
  for (std::size_t i = 0; i < n; ++i) {
    long e = uniform(-3, 3);
    letters.push_back({static_cast<std::size_t>(uniform(0, static_cast<long>(gens) - 1)), e == 0 ? 1 : e});
  }
  return free_reduce(letters);
}

inline ZMatrix random_matrix(std::size_t rows, std::size_t cols, long bound) {
  ZMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = uniform(-bound, bound);
  return a;
}

// Cofactor expansion; fine for the tiny minors used here.
inline Integer laplace_determinant(const ZMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  if (n == 1) return a(0, 0);
  Integer det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a(0, j) == 0) continue;
    ZMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t c = 0, k = 0; c < n; ++c)
        if (c != j) minor(i - 1, k++) = a(i, c);
    Integer term = a(0, j) * laplace_determinant(minor);
    det += (j % 2 == 0) ? term : Integer(-term);
  }
  return det;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> pick(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      f(pick);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
}

// d_1 d_2 ... d_k from gcds of k x k minors; entry k-1 of the result. Zero
// once k exceeds the rank.
inline std::vector<Integer> determinantal_divisors(const ZMatrix& a) {
  std::vector<Integer> out;
  const std::size_t kmax = std::min(a.rows(), a.cols());
  for (std::size_t k = 1; k <= kmax; ++k) {
    Integer g = 0;
    for_each_subset(a.rows(), k, [&](const std::vector<std::size_t>& rows) {
      for_each_subset(a.cols(), k, [&](const std::vector<std::size_t>& cols) {
        ZMatrix m(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m(i, j) = a(rows[i], cols[j]);
        Integer d = laplace_determinant(m);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      });
    });
    out.push_back(g);
  }
  return out;
}

// Size of the group generated by permutations, by breadth-first closure.
using Perm = std::vector<int>;

inline Perm perm_mul(const Perm& a, const Perm& b) {  // first a, then b
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
  return c;
}

inline Perm perm_inverse(const Perm& a) {
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = static_cast<int>(i);
  return c;
}

inline std::size_t closure_size(const std::vector<Perm>& gens) {
  Perm id(gens.front().size());
  std::iota(id.begin(), id.end(), 0);
  std::set<Perm> seen{id};
  std::vector<Perm> frontier{id};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const Perm& p : frontier)
      for (const Perm& g : gens) {
        Perm q = perm_mul(p, g);
        if (seen.insert(q).second) next.push_back(q);
      }
    frontier.swap(next);
  }
  return seen.size();
}

inline Perm evaluate_perm(const Word& w, const std::vector<Perm>& gens) {
  Perm out(gens.front().size());
  std::iota(out.begin(), out.end(), 0);
  for (const Letter& l : w.letters()) {
    const Perm g = l.exp > 0 ? gens[l.gen] : perm_inverse(gens[l.gen]);
    for (long i = 0; i < std::abs(l.exp); ++i) out = perm_mul(out, g);
  }
  return out;
}

inline bool satisfies(const Presentation& p, const std::vector<Perm>& gens) {
  Perm id(gens.front().size());
  std::iota(id.begin(), id.end(), 0);
  for (const Word& r : p.relators)
    if (evaluate_perm(r, gens) != id) return false;
  return true;
}

// Left-to-right word evaluation through `multiply` only.
inline Element evaluate_by_multiplication(const GroupTable& t, const Word& w, const std::vector<Element>& images) {
  Element out = GroupTable::identity();
  for (const Letter& l : w.letters()) {
    const Element g = l.exp > 0 ? images[l.gen] : t.inverse(images[l.gen]);
    for (long i = 0; i < std::abs(l.exp); ++i) out = t.multiply(out, g);
  }
  return out;
}

// Every tuple of images that kills all relators, in lexicographic order.
inline std::vector<std::vector<Element>> brute_force_endomorphisms(const GroupTable& t, const Presentation& p) {
  std::vector<std::vector<Element>> out;
  std::vector<Element> images(p.generator_count(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == images.size()) {
      for (const Word& r : p.relators)
        if (evaluate_by_multiplication(t, r, images) != GroupTable::identity()) return;
      out.push_back(images);
      return;
    }
    for (Element e = 0; e < t.order(); ++e) {
      images[depth] = e;
      rec(depth + 1);
    }
  };
  rec(0);
  return out;
}

// Tietze moves that keep the group: conjugate a relator, append a product
// of two relators, or replace a relator by its inverse.
inline Presentation tietze_shuffle(const Presentation& p, int moves) {
  Presentation q = p;
  const std::size_t g = q.generator_count();
  for (int m = 0; m < moves; ++m) {
    const std::size_t i = static_cast<std::size_t>(uniform(0, static_cast<long>(q.relator_count()) - 1));
    switch (uniform(0, 2)) {
      case 0: {
        Word u = random_word(g, 3);
        Word c = u * q.relators[i] * u.inverse();
        if (!c.empty()) q.relators[i] = c;
        break;
      }
      case 1: {
        const std::size_t j = static_cast<std::size_t>(uniform(0, static_cast<long>(q.relator_count()) - 1));
        Word u = random_word(g, 2);
        Word c = q.relators[i] * u * q.relators[j] * u.inverse();
        if (!c.empty()) q.relators.push_back(c);
        break;
      }
      default:
        q.relators[i] = q.relators[i].inverse();
    }
  }
  return q;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace fpp::test
