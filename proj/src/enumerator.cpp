#include "fpp/enumerator.hpp"

#include "fpp/errors.hpp"

#include <deque>
#include <stdexcept>

namespace fpp {

namespace {

constexpr std::size_t kMultiplicationTableLimit = 4096;

// Column c < g is x_c, column g + c is x_c^-1.
class CosetTable {
public:
  CosetTable(const Presentation& p, std::size_t max_cosets)
      : gens_(p.generator_count()), cols_(2 * gens_), max_(max_cosets) {
    for (const Word& r : p.relators) {
      std::vector<std::size_t> w;
      for (long s : expand(r)) w.push_back(column(s));
      relators_.push_back(std::move(w));
    }
    // Cyclic conjugates of relators and their inverses, filed by first letter,
    // for deduction processing.
    by_first_.resize(cols_);
    for (const auto& w : relators_) {
      std::vector<std::size_t> inv(w.rbegin(), w.rend());
      for (auto& c : inv) c = inverse_column(c);
      for (const std::vector<std::size_t>* src : {&w, static_cast<const std::vector<std::size_t>*>(&inv)}) {
        for (std::size_t s = 0; s < src->size(); ++s) {
          std::vector<std::size_t> rot(src->begin() + s, src->end());
          rot.insert(rot.end(), src->begin(), src->begin() + s);
          by_first_[rot.front()].push_back(std::move(rot));
        }
      }
    }
  }

  std::vector<std::vector<Element>> run() {
    new_coset();
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      for (const auto& r : relators_) {
        if (!live(c)) break;
        scan(c, r, true);
        process_deductions();
      }
      if (!live(c)) continue;
      for (std::size_t col = 0; col < cols_; ++col) {
        if (!live(c)) break;
        if (entry(c, col) < 0) {
          define(c, col);
          process_deductions();
        }
      }
    }
    return standardize();
  }

private:
  std::size_t column(long letter) const {
    return letter > 0 ? static_cast<std::size_t>(letter - 1)
                      : gens_ + static_cast<std::size_t>(-letter - 1);
  }
  std::size_t inverse_column(std::size_t c) const { return c < gens_ ? c + gens_ : c - gens_; }

  long& entry(std::size_t coset, std::size_t col) { return table_[coset * cols_ + col]; }
  bool live(std::size_t c) const { return parent_[c] == c; }

  std::size_t new_coset() {
    if (parent_.size() >= max_) throw CosetLimitExceeded(parent_.size(), max_);
    const std::size_t c = parent_.size();
    parent_.push_back(c);
    table_.resize(table_.size() + cols_, -1);
    return c;
  }

  void define(std::size_t c, std::size_t col) {
    const std::size_t d = new_coset();
    entry(c, col) = static_cast<long>(d);
    entry(d, inverse_column(col)) = static_cast<long>(c);
    push_deduction(c, col);
  }

  void push_deduction(std::size_t c, std::size_t col) {
    if (deductions_.size() < kDeductionLimit) deductions_.emplace_back(c, col);
  }

  void process_deductions() {
    while (!deductions_.empty()) {
      auto [c, col] = deductions_.front();
      deductions_.pop_front();
      if (!live(c)) continue;
      for (const auto& w : by_first_[col]) {
        if (!live(c)) break;
        scan(c, w, false);
      }
      const long d = entry(c, col);
      if (d < 0) continue;
      const std::size_t dd = rep(static_cast<std::size_t>(d));
      for (const auto& w : by_first_[inverse_column(col)]) {
        if (!live(dd)) break;
        scan(dd, w, false);
      }
    }
  }

  void scan(std::size_t c, const std::vector<std::size_t>& w, bool fill) {
    std::size_t f = c, b = c;
    std::size_t i = 0, j = w.size();  // w[i..j) unscanned
    for (;;) {
      while (i < j && entry(f, w[i]) >= 0) f = static_cast<std::size_t>(entry(f, w[i++]));
      if (i == j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j > i && entry(b, inverse_column(w[j - 1])) >= 0)
        b = static_cast<std::size_t>(entry(b, inverse_column(w[--j])));
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        entry(f, w[i]) = static_cast<long>(b);
        entry(b, inverse_column(w[i])) = static_cast<long>(f);
        push_deduction(f, w[i]);
        return;
      }
      if (!fill) return;
      define(f, w[i]);
    }
  }

  std::size_t rep(std::size_t c) {
    std::size_t r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      std::size_t next = parent_[c];
      parent_[c] = r;
      c = next;
    }
    return r;
  }

  void merge(std::size_t a, std::size_t b, std::vector<std::size_t>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    queue.push_back(b);
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::vector<std::size_t> queue;
    merge(a, b, queue);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::size_t g = queue[qi];
      for (std::size_t col = 0; col < cols_; ++col) {
        const long dl = entry(g, col);
        if (dl < 0) continue;
        const std::size_t d = static_cast<std::size_t>(dl);
        const std::size_t ic = inverse_column(col);
        entry(d, ic) = -1;
        const std::size_t mu = rep(g), nu = rep(d);
        if (entry(mu, col) >= 0) {
          merge(nu, static_cast<std::size_t>(entry(mu, col)), queue);
        } else if (entry(nu, ic) >= 0) {
          merge(mu, static_cast<std::size_t>(entry(nu, ic)), queue);
        } else {
          entry(mu, col) = static_cast<long>(nu);
          entry(nu, ic) = static_cast<long>(mu);
          push_deduction(mu, col);
        }
      }
    }
  }

  std::vector<std::vector<Element>> standardize() {
    std::vector<long> number(parent_.size(), -1);
    std::vector<std::size_t> order;
    number[0] = 0;
    order.push_back(0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t c = order[k];
      for (std::size_t col = 0; col < cols_; ++col) {
        const long d = entry(c, col);
        if (d < 0) throw ConsistencyError("coset table incomplete after enumeration");
        const std::size_t r = rep(static_cast<std::size_t>(d));
        if (number[r] < 0) {
          number[r] = static_cast<long>(order.size());
          order.push_back(r);
        }
      }
    }
    std::vector<std::vector<Element>> action(gens_, std::vector<Element>(order.size()));
    for (std::size_t k = 0; k < order.size(); ++k)
      for (std::size_t gen = 0; gen < gens_; ++gen)
        action[gen][k] = static_cast<Element>(
            number[rep(static_cast<std::size_t>(entry(order[k], gen)))]);
    return action;
  }

  static constexpr std::size_t kDeductionLimit = 1 << 16;

  std::size_t gens_;
  std::size_t cols_;
  std::size_t max_;
  std::vector<std::vector<std::size_t>> relators_;
  std::vector<std::vector<std::vector<std::size_t>>> by_first_;
  std::vector<long> table_;
  std::vector<std::size_t> parent_;
  std::deque<std::pair<std::size_t, std::size_t>> deductions_;
};

}  // namespace

GroupTable::GroupTable(std::size_t generator_count, std::vector<std::vector<Element>> action)
    : order_(action.empty() ? 0 : action.front().size()), action_(std::move(action)) {
  if (action_.size() != generator_count || order_ == 0)
    throw std::invalid_argument("group table: malformed action");
  inverse_action_.assign(generator_count, std::vector<Element>(order_));
  for (std::size_t g = 0; g < generator_count; ++g) {
    std::vector<bool> hit(order_, false);
    for (std::size_t e = 0; e < order_; ++e) {
      const Element img = action_[g][e];
      if (img >= order_ || hit[img]) throw std::invalid_argument("generator action is not a permutation");
      hit[img] = true;
      inverse_action_[g][img] = static_cast<Element>(e);
    }
  }

  // Breadth-first spanning tree: columns x_0.., then x_0^-1...
  representative_.assign(order_, Word{});
  std::vector<long> parent(order_, -1);
  std::vector<std::size_t> column(order_, 0);
  std::vector<Element> bfs{0};
  std::vector<bool> seen(order_, false);
  seen[0] = true;
  for (std::size_t k = 0; k < bfs.size(); ++k) {
    const Element e = bfs[k];
    for (std::size_t col = 0; col < 2 * generator_count; ++col) {
      const bool inv = col >= generator_count;
      const std::size_t gen = inv ? col - generator_count : col;
      const Element f = inv ? inverse_action_[gen][e] : action_[gen][e];
      if (seen[f]) continue;
      seen[f] = true;
      parent[f] = e;
      column[f] = col;
      representative_[f] = representative_[e] * Word::generator(gen, inv ? -1 : 1);
      bfs.push_back(f);
    }
  }
  if (bfs.size() != order_) throw std::invalid_argument("group action is not transitive");

  inverse_.resize(order_);
  for (std::size_t e = 0; e < order_; ++e) {
    Element x = 0;
    const Word inv = representative_[e].inverse();
    for (const Letter& l : inv.letters()) {
      for (long k = 0; k < std::abs(l.exp); ++k)
        x = l.exp > 0 ? action_[l.gen][x] : inverse_action_[l.gen][x];
    }
    inverse_[e] = x;
  }

  if (order_ <= kMultiplicationTableLimit) {
    mul_.assign(order_ * order_, 0);
    for (std::size_t a = 0; a < order_; ++a) mul_[a * order_] = static_cast<Element>(a);
    for (std::size_t k = 1; k < bfs.size(); ++k) {
      const Element b = bfs[k];
      const Element p = static_cast<Element>(parent[b]);
      const std::size_t col = column[b];
      const bool inv = col >= generator_count;
      const std::size_t gen = inv ? col - generator_count : col;
      const auto& act = inv ? inverse_action_[gen] : action_[gen];
      for (std::size_t a = 0; a < order_; ++a) mul_[a * order_ + b] = act[mul_[a * order_ + p]];
    }
  }
}

Element GroupTable::multiply(Element a, Element b) const {
  if (!mul_.empty()) return mul_[static_cast<std::size_t>(a) * order_ + b];
  return evaluate_word(*this, representative_[b], a);
}

GroupTable todd_coxeter(const Presentation& p, std::size_t max_cosets) {
  if (max_cosets == 0) throw std::invalid_argument("max_cosets must be positive");
  validate(p);
  GroupTable t(p.generator_count(), CosetTable(p, max_cosets).run());
  for (const Word& r : p.relators)
    for (std::size_t e = 0; e < t.order(); ++e)
      if (evaluate_word(t, r, static_cast<Element>(e)) != e)
        throw ConsistencyError("relator does not act trivially on the enumerated table");
  return t;
}

Element evaluate_word(const GroupTable& t, const Word& w, Element start) {
  Element x = start;
  for (const Letter& l : w.letters()) {
    if (l.gen >= t.generator_count()) throw std::invalid_argument("invalid generator index");
    const long n = l.exp < 0 ? -l.exp : l.exp;
    for (long k = 0; k < n; ++k) x = l.exp > 0 ? t.act(x, l.gen) : t.act_inverse(x, l.gen);
  }
  return x;
}

std::size_t element_order(const GroupTable& t, Element e) {
  std::size_t n = 1;
  for (Element x = e; x != GroupTable::identity(); x = t.multiply(x, e)) ++n;
  return n;
}

Element power(const GroupTable& t, Element e, long n) {
  if (n < 0) return power(t, t.inverse(e), -n);
  Element result = GroupTable::identity();
  Element base = e;
  while (n > 0) {
    if (n & 1) result = t.multiply(result, base);
    base = t.multiply(base, base);
    n >>= 1;
  }
  return result;
}

}  // namespace fpp
