#include "fpp/endos.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <cstdlib>
#include <set>
#include <thread>

namespace fpp {

namespace {

// Runs body(i) for i in [0, n) on `workers` threads; rethrows the first failure.
template <class Body>
void parallel_for(std::size_t n, std::size_t workers, Body body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

class EndomorphismSearch {
public:
  EndomorphismSearch(const GroupTable& t, const Presentation& p, bool prune)
      : t_(t), p_(p), prune_(prune), by_depth_(p.generator_count()) {
    const std::size_t g = p.generator_count();
    candidates_.assign(g, {});
    std::vector<long> power_bound(g, 0);
    for (const Word& r : p.relators) {
      if (prune && r.letters().size() == 1) {
        const Letter& l = r.letters().front();
        power_bound[l.gen] = std::gcd(power_bound[l.gen], std::abs(l.exp));
      }
      const std::size_t depth = prune ? r.generator_bound() - 1 : g - 1;
      by_depth_[depth].push_back(&r);
    }
    for (std::size_t j = 0; j < g; ++j) {
      for (std::size_t e = 0; e < t.order(); ++e) {
        if (power_bound[j] != 0 &&
            power_bound[j] % static_cast<long>(element_order(t, static_cast<Element>(e))) != 0)
          continue;
        candidates_[j].push_back(static_cast<Element>(e));
      }
    }
  }

  const std::vector<Element>& first_candidates() const { return candidates_.front(); }

  void run_from(Element first, std::vector<GroupEndomorphism>& out) const {
    std::vector<Element> images(p_.generator_count(), 0);
    images[0] = first;
    if (!consistent(images, 0)) return;
    descend(images, 1, out);
  }

private:
  bool consistent(const std::vector<Element>& images, std::size_t depth) const {
    for (const Word* r : by_depth_[depth])
      if (evaluate_substituted(t_, *r, images) != GroupTable::identity()) return false;
    return true;
  }

  void descend(std::vector<Element>& images, std::size_t depth,
               std::vector<GroupEndomorphism>& out) const {
    if (depth == images.size()) {
      out.emplace_back(t_, p_, images);
      return;
    }
    for (Element e : candidates_[depth]) {
      images[depth] = e;
      if (consistent(images, depth)) descend(images, depth + 1, out);
    }
  }

  const GroupTable& t_;
  const Presentation& p_;
  bool prune_;
  std::vector<std::vector<const Word*>> by_depth_;
  std::vector<std::vector<Element>> candidates_;
};

}  // namespace

std::vector<GroupEndomorphism> enumerate_endomorphisms(const GroupTable& t, const Presentation& p,
                                                       const EnumerationOptions& options) {
  validate(p);
  EndomorphismSearch search(t, p, options.prune);
  const auto& first = search.first_candidates();
  std::vector<std::vector<GroupEndomorphism>> parts(first.size());
  parallel_for(first.size(), options.workers,
               [&](std::size_t i) { search.run_from(first[i], parts[i]); });
  std::vector<GroupEndomorphism> out;
  for (auto& part : parts) std::move(part.begin(), part.end(), std::back_inserter(out));
  return out;
}

std::vector<InnerClass> dedup_modulo_inner(const GroupTable& t,
                                           const std::vector<GroupEndomorphism>& endos) {
  std::map<std::vector<Element>, std::size_t> index;
  for (std::size_t i = 0; i < endos.size(); ++i) index.emplace(endos[i].images(), i);
  std::vector<bool> assigned(endos.size(), false);
  std::vector<InnerClass> classes;
  for (std::size_t i = 0; i < endos.size(); ++i) {
    if (assigned[i]) continue;
    std::set<std::vector<Element>> orbit;
    for (std::size_t g = 0; g < t.order(); ++g)
      orbit.insert(conjugate(t, static_cast<Element>(g), endos[i]).images());
    for (const auto& images : orbit) {
      auto it = index.find(images);
      if (it == index.end()) throw std::invalid_argument("dedup_modulo_inner: endomorphism list is incomplete");
      assigned[it->second] = true;
    }
    classes.push_back({endos[i], orbit.size()});
  }
  return classes;
}

H2Endo induced_h2_of(const FreeResolution3& r, const Presentation& p, const H2Data& h,
                     const GroupEndomorphism& phi, const LiftOptions& lift) {
  return induced_h2(lift_chain_map(r, p, phi, lift), h);
}

InducedSet induced_h2_set(const GroupTable& t, const Presentation& p, const FreeResolution3& r,
                          const H2Data& h, const std::vector<GroupEndomorphism>& endos,
                          const InducedOptions& options) {
  std::vector<GroupEndomorphism> reps;
  std::vector<std::size_t> weight;
  if (options.inner_dedup) {
    for (auto& c : dedup_modulo_inner(t, endos)) {
      reps.push_back(c.representative);
      weight.push_back(c.size);
    }
  } else {
    reps = endos;
    weight.assign(endos.size(), 1);
  }

  std::vector<H2Endo> induced(reps.size());
  parallel_for(reps.size(), options.workers,
               [&](std::size_t i) { induced[i] = induced_h2_of(r, p, h, reps[i]); });

  // reps are in lexicographic order, so the first hit of a fiber is its witness.
  std::map<H2Endo, InducedMap> fibers;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    auto it = fibers.find(induced[i]);
    if (it == fibers.end()) {
      fibers.emplace(induced[i], InducedMap{induced[i], reps[i], weight[i]});
    } else {
      it->second.multiplicity += weight[i];
    }
  }
  InducedSet out;
  out.endomorphism_count = endos.size();
  out.lifted = reps.size();
  out.inner_dedup = options.inner_dedup;
  for (auto& [key, m] : fibers) out.maps.push_back(std::move(m));
  return out;
}

InducedSet induced_h2_set(const GroupTable& t, const Presentation& p, const FreeResolution3& r,
                          const H2Data& h, const InducedOptions& options) {
  return induced_h2_set(t, p, r, h, enumerate_endomorphisms(t, p, {.workers = options.workers}),
                        options);
}

}  // namespace fpp
