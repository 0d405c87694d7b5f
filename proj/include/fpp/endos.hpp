#pragma once

#include "fpp/group_endomorphism.hpp"
#include "fpp/resolution.hpp"

#include <cstddef>
#include <vector>

namespace fpp {

struct EnumerationOptions {
  /// Partition the first generator's image range across this many threads.
  std::size_t workers = 1;
  /// Restrict pure-power generators by element order and reject partial
  /// assignments early. Disabling it checks relators only on full tuples.
  bool prune = true;
};

/// Every homomorphism G -> G, sorted lexicographically by generator images.
std::vector<GroupEndomorphism> enumerate_endomorphisms(const GroupTable& t, const Presentation& p,
                                                       const EnumerationOptions& options = {});

struct InnerClass {
  /// Lexicographically least member of the class.
  GroupEndomorphism representative;
  std::size_t size = 0;
};

/// Partitions `endos` under phi ~ c_g o phi. `endos` must be complete.
std::vector<InnerClass> dedup_modulo_inner(const GroupTable& t,
                                           const std::vector<GroupEndomorphism>& endos);

struct InducedMap {
  H2Endo map;
  /// Lexicographically least endomorphism inducing `map`.
  GroupEndomorphism witness;
  std::size_t multiplicity = 0;
};

struct InducedOptions {
  bool inner_dedup = true;
  std::size_t workers = 1;
};

struct InducedSet {
  /// Sorted by matrix entries.
  std::vector<InducedMap> maps;
  std::size_t endomorphism_count = 0;
  /// Number of chain maps actually lifted.
  std::size_t lifted = 0;
  bool inner_dedup = true;
};

InducedSet induced_h2_set(const GroupTable& t, const Presentation& p, const FreeResolution3& r,
                          const H2Data& h, const std::vector<GroupEndomorphism>& endos,
                          const InducedOptions& options = {});

InducedSet induced_h2_set(const GroupTable& t, const Presentation& p, const FreeResolution3& r,
                          const H2Data& h, const InducedOptions& options = {});

/// Induced map of a single endomorphism.
H2Endo induced_h2_of(const FreeResolution3& r, const Presentation& p, const H2Data& h,
                     const GroupEndomorphism& phi, const LiftOptions& lift = {});

}  // namespace fpp
