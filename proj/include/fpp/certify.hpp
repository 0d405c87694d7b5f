#pragma once

#include "fpp/endos.hpp"
#include "fpp/enumerator.hpp"
#include "fpp/presentation.hpp"
#include "fpp/resolution.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fpp {

struct EfficiencyResult {
  long deficiency_gap = 0;      ///< (r - g) - k
  std::size_t rk_h2_complex = 0;  ///< rank of ker(Z^r -> Z^g)
  bool efficient = false;
};

/// Throws ConsistencyError when the gap is negative or the two efficiency
/// criteria disagree.
EfficiencyResult efficiency_check(const Presentation& p, const ZVector& h2_invariant_factors);

struct BingResult {
  /// Trace of each map reduced into [0, d_1); empty when H_2 is trivial.
  std::vector<Integer> trace_residues;
  bool bing = false;
  /// Set when H_2 = 0 and the group was declared Bing by convention.
  bool trivial_h2_convention = false;
};

BingResult bing_check(const std::vector<H2Endo>& induced_maps, const std::optional<Integer>& d1);

struct CertifyOptions {
  std::size_t max_cosets = kDefaultMaxCosets;
  bool inner_dedup = true;
  bool oracle_check = false;
  std::size_t workers = 1;
  /// (g, phi) pairs checked for c_g o phi ~ phi on H_2 when dedup is on.
  std::size_t inner_invariance_samples = 16;
};

struct InducedMapRecord {
  ZMatrix matrix;
  std::optional<Integer> trace_residue;
  std::size_t multiplicity = 0;
  std::vector<std::string> witness_images;
};

enum class OracleStatus { NotRequested, Passed, SkippedOrderTooLarge };

struct Conventions {
  bool inner_dedup = true;
  std::size_t inner_invariance_samples = 0;
  bool trivial_h2_is_bing = false;
  OracleStatus oracle = OracleStatus::NotRequested;
};

struct Certificate {
  std::string presentation;
  std::size_t generator_count = 0;
  std::size_t relator_count = 0;
  std::size_t order = 0;
  ZVector h1_invariant_factors;
  std::size_t h1_free_rank = 0;
  ZVector h2_invariant_factors;
  long deficiency_gap = 0;
  std::size_t rk_h2_complex = 0;
  bool efficient = false;
  long chi = 0;
  std::size_t endomorphism_count = 0;
  std::vector<InducedMapRecord> induced_maps;
  std::vector<Integer> trace_residues;  ///< sorted multiset, one per induced map
  bool bing = false;
  bool fpp_certified = false;
  Conventions conventions;
  std::vector<std::pair<std::string, double>> timings;
};

/// Checks the certificate's internal invariants; throws ConsistencyError.
void validate(const Certificate& c);

Certificate fpp_certificate(const Presentation& p, const CertifyOptions& options = {});

/// Invariant factors of the direct sum of two finite abelian groups.
ZVector merge_invariant_factors(const ZVector& a, const ZVector& b);

enum class WedgeConclusion { FppCertified, NoFppByCitedResults, Inconclusive };

std::string to_string(WedgeConclusion c);

struct WedgeReport {
  std::vector<Certificate> components;
  std::size_t extra_disks = 0;
  ZVector combined_h2_invariant_factors;
  std::size_t combined_rank = 0;
  long gap = 0;
  long chi = 0;
  WedgeConclusion conclusion = WedgeConclusion::Inconclusive;
  std::vector<std::string> notes;
};

WedgeReport wedge_analysis(const std::vector<Certificate>& certs, std::size_t extra_disks);

enum class ReportFormat { Human, Json };

std::string render_report(const Certificate& c, ReportFormat format, bool include_timings = true);
std::string render_report(const WedgeReport& w, ReportFormat format, bool include_timings = true);

}  // namespace fpp
