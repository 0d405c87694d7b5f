#include "fpp/certify.hpp"

#include "fpp/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace fpp {

EfficiencyResult efficiency_check(const Presentation& p, const ZVector& h2_invariant_factors) {
  const long g = static_cast<long>(p.generator_count());
  const long r = static_cast<long>(p.relator_count());
  const long k = static_cast<long>(h2_invariant_factors.size());
  EfficiencyResult out;
  out.deficiency_gap = (r - g) - k;
  if (out.deficiency_gap < 0)
    throw ConsistencyError("efficiency check: r - g is smaller than the number of invariant factors of H_2");
  out.rk_h2_complex = p.relator_count() - rank(exponent_matrix(p));
  out.efficient = out.deficiency_gap == 0;
  if (out.efficient != (static_cast<long>(out.rk_h2_complex) == k))
    throw ConsistencyError("efficiency check: gap and rank criteria disagree");
  return out;
}

BingResult bing_check(const std::vector<H2Endo>& induced_maps, const std::optional<Integer>& d1) {
  BingResult out;
  if (!d1) {
    out.bing = true;
    out.trivial_h2_convention = true;
    return out;
  }
  const Integer minus_one = *d1 - 1;
  out.bing = true;
  for (const H2Endo& m : induced_maps) {
    Integer residue;
    const Integer trace = m.trace();
    mpz_fdiv_r(residue.get_mpz_t(), trace.get_mpz_t(), d1->get_mpz_t());
    if (residue == minus_one) out.bing = false;
    out.trace_residues.push_back(residue);
  }
  return out;
}

namespace {

class StageTimer {
public:
  explicit StageTimer(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}

  template <class F>
  auto run(const std::string& stage, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    auto record = [&] {
      sink_.emplace_back(stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    };
    try {
      auto result = f();
      record();
      return result;
    } catch (const CompositionNotZero& e) {
      throw CompositionNotZero("[" + stage + "] " + e.what());
    } catch (const ConsistencyError& e) {
      throw ConsistencyError("[" + stage + "] " + e.what());
    }
  }

private:
  std::vector<std::pair<std::string, double>>& sink_;
};

std::vector<std::string> witness_words(const GroupTable& t, const Presentation& p,
                                       const GroupEndomorphism& phi) {
  std::vector<std::string> out;
  for (Element e : phi.images()) out.push_back(format_word(t.representative_word(e), p.generator_names));
  return out;
}

}  // namespace

void validate(const Certificate& c) {
  const long k = static_cast<long>(c.h2_invariant_factors.size());
  if (c.efficient != (c.deficiency_gap == 0))
    throw ConsistencyError("certificate: efficient flag disagrees with the deficiency gap");
  if (c.efficient != (static_cast<long>(c.rk_h2_complex) == k))
    throw ConsistencyError("certificate: efficient flag disagrees with rk H_2(X_P)");
  if (c.h2_invariant_factors.empty()) {
    if (c.bing != c.conventions.trivial_h2_is_bing)
      throw ConsistencyError("certificate: trivial H_2 without the recorded convention");
  } else {
    const Integer minus_one = c.h2_invariant_factors.front() - 1;
    const bool hit = std::find(c.trace_residues.begin(), c.trace_residues.end(), minus_one) !=
                     c.trace_residues.end();
    if (c.bing == hit) throw ConsistencyError("certificate: Bing verdict disagrees with the trace residues");
  }
  if (c.fpp_certified != (c.efficient && c.bing))
    throw ConsistencyError("certificate: fpp flag is not efficient AND bing");
  const long g = static_cast<long>(c.generator_count), r = static_cast<long>(c.relator_count);
  if (c.chi != 1 - g + r) throw ConsistencyError("certificate: chi != 1 - g + r");
  if (c.chi != 1 + static_cast<long>(c.rk_h2_complex) - static_cast<long>(c.h1_free_rank))
    throw ConsistencyError("certificate: chi disagrees with the homology ranks of X_P");
}

Certificate fpp_certificate(const Presentation& p, const CertifyOptions& options) {
  validate(p);
  Certificate cert;
  StageTimer timer(cert.timings);
  cert.presentation = format_presentation(p);
  cert.generator_count = p.generator_count();
  cert.relator_count = p.relator_count();

  const GroupTable table = timer.run("enumerate", [&] { return todd_coxeter(p, options.max_cosets); });
  cert.order = table.order();

  const FreeResolution3 res = timer.run("resolution", [&] { return build_resolution(table, p); });

  const H2Data h2 = timer.run("homology", [&] {
    const FpAbelianGroup h1 = h1_of_group(res);
    // Degree-1 cross-check against the exponent matrix directly.
    const SmithDecomposition ab = smith_normal_form(exponent_matrix(p).transpose(), {.left = false, .right = false});
    if (ab.invariant_factors != h1.invariant_factors || p.generator_count() - ab.rank != h1.free_rank)
      throw ConsistencyError("H_1 of the resolution disagrees with the abelianization");
    cert.h1_invariant_factors = h1.invariant_factors;
    cert.h1_free_rank = h1.free_rank;
    H2Data h = h2_of_group(res);
    if (h.h2.free_rank != 0) throw ConsistencyError("H_2 of a finite group has positive rank");
    return h;
  });
  cert.h2_invariant_factors = h2.invariant_factors();

  if (options.oracle_check) {
    cert.conventions.oracle = timer.run("oracle", [&] {
      if (table.order() > kBarOracleCap) return OracleStatus::SkippedOrderTooLarge;
      if (h2_via_bar_complex(table).invariant_factors != h2.invariant_factors())
        throw ConsistencyError("bar-complex oracle disagrees with the resolution");
      return OracleStatus::Passed;
    });
  }

  const EfficiencyResult eff = efficiency_check(p, h2.invariant_factors());
  cert.deficiency_gap = eff.deficiency_gap;
  cert.rk_h2_complex = eff.rk_h2_complex;
  cert.efficient = eff.efficient;
  cert.chi = euler_characteristic(p);

  const auto endos = timer.run("endomorphisms", [&] {
    return enumerate_endomorphisms(table, p, {.workers = options.workers});
  });
  cert.endomorphism_count = endos.size();

  const InducedSet induced = timer.run("induced_maps", [&] {
    return induced_h2_set(table, p, res, h2, endos,
                          {.inner_dedup = options.inner_dedup, .workers = options.workers});
  });
  cert.conventions.inner_dedup = options.inner_dedup;

  if (options.inner_dedup && !h2.h2.trivial() && !endos.empty()) {
    cert.conventions.inner_invariance_samples = timer.run("inner_invariance", [&] {
      std::mt19937_64 rng(0x1d2c3b4a);
      std::uniform_int_distribution<std::size_t> pick_endo(0, endos.size() - 1);
      std::uniform_int_distribution<Element> pick_element(0, static_cast<Element>(table.order() - 1));
      for (std::size_t s = 0; s < options.inner_invariance_samples; ++s) {
        const GroupEndomorphism& phi = endos[pick_endo(rng)];
        const Element g = pick_element(rng);
        if (!(induced_h2_of(res, p, h2, conjugate(table, g, phi)) == induced_h2_of(res, p, h2, phi)))
          throw ConsistencyError("an inner automorphism acts nontrivially on H_2");
      }
      return options.inner_invariance_samples;
    });
  }

  std::vector<H2Endo> maps;
  for (const InducedMap& m : induced.maps) maps.push_back(m.map);
  std::optional<Integer> d1;
  if (!h2.invariant_factors().empty()) d1 = h2.invariant_factors().front();
  const BingResult bing = bing_check(maps, d1);
  for (std::size_t i = 0; i < induced.maps.size(); ++i) {
    InducedMapRecord rec;
    rec.matrix = induced.maps[i].map.matrix;
    if (d1) rec.trace_residue = bing.trace_residues[i];
    rec.multiplicity = induced.maps[i].multiplicity;
    rec.witness_images = witness_words(table, p, induced.maps[i].witness);
    cert.induced_maps.push_back(std::move(rec));
  }
  cert.trace_residues = bing.trace_residues;
  std::sort(cert.trace_residues.begin(), cert.trace_residues.end());
  cert.bing = bing.bing;
  cert.conventions.trivial_h2_is_bing = bing.trivial_h2_convention;
  cert.fpp_certified = cert.efficient && cert.bing;
  validate(cert);
  return cert;
}

namespace {

std::map<Integer, std::vector<unsigned long>> prime_power_parts(const ZVector& factors) {
  std::map<Integer, std::vector<unsigned long>> parts;
  for (const Integer& d : factors) {
    if (d <= 1) throw std::invalid_argument("invariant factors must exceed 1");
    Integer rest = d;
    for (Integer q = 2; q * q <= rest; ++q) {
      unsigned long e = 0;
      while (mpz_divisible_p(rest.get_mpz_t(), q.get_mpz_t())) {
        rest /= q;
        ++e;
      }
      if (e) parts[q].push_back(e);
    }
    if (rest > 1) parts[rest].push_back(1);
  }
  return parts;
}

}  // namespace

ZVector merge_invariant_factors(const ZVector& a, const ZVector& b) {
  ZVector all = a;
  all.insert(all.end(), b.begin(), b.end());
  auto parts = prime_power_parts(all);
  std::size_t count = 0;
  for (auto& [q, exps] : parts) {
    std::sort(exps.rbegin(), exps.rend());
    count = std::max(count, exps.size());
  }
  // The i-th largest factor takes the i-th largest power of every prime.
  ZVector out(count, 1);
  for (const auto& [q, exps] : parts) {
    for (std::size_t i = 0; i < exps.size(); ++i) {
      Integer power;
      mpz_pow_ui(power.get_mpz_t(), q.get_mpz_t(), exps[i]);
      out[i] *= power;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(WedgeConclusion c) {
  switch (c) {
    case WedgeConclusion::FppCertified: return "FPP_CERTIFIED";
    case WedgeConclusion::NoFppByCitedResults: return "NO_FPP_BY_CITED_RESULTS";
    case WedgeConclusion::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

WedgeReport wedge_analysis(const std::vector<Certificate>& certs, std::size_t extra_disks) {
  if (certs.empty()) throw std::invalid_argument("wedge_analysis: no components");
  WedgeReport w;
  w.components = certs;
  w.extra_disks = extra_disks;
  long chi = 0;
  for (const Certificate& c : certs) {
    w.combined_h2_invariant_factors = merge_invariant_factors(w.combined_h2_invariant_factors, c.h2_invariant_factors);
    w.combined_rank += c.rk_h2_complex;
    chi += c.chi;
  }
  w.chi = chi - static_cast<long>(certs.size() - 1);
  w.gap = static_cast<long>(w.combined_rank) - static_cast<long>(w.combined_h2_invariant_factors.size());

  const bool all_certified = std::all_of(certs.begin(), certs.end(), [](const Certificate& c) { return c.fpp_certified; });
  if (extra_disks == 0) {
    w.notes.push_back("one-point union of the component complexes; H_2 of pi_1 is the direct sum of the components' H_2");
    if (all_certified) {
      w.conclusion = WedgeConclusion::FppCertified;
      w.notes.push_back("every component has a fixed point certificate, and a one-point union of compact polyhedra with the fixed point property has it too");
    } else {
      w.conclusion = WedgeConclusion::Inconclusive;
      w.notes.push_back("some component lacks a fixed point certificate");
    }
  } else {
    w.notes.push_back(std::to_string(extra_disks) +
                      " extra 2-cell(s) attached along an arc; each collapses away, so homotopy type and homology are unchanged");
    if (w.gap > 0) {
      w.conclusion = WedgeConclusion::NoFppByCitedResults;
      w.notes.push_back("premise (cited, not verified here): a compact 2-polyhedron without global separating points whose rank of H_2 exceeds the number of invariant factors of H_2 of its fundamental group is homotopy equivalent to one without the fixed point property");
      w.notes.push_back("premise (cited, not verified here): for compact connected polyhedra without global separating points the fixed point property is a homotopy invariant");
    } else {
      w.conclusion = WedgeConclusion::Inconclusive;
      w.notes.push_back("rank of H_2 equals the number of invariant factors; no cited result applies");
    }
  }
  return w;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson to_json(const Integer& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

ojson to_json(const ZVector& v) {
  ojson a = ojson::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

ojson to_json(const ZMatrix& m) {
  ojson a = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    a.push_back(std::move(row));
  }
  return a;
}

std::string to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::NotRequested: return "not_requested";
    case OracleStatus::Passed: return "passed";
    case OracleStatus::SkippedOrderTooLarge: return "skipped_order_too_large";
  }
  return "not_requested";
}

// Basis-independent facts about the induced set.
struct InducedSummary {
  std::size_t idempotents = 0;
  std::size_t involutions = 0;
};

InducedSummary summarize(const Certificate& c) {
  InducedSummary s;
  for (const auto& m : c.induced_maps) {
    H2Endo e{m.matrix, c.h2_invariant_factors};
    H2Endo sq = compose(e, e);
    if (sq == e) ++s.idempotents;
    H2Endo id{ZMatrix::identity(m.matrix.rows()), c.h2_invariant_factors};
    if (sq == id && !(e == id)) ++s.involutions;
  }
  return s;
}

ojson certificate_json(const Certificate& c, bool include_timings) {
  validate(c);
  ojson j;
  j["presentation"] = c.presentation;
  j["order"] = c.order;
  j["h1_invariant_factors"] = to_json(c.h1_invariant_factors);
  j["h2_invariant_factors"] = to_json(c.h2_invariant_factors);
  j["deficiency_gap"] = c.deficiency_gap;
  j["rk_h2_complex"] = c.rk_h2_complex;
  j["efficient"] = c.efficient;
  j["chi"] = c.chi;
  j["endomorphism_count"] = c.endomorphism_count;
  ojson maps = ojson::array();
  for (const auto& m : c.induced_maps) {
    ojson e;
    e["matrix"] = to_json(m.matrix);
    e["trace_residue"] = m.trace_residue ? to_json(*m.trace_residue) : ojson(nullptr);
    e["multiplicity"] = m.multiplicity;
    e["witness_images"] = m.witness_images;
    maps.push_back(std::move(e));
  }
  j["induced_h2_maps"] = std::move(maps);
  const InducedSummary s = summarize(c);
  j["induced_h2_summary"] = {{"cardinality", c.induced_maps.size()},
                             {"trace_residue_multiset", to_json(c.trace_residues)},
                             {"idempotents", s.idempotents},
                             {"involutions", s.involutions}};
  j["bing"] = c.bing;
  j["fpp_certified"] = c.fpp_certified;
  j["conventions"] = {{"inner_dedup", c.conventions.inner_dedup},
                      {"inner_invariance_samples", c.conventions.inner_invariance_samples},
                      {"trivial_h2_is_bing", c.conventions.trivial_h2_is_bing},
                      {"oracle_check", to_string(c.conventions.oracle)}};
  if (include_timings) {
    ojson t = ojson::object();
    for (const auto& [stage, secs] : c.timings) t[stage] = secs;
    j["timings"] = std::move(t);
  }
  return j;
}

std::string group_string(const ZVector& factors, std::size_t free_rank = 0) {
  std::string s;
  for (const auto& d : factors) s += (s.empty() ? "" : " + ") + ("Z_" + d.get_str());
  for (std::size_t i = 0; i < free_rank; ++i) s += (s.empty() ? "" : " + ") + std::string("Z");
  return s.empty() ? "0" : s;
}

std::string list_string(const ZVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + "]";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void human_certificate(std::ostream& out, const Certificate& c, bool include_timings) {
  validate(c);
  out << "presentation: " << c.presentation << "\n";
  out << "|G| = " << c.order << "\n";
  out << "H_1(G) = " << group_string(c.h1_invariant_factors, c.h1_free_rank)
      << "  invariant factors " << list_string(c.h1_invariant_factors) << "\n";
  out << "H_2(G) = " << group_string(c.h2_invariant_factors)
      << "  invariant factors " << list_string(c.h2_invariant_factors) << "\n";
  out << "r - g = " << static_cast<long>(c.relator_count) - static_cast<long>(c.generator_count)
      << ", k = " << c.h2_invariant_factors.size() << ", deficiency gap = " << c.deficiency_gap << "\n";
  out << "rk H_2(X_P) = " << c.rk_h2_complex << "\n";
  out << "efficient: " << yes_no(c.efficient) << "\n";
  out << "χ(X_P) = " << c.chi << "\n";
  out << "endomorphisms: " << c.endomorphism_count << "\n";
  out << "induced maps on H_2 (" << c.induced_maps.size() << "):\n";
  for (const auto& m : c.induced_maps) {
    out << "  " << to_string(m.matrix) << "  trace ";
    if (m.trace_residue)
      out << m.trace_residue->get_str() << " mod " << c.h2_invariant_factors.front().get_str();
    else
      out << "n/a";
    out << "  multiplicity " << m.multiplicity << "  witness (";
    for (std::size_t i = 0; i < m.witness_images.size(); ++i) out << (i ? ", " : "") << m.witness_images[i];
    out << ")\n";
  }
  if (c.h2_invariant_factors.empty()) {
    out << "Bing group: " << yes_no(c.bing) << " (H_2 = 0; convention trivial_h2_is_bing)\n";
  } else {
    const Integer d1 = c.h2_invariant_factors.front();
    out << "Bing group: " << yes_no(c.bing) << " (residue " << Integer(d1 - 1).get_str() << " mod " << d1.get_str()
        << (c.bing ? " never occurs" : " occurs") << ")\n";
  }
  out << "fixed point property certified: " << yes_no(c.fpp_certified) << "\n";
  if (c.fpp_certified && c.h2_invariant_factors.empty())
    out << "  H_2(X_P) has rank 0, so every self-map f of X_P has Lefschetz number L(f) = 1\n";
  else if (c.fpp_certified)
    out << "  every self-map f of X_P has tr(f_* on H_2) != -1, hence Lefschetz number L(f) != 0\n";
  out << "conventions: inner_dedup=" << yes_no(c.conventions.inner_dedup)
      << " inner_invariance_samples=" << c.conventions.inner_invariance_samples
      << " trivial_h2_is_bing=" << yes_no(c.conventions.trivial_h2_is_bing)
      << " oracle_check=" << to_string(c.conventions.oracle) << "\n";
  if (include_timings) {
    out << "timings:";
    for (const auto& [stage, secs] : c.timings) out << " " << stage << "=" << secs << "s";
    out << "\n";
  }
}

}  // namespace

std::string render_report(const Certificate& c, ReportFormat format, bool include_timings) {
  if (format == ReportFormat::Json) return certificate_json(c, include_timings).dump(2) + "\n";
  std::ostringstream out;
  human_certificate(out, c, include_timings);
  return out.str();
}

std::string render_report(const WedgeReport& w, ReportFormat format, bool include_timings) {
  if (format == ReportFormat::Json) {
    ojson j;
    ojson comps = ojson::array();
    for (const auto& c : w.components) comps.push_back(certificate_json(c, include_timings));
    j["components"] = std::move(comps);
    j["extra_disks"] = w.extra_disks;
    j["combined_h2_invariant_factors"] = to_json(w.combined_h2_invariant_factors);
    j["combined_rank"] = w.combined_rank;
    j["gap"] = w.gap;
    j["chi"] = w.chi;
    j["conclusion"] = to_string(w.conclusion);
    j["notes"] = w.notes;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < w.components.size(); ++i) {
    out << "== component " << i + 1 << " ==\n";
    human_certificate(out, w.components[i], include_timings);
  }
  out << "== wedge ==\n";
  out << "components: " << w.components.size() << ", extra disks: " << w.extra_disks << "\n";
  out << "H_2(pi_1) = " << group_string(w.combined_h2_invariant_factors) << "  invariant factors "
      << list_string(w.combined_h2_invariant_factors) << "\n";
  out << "rk H_2 = " << w.combined_rank << ", gap = " << w.gap << "\n";
  out << "χ = " << w.chi << "\n";
  out << "conclusion: " << to_string(w.conclusion) << "\n";
  for (const auto& n : w.notes) out << "  - " << n << "\n";
  return out.str();
}

}  // namespace fpp
