#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace fpp;
using namespace fpp::test;

namespace {

const Certificate& certificate(const char* text) {
  static std::map<std::string, Certificate> cache;
  auto it = cache.find(text);
  if (it == cache.end()) it = cache.emplace(text, fpp_certificate(parse_presentation(text))).first;
  return it->second;
}

ZVector random_factors() {
  ZVector out;
  Integer d = 1;
  for (int i = 0; i < uniform(0, 3); ++i) {
    d *= uniform(2, 6);
    out.push_back(d);
  }
  return out;
}

// Oracle: invariant factors of the direct sum from SNF of diag(a, b).
ZVector merge_by_smith(const ZVector& a, const ZVector& b) {
  ZVector all = a;
  all.insert(all.end(), b.begin(), b.end());
  if (all.empty()) return {};
  return cokernel_invariant_factors(ZMatrix::diagonal(all));
}

}  // namespace

TEST_CASE("efficiency check") {
  const auto g = parse_presentation(kG), h = parse_presentation(kH);
  auto e = efficiency_check(g, {3});
  CHECK(e.deficiency_gap == 0);
  CHECK(e.efficient);
  CHECK(e.rk_h2_complex == 1);
  e = efficiency_check(h, {2, 2});
  CHECK(e.deficiency_gap == 0);
  CHECK(e.rk_h2_complex == 2);
  e = efficiency_check(parse_presentation("< x, y | x^2, y^2, (x*y)^2, (x*y)^2 >"), {2});
  CHECK(e.deficiency_gap == 1);
  CHECK_FALSE(e.efficient);
  CHECK(e.rk_h2_complex == 2);
  CHECK_THROWS_AS(efficiency_check(g, {3, 3}), ConsistencyError);
}

TEST_CASE("bing check") {
  auto b = bing_check({H2Endo{ZMatrix{{0}}, {3}}, H2Endo{ZMatrix{{1}}, {3}}}, Integer(3));
  CHECK(b.trace_residues == std::vector<Integer>{0, 1});
  CHECK(b.bing);
  b = bing_check({H2Endo{ZMatrix{{1}}, {2}}}, Integer(2));
  CHECK_FALSE(b.bing);
  b = bing_check({H2Endo{ZMatrix{{-4}}, {3}}}, Integer(3));
  CHECK(b.trace_residues == std::vector<Integer>{2});
  CHECK_FALSE(b.bing);
  b = bing_check({}, std::nullopt);
  CHECK(b.bing);
  CHECK(b.trivial_h2_convention);
}

TEST_CASE("certificate of the order-243 fixture") {
  const auto& c = certificate(kG);
  CHECK(c.order == 243);
  CHECK(c.h1_invariant_factors == ZVector{3, 3});
  CHECK(c.h2_invariant_factors == ZVector{3});
  CHECK(c.efficient);
  CHECK(c.chi == 2);
  CHECK(c.endomorphism_count == 4455);
  REQUIRE(c.induced_maps.size() == 2);
  CHECK(c.trace_residues == std::vector<Integer>{0, 1});
  CHECK(c.bing);
  CHECK(c.fpp_certified);
  CHECK_FALSE(c.conventions.trivial_h2_is_bing);
  CHECK(c.conventions.inner_invariance_samples == 16);
  CHECK(c.induced_maps[1].witness_images == std::vector<std::string>{"x", "y"});
}

TEST_CASE("certificate of the order-16 fixture") {
  const auto& c = certificate(kH);
  CHECK(c.order == 16);
  CHECK(c.h2_invariant_factors == ZVector{2, 2});
  CHECK(c.efficient);
  CHECK(c.chi == 3);
  CHECK(c.induced_maps.size() == 3);
  CHECK(c.trace_residues == std::vector<Integer>{0, 0, 0});
  CHECK(c.bing);
  CHECK(c.fpp_certified);
}

TEST_CASE("negative control and conventions") {
  const auto& k = certificate(kKlein);
  CHECK(k.efficient);
  CHECK_FALSE(k.bing);
  CHECK_FALSE(k.fpp_certified);

  const auto& c5 = certificate("< x | x^5 >");
  CHECK(c5.h2_invariant_factors.empty());
  CHECK(c5.efficient);
  CHECK(c5.bing);
  CHECK(c5.conventions.trivial_h2_is_bing);
  CHECK(c5.fpp_certified);

  const auto redundant = fpp_certificate(parse_presentation("< x, y | x^2, y^2, (x*y)^2, (x*y)^2 >"));
  CHECK(redundant.deficiency_gap == 1);
  CHECK_FALSE(redundant.efficient);
  CHECK_FALSE(redundant.fpp_certified);

  const auto free_product = wedge_presentation(parse_presentation(kG), parse_presentation(kH));
  CHECK_THROWS_AS(fpp_certificate(free_product, {.max_cosets = 20000}), CosetLimitExceeded);
}

TEST_CASE("certificate options") {
  const auto p = parse_presentation(kH);
  const auto with_oracle = fpp_certificate(p, {.oracle_check = true});
  CHECK(with_oracle.conventions.oracle == OracleStatus::Passed);
  const auto big = fpp_certificate(parse_presentation(kG), {.oracle_check = true});
  CHECK(big.conventions.oracle == OracleStatus::SkippedOrderTooLarge);
  const auto no_dedup = fpp_certificate(p, {.inner_dedup = false});
  CHECK_FALSE(no_dedup.conventions.inner_dedup);
  CHECK(no_dedup.conventions.inner_invariance_samples == 0);
  CHECK(render_report(no_dedup, ReportFormat::Json, false).find("\"inner_dedup\": false") != std::string::npos);
  // Everything but the conventions block matches the default run.
  auto a = nlohmann::json::parse(render_report(no_dedup, ReportFormat::Json, false));
  auto b = nlohmann::json::parse(render_report(certificate(kH), ReportFormat::Json, false));
  a.erase("conventions");
  b.erase("conventions");
  CHECK(a == b);
}

TEST_CASE("euler characteristic cross-check") {
  for (const char* text : {kG, kH, kKlein, kS3, kD4, kQ8, kZ3xZ3, "< x | x^5 >"}) {
    const auto& c = certificate(text);
    CHECK(c.chi == 1 - static_cast<long>(c.generator_count) + static_cast<long>(c.relator_count));
    CHECK(c.chi == 1 + static_cast<long>(c.rk_h2_complex) - static_cast<long>(c.h1_free_rank));
  }
}

TEST_CASE("validate catches inconsistent certificates") {
  Certificate c = certificate(kG);
  CHECK_NOTHROW(validate(c));
  auto broken = c;
  broken.efficient = false;
  CHECK_THROWS_AS(validate(broken), ConsistencyError);
  broken = c;
  broken.trace_residues = {0, 2};
  CHECK_THROWS_AS(validate(broken), ConsistencyError);
  broken = c;
  broken.fpp_certified = false;
  CHECK_THROWS_AS(validate(broken), ConsistencyError);
  broken = c;
  broken.chi = 3;
  CHECK_THROWS_AS(validate(broken), ConsistencyError);
  CHECK_THROWS_AS(render_report(broken, ReportFormat::Json), ConsistencyError);
}

TEST_CASE("direct-sum invariant factors") {
  CHECK(merge_invariant_factors({3}, {2, 2}) == ZVector{2, 6});
  CHECK(merge_invariant_factors({}, {4}) == ZVector{4});
  CHECK(merge_invariant_factors({}, {}).empty());
  CHECK(merge_invariant_factors({2, 12}, {3, 18}) == ZVector{6, 6, 36});
  for (int trial = 0; trial < 300; ++trial) {
    const ZVector a = random_factors(), b = random_factors(), c = random_factors();
    CHECK(merge_invariant_factors(a, b) == merge_by_smith(a, b));
    CHECK(merge_invariant_factors(a, b) == merge_invariant_factors(b, a));
    CHECK(merge_invariant_factors(merge_invariant_factors(a, b), c) ==
          merge_invariant_factors(a, merge_invariant_factors(b, c)));
    CHECK(merge_invariant_factors(a, {}) == merge_by_smith(a, {}));
  }
}

TEST_CASE("wedge analysis") {
  const auto& g = certificate(kG);
  const auto& h = certificate(kH);
  const auto w = wedge_analysis({g, h}, 1);
  CHECK(w.combined_h2_invariant_factors == ZVector{2, 6});
  CHECK(w.combined_rank == 3);
  CHECK(w.gap == 1);
  CHECK(w.conclusion == WedgeConclusion::NoFppByCitedResults);
  CHECK(to_string(w.conclusion) == "NO_FPP_BY_CITED_RESULTS");

  const auto plain = wedge_analysis({g, h}, 0);
  CHECK(plain.conclusion == WedgeConclusion::FppCertified);
  CHECK(plain.chi == 4);
  CHECK(wedge_analysis({g, certificate(kKlein)}, 0).conclusion == WedgeConclusion::Inconclusive);
  CHECK(wedge_analysis({g}, 2).conclusion == WedgeConclusion::Inconclusive);

  for (std::size_t n = 2; n <= 5; ++n) {
    const auto copies = wedge_analysis(std::vector<Certificate>(n - 1, g), 0);
    CHECK(copies.chi == static_cast<long>(n));
    // Same value from the wedge presentation itself.
    Presentation p = parse_presentation(kG);
    for (std::size_t i = 2; i < n; ++i) p = wedge_presentation(p, parse_presentation(kG));
    CHECK(euler_characteristic(p) == static_cast<long>(n));
  }
  CHECK_THROWS_AS(wedge_analysis({}, 0), std::invalid_argument);
}

TEST_CASE("report rendering") {
  const auto& g = certificate(kG);
  const std::string human = render_report(g, ReportFormat::Human);
  CHECK(human.find("χ(X_P) = 2") != std::string::npos);
  const std::string json = render_report(g, ReportFormat::Json, false);
  CHECK(json.find("\"h2_invariant_factors\": [\n    3\n  ]") != std::string::npos);
  CHECK(json == render_report(g, ReportFormat::Json, false));
  CHECK(human == render_report(g, ReportFormat::Human));

  const auto parsed = nlohmann::ordered_json::parse(render_report(g, ReportFormat::Json, true));
  std::vector<std::string> keys;
  for (const auto& [k, v] : parsed.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"presentation", "order", "h1_invariant_factors", "h2_invariant_factors",
                                         "deficiency_gap", "rk_h2_complex", "efficient", "chi",
                                         "endomorphism_count", "induced_h2_maps", "induced_h2_summary", "bing",
                                         "fpp_certified", "conventions", "timings"});
  const auto& m = parsed["induced_h2_maps"][1];
  CHECK(m["matrix"] == nlohmann::ordered_json::parse("[[1]]"));
  CHECK(m["trace_residue"] == 1);
  CHECK(m["witness_images"] == nlohmann::ordered_json::parse(R"(["x","y"])"));
  CHECK(parsed["induced_h2_summary"]["cardinality"] == 2);
  CHECK(parsed["induced_h2_summary"]["idempotents"] == 2);
  CHECK(nlohmann::json::parse(render_report(g, ReportFormat::Json, false)).count("timings") == 0);

  const auto c5 = nlohmann::json::parse(render_report(certificate("< x | x^5 >"), ReportFormat::Json, false));
  CHECK(c5["induced_h2_maps"][0]["trace_residue"].is_null());
  CHECK(c5["conventions"]["trivial_h2_is_bing"] == true);

  const auto hs = nlohmann::json::parse(render_report(certificate(kH), ReportFormat::Json, false));
  CHECK(hs["induced_h2_summary"]["involutions"] == 1);

  const auto w = wedge_analysis({g, certificate(kH)}, 1);
  const auto wj = nlohmann::json::parse(render_report(w, ReportFormat::Json, false));
  CHECK(wj["conclusion"] == "NO_FPP_BY_CITED_RESULTS");
  CHECK(wj["combined_h2_invariant_factors"] == nlohmann::json::parse("[2, 6]"));
  CHECK(render_report(w, ReportFormat::Human).find("gap = 1") != std::string::npos);
}

TEST_CASE("certificates do not depend on worker count") {
  const auto p = parse_presentation(kG);
  const auto a = render_report(fpp_certificate(p, {.workers = 1}), ReportFormat::Json, false);
  const auto b = render_report(fpp_certificate(p, {.workers = 3}), ReportFormat::Json, false);
  CHECK(a == b);
}
