// fpp: fixed point property certificates for presentation complexes.
//
// Exit codes: 0 success, 1 usage or other error, 2 coset limit exceeded,
// 3 parse error, 4 internal consistency failure.

#include "fpp/certify.hpp"
#include "fpp/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum ExitCode { kOk = 0, kOther = 1, kCosetLimit = 2, kParse = 3, kConsistency = 4 };

fpp::Presentation load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return fpp::parse_presentation(text.str());
}

std::string factors(const fpp::ZVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + "]";
}

struct Common {
  std::size_t max_cosets = fpp::kDefaultMaxCosets;
  std::size_t workers = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--max-cosets", c.max_cosets, "Coset cap for enumeration")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", c.workers, "Worker threads for endomorphism stages")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify the fixed point property of presentation complexes"};
  app.require_subcommand(1);

  std::string file;
  Common common;

  auto* certify = app.add_subcommand("certify", "Full certificate for one presentation");
  bool json = false, no_dedup = false, oracle = false, no_timings = false;
  certify->add_option("file", file, "Presentation file")->required();
  certify->add_flag("--json", json, "Canonical JSON output");
  certify->add_flag("--no-inner-dedup", no_dedup, "Lift every endomorphism, not one per inner class");
  certify->add_flag("--oracle-check", oracle, "Cross-check H_2 with the bar complex (|G| <= 16)");
  certify->add_flag("--no-timings", no_timings, "Omit stage timings");
  add_common(certify, common);

  auto* order = app.add_subcommand("order", "Order of the presented group");
  order->add_option("file", file, "Presentation file")->required();
  add_common(order, common);

  auto* homology = app.add_subcommand("homology", "Integral homology of the group");
  int degree = 2;
  homology->add_option("file", file, "Presentation file")->required();
  homology->add_option("--degree", degree, "Degree")->required()->check(CLI::IsMember({1, 2}));
  add_common(homology, common);

  auto* chi = app.add_subcommand("chi", "Euler characteristic of the presentation complex");
  chi->add_option("file", file, "Presentation file")->required();

  auto* endos = app.add_subcommand("endos", "Endomorphisms of the group");
  bool induced = false;
  endos->add_option("file", file, "Presentation file")->required();
  endos->add_flag("--induced", induced, "Also list the induced maps on H_2");
  add_common(endos, common);

  auto* wedge = app.add_subcommand("wedge", "One-point union of presentation complexes");
  std::vector<std::string> files;
  std::size_t copies = 1, extra_disks = 0;
  bool wedge_json = false;
  wedge->add_option("files", files, "Presentation files")->required();
  wedge->add_option("--copies", copies, "Copies of each listed complex")->check(CLI::PositiveNumber);
  wedge->add_option("--extra-disks", extra_disks, "2-cells attached along arcs, collapsible");
  wedge->add_flag("--json", wedge_json, "Canonical JSON output");
  wedge->add_flag("--no-timings", no_timings, "Omit stage timings");
  add_common(wedge, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kOther;
  }

  try {
    if (certify->parsed()) {
      fpp::CertifyOptions opts;
      opts.max_cosets = common.max_cosets;
      opts.workers = common.workers;
      opts.inner_dedup = !no_dedup;
      opts.oracle_check = oracle;
      const auto cert = fpp::fpp_certificate(load(file), opts);
      std::cout << fpp::render_report(cert, json ? fpp::ReportFormat::Json : fpp::ReportFormat::Human,
                                      !no_timings);
    } else if (order->parsed()) {
      std::cout << fpp::todd_coxeter(load(file), common.max_cosets).order() << "\n";
    } else if (homology->parsed()) {
      const auto p = load(file);
      const auto res = fpp::build_resolution(fpp::todd_coxeter(p, common.max_cosets), p);
      if (degree == 1) {
        const auto h1 = fpp::h1_of_group(res);
        std::cout << factors(h1.invariant_factors);
        if (h1.free_rank) std::cout << " free rank " << h1.free_rank;
        std::cout << "\n";
      } else {
        std::cout << factors(fpp::h2_of_group(res).invariant_factors()) << "\n";
      }
    } else if (chi->parsed()) {
      std::cout << fpp::euler_characteristic(load(file)) << "\n";
    } else if (endos->parsed()) {
      const auto p = load(file);
      const auto t = fpp::todd_coxeter(p, common.max_cosets);
      const auto all = fpp::enumerate_endomorphisms(t, p, {.workers = common.workers});
      std::cout << "endomorphisms: " << all.size() << "\n";
      if (induced) {
        const auto res = fpp::build_resolution(t, p);
        const auto h2 = fpp::h2_of_group(res);
        const auto set = fpp::induced_h2_set(t, p, res, h2, all, {.workers = common.workers});
        std::cout << "H_2 invariant factors: " << factors(h2.invariant_factors()) << "\n";
        std::cout << "induced maps: " << set.maps.size() << "\n";
        for (const auto& m : set.maps) {
          std::cout << "  " << fpp::to_string(m.map.matrix) << "  multiplicity " << m.multiplicity << "  witness (";
          const auto& img = m.witness.images();
          for (std::size_t i = 0; i < img.size(); ++i)
            std::cout << (i ? ", " : "") << fpp::format_word(t.representative_word(img[i]), p.generator_names);
          std::cout << ")\n";
        }
      }
    } else if (wedge->parsed()) {
      fpp::CertifyOptions opts;
      opts.max_cosets = common.max_cosets;
      opts.workers = common.workers;
      std::vector<fpp::Certificate> certs;
      for (const auto& f : files) {
        const auto cert = fpp::fpp_certificate(load(f), opts);
        for (std::size_t i = 0; i < copies; ++i) certs.push_back(cert);
      }
      const auto report = fpp::wedge_analysis(certs, extra_disks);
      std::cout << fpp::render_report(report, wedge_json ? fpp::ReportFormat::Json : fpp::ReportFormat::Human,
                                      !no_timings);
    }
  } catch (const fpp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const fpp::CosetLimitExceeded& e) {
    std::cerr << "coset limit exceeded: " << e.what() << "\n";
    return kCosetLimit;
  } catch (const fpp::ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return kConsistency;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOk;
}
