// Command-line surface: analyze measured systems, re-derive the inequality
// systems, and cross-check the closed forms against the LP oracle.
//
// Exit codes: 0 success, 1 usage or input validation failure, 2 internal
// mismatch (oracle disagreement or derivation not matching the closed form).

#include <contextuality/contextuality.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace contextuality;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw validation_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw validation_error("cannot write '" + path + "'");
  out << content;
  if (!out.good()) throw validation_error("failed writing '" + path + "'");
}

SystemKind parse_system(const std::string& name) {
  return name == "bell" ? SystemKind::Bell : SystemKind::LG;
}

int run_analyze(const std::string& input, const std::string& format, int precision) {
  InputDocument doc = parse_input(read_file(input));
  const ReportFormat fmt = format == "json" ? ReportFormat::Json : ReportFormat::Text;
  if (doc.kind == SystemKind::Bell)
    std::cout << serialize_report(contextuality_degree_bell(bell_observables(doc)), fmt,
                                  precision);
  else
    std::cout << serialize_report(delta_min_lg(lg_observables(doc)), fmt, precision);
  return 0;
}

int run_oracle(const std::string& input, int precision) {
  InputDocument doc = parse_input(read_file(input));
  Rational closed, lp;
  if (doc.kind == SystemKind::Bell) {
    BellObservables o = bell_observables(doc);
    closed = delta_min_bell(o);
    lp = min_delta_lp(o);
  } else {
    LGObservables o = lg_observables(doc);
    closed = delta_min_lg(o).delta_min;
    lp = min_delta_lp(o);
  }
  std::cout << "closed-form Delta_min: " << to_decimal_string(closed, precision)
            << " (= " << to_fraction_string(closed) << ")\n";
  std::cout << "LP oracle Delta_min:   " << to_decimal_string(lp, precision) << " (= "
            << to_fraction_string(lp) << ")\n";
  const bool agree = closed == lp;
  std::cout << "agreement: " << (agree ? "yes" : "NO") << "\n";
  return agree ? 0 : 2;
}

int run_derive(const std::string& system, const std::string& what,
               const std::string& output) {
  const SystemDescriptor d = SystemDescriptor::make(parse_system(system));
  if (what == "facets") {
    LinearSystem facets = facet_enumeration(enumerate_vertices(d));
    FacetPartition part = match_closed_form(facets, d);  // throws on mismatch
    write_file(output, facets.serialize());
    std::cout << system << ": " << facets.size() << " facets (" << part.compatibility
              << " compatibility + " << part.implicit << " implicit)\n";
    return 0;
  }
  LinearSystem derived = derive_delta_system(d);
  write_file(output, derived.serialize());
  const LinearSystem expected = delta_system_closed_form(d);
  std::cout << system << " delta system: " << derived.size() << " rows\n";
  if (derived == expected) {
    std::cout << "matches the closed-form projection";
    if (d.kind == SystemKind::LG)
      std::cout << "; upper product bounds use the even-parity (s0) family";
    std::cout << "\n";
    return 0;
  }
  std::cout << "DOES NOT match the closed-form projection\n";
  return 2;
}

int run_verify(const std::string& system, std::size_t n, std::uint64_t seed,
               unsigned threads) {
  VerifyReport report = verify_equivalence(parse_system(system), n, seed, threads);
  std::cout << report.summary() << "\n";
  std::cout << "coupling feasibility: " << report.feasibility_matches << "/" << n
            << " agree (" << report.feasible_cases << " feasible, "
            << report.infeasible_cases << " infeasible)\n";
  std::cout << "projected bounds bracket the optimum: " << report.bracket_ok << "/" << n
            << "; upper bound attained: " << report.attainment_ok << "/"
            << report.attainment_checked << "\n";
  if (!report.ok()) {
    for (const std::string& f : report.failures) std::cout << "FAIL " << f << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contextuality measures for signaling systems of binary variables"};
  app.require_subcommand(1);

  int precision = 6;
  app.add_option("--precision", precision, "decimal digits in rendered values")
      ->capture_default_str();

  std::string input_path, format = "text";
  CLI::App* analyze =
      app.add_subcommand("analyze", "measures and inequality report for an input file");
  analyze->add_option("--input", input_path, "input JSON file")->required();
  analyze->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string system_name, what = "facets", output_path;
  CLI::App* derive =
      app.add_subcommand("derive", "re-derive facet or projected-cost systems");
  derive->add_option("--system", system_name, "bell or lg")
      ->required()
      ->check(CLI::IsMember({"bell", "lg"}));
  derive->add_option("--what", what, "facets or delta-system")
      ->check(CLI::IsMember({"facets", "delta-system"}));
  derive->add_option("-o,--output", output_path, "output file for the derived system")
      ->required();

  std::string verify_system;
  std::size_t n = 1000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  CLI::App* verify =
      app.add_subcommand("verify", "closed form vs LP oracle over random systems");
  verify->add_option("--system", verify_system, "bell or lg")
      ->required()
      ->check(CLI::IsMember({"bell", "lg"}));
  verify->add_option("--n", n, "number of random systems")->capture_default_str();
  verify->add_option("--seed", seed, "random seed")->capture_default_str();
  verify->add_option("--threads", threads, "worker threads (0 = hardware)")
      ->capture_default_str();

  std::string oracle_input;
  CLI::App* oracle =
      app.add_subcommand("oracle", "LP coupling-cost minimum next to the closed form");
  oracle->add_option("--input", oracle_input, "input JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (analyze->parsed()) return run_analyze(input_path, format, precision);
    if (derive->parsed()) return run_derive(system_name, what, output_path);
    if (verify->parsed()) return run_verify(verify_system, n, seed, threads);
    if (oracle->parsed()) return run_oracle(oracle_input, precision);
  } catch (const internal_error& e) {
    std::cerr << "internal mismatch: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
