// Acceptance suite: every criterion below runs at its stated tolerance and
// prints exactly one PASS/FAIL line. Exit code is the number of failures.

#include <contextuality/contextuality.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace contextuality;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kDataDir = CTX_DATA_DIR;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& what) {
  if (!condition) throw Failure(what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw Failure("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

BellObservables aerts() {
  return bell_observables(parse_input(read_file(kDataDir + "/aerts.json")));
}

BellObservables products_only(const Rational& r11, const Rational& r12,
                              const Rational& r21, const Rational& r22) {
  BellObservables o;
  o.ab = {{{r11, r12}, {r21, r22}}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) o.a[i][j] = o.b[i][j] = 0;
  return o;
}

void enforce_runtime(double elapsed, double limit, const std::string& label) {
  if (elapsed >= limit) {
    std::ostringstream msg;
    msg << label << " took " << std::fixed << std::setprecision(2) << elapsed
        << "s (limit " << limit << "s)";
    throw Failure(msg.str());
  }
}

// --------------------------------------------------------------------------

void criterion1_aerts() {
  const auto start = Clock::now();
  BellObservables o = aerts();
  BellReport r = contextuality_degree_bell(o);
  require(abs(r.delta_chsh - parse_decimal("0.210")) <= parse_decimal("0.001"),
          "Delta_CHSH = " + to_decimal_string(r.delta_chsh) + " not within 0.210 +- 0.001");
  require(abs(r.delta0 - parse_decimal("1.889")) <= parse_decimal("0.002"),
          "Delta0 = " + to_decimal_string(r.delta0) + " not within 1.889 +- 0.002");
  require(r.degree == 0, "degree = " + to_fraction_string(r.degree) + ", expected exactly 0");
  enforce_runtime(std::chrono::duration<double>(Clock::now() - start).count(), 1.0,
                  "analysis");
}

void criterion2_tsirelson() {
  const auto start = Clock::now();
  const Rational r = rational_from_double(0.7071067811865475);
  BellObservables o = products_only(r, r, r, -r);
  const Rational delta_min = delta_min_bell(o);
  const double err =
      std::abs(static_cast<double>(delta_min) - (std::sqrt(2.0) - 1.0));
  require(err < 1e-12, "Delta_min off sqrt(2)-1 by " + std::to_string(err));
  enforce_runtime(std::chrono::duration<double>(Clock::now() - start).count(), 1.0,
                  "analysis");
}

void criterion3_extremal_box() {
  BellObservables o = products_only(1, 1, 1, -1);
  require(delta_min_bell(o) == 1, "closed form is not exactly 1");
  require(min_delta_lp(o) == 1, "LP oracle is not exactly 1");
}

void criterion4_facet_counts() {
  const auto lg_start = Clock::now();
  const SystemDescriptor lg = SystemDescriptor::lg();
  LinearSystem lg_facets = facet_enumeration(enumerate_vertices(lg));
  FacetPartition lg_part = match_closed_form(lg_facets, lg);
  const double lg_elapsed =
      std::chrono::duration<double>(Clock::now() - lg_start).count();
  require(lg_facets.size() == 56, "lg facet count " + std::to_string(lg_facets.size()));
  require(lg_part.compatibility == 32 && lg_part.implicit == 24 && lg_part.ok(),
          "lg partition mismatch");
  require(lg_facets.serialize() == read_file(kDataDir + "/golden/lg_facets.txt"),
          "lg facets differ from the golden file");
  enforce_runtime(lg_elapsed, 10.0, "lg facet enumeration");

  const auto bell_start = Clock::now();
  const SystemDescriptor bell = SystemDescriptor::bell();
  LinearSystem bell_facets = facet_enumeration(enumerate_vertices(bell));
  FacetPartition bell_part = match_closed_form(bell_facets, bell);
  const double bell_elapsed =
      std::chrono::duration<double>(Clock::now() - bell_start).count();
  require(bell_facets.size() == 160,
          "bell facet count " + std::to_string(bell_facets.size()));
  require(bell_part.compatibility == 128 && bell_part.implicit == 32 && bell_part.ok(),
          "bell partition mismatch");
  require(bell_facets.serialize() == read_file(kDataDir + "/golden/bell_facets.txt"),
          "bell facets differ from the golden file");
  enforce_runtime(bell_elapsed, 300.0, "bell facet enumeration");
}

void criterion5_delta_system() {
  const SystemDescriptor bell = SystemDescriptor::bell();
  LinearSystem bell_derived = derive_delta_system(bell);
  require(bell_derived == delta_system_closed_form(bell),
          "bell projection differs from the closed form");
  require(bell_derived.serialize() == read_file(kDataDir + "/golden/bell_delta.txt"),
          "bell projection differs from the golden file");

  const SystemDescriptor lg = SystemDescriptor::lg();
  LinearSystem lg_derived = derive_delta_system(lg);
  // The definitive upper product family: even-parity (s0) signed sums.
  require(lg_derived == delta_system_closed_form(lg),
          "lg projection differs from the even-parity closed form");
  require(lg_derived.serialize() == read_file(kDataDir + "/golden/lg_delta.txt"),
          "lg projection differs from the golden file");
}

void criterion6_oracle_equivalence() {
  const auto start = Clock::now();
  VerifyReport bell = verify_equivalence(SystemKind::Bell, 1000, 42);
  require(bell.ok() && bell.delta_min_matches == 1000,
          bell.failures.empty() ? "bell count mismatch" : bell.failures.front());
  VerifyReport lg = verify_equivalence(SystemKind::LG, 1000, 42);
  require(lg.ok() && lg.delta_min_matches == 1000,
          lg.failures.empty() ? "lg count mismatch" : lg.failures.front());
  require(bell.attainment_checked > 0 && bell.attainment_ok == bell.attainment_checked,
          "bell upper-bound attainment failed");
  require(lg.attainment_checked > 0 && lg.attainment_ok == lg.attainment_checked,
          "lg upper-bound attainment failed");
  enforce_runtime(std::chrono::duration<double>(Clock::now() - start).count(), 600.0,
                  "2000 oracle instances");
}

void criterion7_feasibility_equivalence() {
  VerifyReport bell =
      verify_equivalence(SystemKind::Bell, 10000, 2026, 0, /*attainment_stride=*/0,
                         /*sharp=*/true);
  require(bell.ok() && bell.feasibility_matches == 10000,
          bell.failures.empty() ? "bell count mismatch" : bell.failures.front());
  require(bell.feasible_cases > 0 && bell.infeasible_cases > 0,
          "bell sample did not exercise both outcomes");

  VerifyReport lg =
      verify_equivalence(SystemKind::LG, 10000, 2026, 0, /*attainment_stride=*/0,
                         /*sharp=*/true);
  require(lg.ok() && lg.feasibility_matches == 10000,
          lg.failures.empty() ? "lg count mismatch" : lg.failures.front());
  require(lg.feasible_cases > 0 && lg.infeasible_cases > 0,
          "lg sample did not exercise both outcomes");
}

void criterion8_fine_theorem() {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    BellObservables o = random_bell_ms(seed);
    require(delta0_bell(o) == 0, "generator broke marginal selectivity");
    BellReport r = contextuality_degree_bell(o);
    bool chsh_within_two = true;
    for (const Rational& lhs : r.chsh_lhs)
      if (lhs > 2) chsh_within_two = false;
    require((r.degree == 0) == chsh_within_two,
            "degree and CHSH verdict disagree at seed " + std::to_string(seed));
  }
}

void criterion9_property_suites() {
  // Recoding/relabeling invariance, order relations, saturation at
  // delta0 >= 1, and bound compatibility.
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    BellObservables o = seed % 2 ? random_bell(seed) : random_bell_sharp(seed);
    BellReport r = contextuality_degree_bell(o);
    require(r.delta_min >= r.delta0 && r.delta0 >= 0 && r.degree >= 0,
            "order relations failed");
    require(r.delta_lower <= r.delta_upper, "bell bounds incompatible");
    if (r.delta0 >= 1)
      require(r.degree == 0, "nonzero degree despite delta0 >= 1");

    BellObservables recoded = o;
    for (int j = 0; j < 2; ++j) {
      recoded.a[0][j] = -recoded.a[0][j];
      recoded.ab[0][j] = -recoded.ab[0][j];
    }
    BellReport rr = contextuality_degree_bell(recoded);
    require(rr.delta0 == r.delta0 && rr.delta_chsh == r.delta_chsh &&
                rr.delta_min == r.delta_min && rr.degree == r.degree,
            "recoding changed a measure");

    BellObservables swapped;
    for (int j = 0; j < 2; ++j) {
      swapped.ab[0][j] = o.ab[1][j];
      swapped.ab[1][j] = o.ab[0][j];
      swapped.a[0][j] = o.a[1][j];
      swapped.a[1][j] = o.a[0][j];
      swapped.b[0][j] = o.b[1][j];
      swapped.b[1][j] = o.b[0][j];
    }
    BellReport rs = contextuality_degree_bell(swapped);
    require(rs.delta_min == r.delta_min && rs.degree == r.degree,
            "relabeling changed a measure");

    LGObservables l = seed % 2 ? random_lg(seed) : random_lg_sharp(seed);
    LGReport lr = delta_min_lg(l);  // asserts the two bound formulations agree
    require(lr.delta_min >= lr.delta0 && lr.degree >= 0, "lg order relations failed");
    require(lr.delta_lower <= lr.delta_upper, "lg bounds incompatible");

    LGObservables lrec = l;
    lrec.x12 = -lrec.x12;
    lrec.x13 = -lrec.x13;
    lrec.xy = -lrec.xy;
    lrec.xz = -lrec.xz;
    LGReport lrr = delta_min_lg(lrec);
    require(lrr.delta_min == lr.delta_min && lrr.degree == lr.degree,
            "lg recoding changed a measure");
  }

  // A constructed maximally signaling system: degree saturates to zero.
  BellObservables saturated;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      saturated.a[i][j] = j == 0 ? 1 : -1;
      saturated.b[i][j] = 0;
      saturated.ab[i][j] = 0;
    }
  require(delta0_bell(saturated) == 2 &&
              contextuality_degree_bell(saturated).degree == 0,
          "saturated system has nonzero degree");

  // Suppes-Zanotti generalization: under marginal selectivity with arbitrary
  // marginals, the LP minimum vanishes exactly when the two-sided bound holds.
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    LGObservables o = random_lg_ms(seed);
    const Rational total = o.xy + o.yz + o.xz;
    Rational least = o.xy;
    if (o.yz < least) least = o.yz;
    if (o.xz < least) least = o.xz;
    const bool sz_holds = Rational(-1) <= total && total <= 1 + 2 * least;
    const bool lp_zero = min_delta_lp(o) == 0;
    require(lp_zero == sz_holds,
            "Suppes-Zanotti equivalence failed at seed " + std::to_string(seed));
  }
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* description;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "published double-detection dataset reproduction", criterion1_aerts},
      {2, "quantum-bound system: Delta_min = sqrt(2)-1 within 1e-12",
       criterion2_tsirelson},
      {3, "extremal no-signaling box: Delta_min = 1 by closed form and LP",
       criterion3_extremal_box},
      {4, "facet counts 160 = 128+32 (bell) and 56 = 32+24 (lg)",
       criterion4_facet_counts},
      {5, "elimination reproduces the projected cost systems exactly",
       criterion5_delta_system},
      {6, "closed-form minimum equals the LP oracle on 2x1000 random systems",
       criterion6_oracle_equivalence},
      {7, "coupling feasibility agrees with the closed form on 2x10000 pairs",
       criterion7_feasibility_equivalence},
      {8, "degree vanishes iff CHSH holds, under marginal selectivity",
       criterion8_fine_theorem},
      {9, "invariance, ordering, saturation, and bound-compatibility suites",
       criterion9_property_suites},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    std::string verdict = "PASS", detail;
    try {
      c.run();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = std::string(" -- ") + e.what();
      ++failures;
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    std::cout << verdict << " criterion " << c.number << ": " << c.description << detail
              << " (" << std::fixed << std::setprecision(2) << elapsed << "s)"
              << std::endl;
  }
  return failures;
}
