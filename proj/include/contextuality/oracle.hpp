#pragma once

// Independent LP-based ground truth. The coupling cost is minimized (or
// maximized) directly over all couplings, and coupling existence for given
// connection expectations is decided by exact feasibility, using nothing but
// core types, the marginal matrix, and the exact simplex; no closed forms,
// no derived facet data. verify_equivalence is the harness that compares
// this route against the closed-form measures over seeded random systems.

#include "contextuality/core.hpp"
#include "contextuality/measures.hpp"
#include "contextuality/simplex.hpp"
#include "contextuality/system.hpp"

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace contextuality {

class infeasibility_error : public std::runtime_error {
 public:
  infeasibility_error(const std::string& what, std::vector<Rational> certificate)
      : std::runtime_error(what), farkas(std::move(certificate)) {}

  std::vector<Rational> farkas;  // y.A <= 0 componentwise, y.b > 0
};

namespace detail {

// Number of connection pairs whose members disagree in the atom; the LP
// objective weights.
inline std::vector<Rational> disagreement_objective(const SystemDescriptor& d) {
  std::vector<Rational> c(d.atoms());
  for (std::size_t atom = 0; atom < d.atoms(); ++atom) {
    long count = 0;
    for (const auto& p : d.connections)
      if (atom_sign(d.kind, atom, p.first) != atom_sign(d.kind, atom, p.second))
        ++count;
    c[atom] = count;
  }
  return c;
}

struct MarginalLp {
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
};

// Equality constraints: the marginal-matrix rows of the selected pairs with
// right-hand sides reconstructed from the pairs' expectations, plus the
// normalization row.
inline MarginalLp marginal_constraints(
    const SystemDescriptor& d, const MarginalMatrix& m,
    const std::vector<std::pair<std::size_t, std::array<Rational, 4>>>& pairs) {
  MarginalLp lp;
  const std::size_t n = d.atoms();
  for (const auto& [pair_index, probs] : pairs) {
    for (int o = 0; o < 4; ++o) {
      const auto& row = m.rows[pair_index * 4 + static_cast<std::size_t>(o)];
      lp.A.emplace_back(row.begin(), row.end());
      lp.b.push_back(probs[static_cast<std::size_t>(o)]);
    }
  }
  lp.A.emplace_back(n, Rational(1));
  lp.b.emplace_back(1);
  return lp;
}

inline void require_valid_bell(const BellObservables& o) {
  static const char* names[2][2] = {{"a1b1", "a1b2"}, {"a2b1", "a2b2"}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!validate_context(o.context(i, j)))
        throw validation_error(std::string("invalid context ") + names[i][j]);
}

inline void require_valid_lg(const LGObservables& o) {
  if (!validate_context(o.xy, o.x12, o.y12)) throw validation_error("invalid context xy");
  if (!validate_context(o.xz, o.x13, o.z13)) throw validation_error("invalid context xz");
  if (!validate_context(o.yz, o.y23, o.z23)) throw validation_error("invalid context yz");
}

inline std::vector<std::pair<std::size_t, std::array<Rational, 4>>> observed_rhs(
    const BellObservables& o) {
  return {{0, pair_probabilities(o.ab[0][0], o.a[0][0], o.b[0][0])},
          {1, pair_probabilities(o.ab[0][1], o.a[0][1], o.b[0][1])},
          {2, pair_probabilities(o.ab[1][0], o.a[1][0], o.b[1][0])},
          {3, pair_probabilities(o.ab[1][1], o.a[1][1], o.b[1][1])}};
}

inline std::vector<std::pair<std::size_t, std::array<Rational, 4>>> observed_rhs(
    const LGObservables& o) {
  return {{0, pair_probabilities(o.xy, o.x12, o.y12)},
          {1, pair_probabilities(o.xz, o.x13, o.z13)},
          {2, pair_probabilities(o.yz, o.y23, o.z23)}};
}

template <typename Observables>
std::pair<Rational, Coupling> optimize_delta(const Observables& o, bool maximize) {
  constexpr bool is_bell = std::is_same_v<Observables, BellObservables>;
  if constexpr (is_bell)
    require_valid_bell(o);
  else
    require_valid_lg(o);
  const SystemDescriptor d =
      SystemDescriptor::make(is_bell ? SystemKind::Bell : SystemKind::LG);
  const MarginalMatrix m = build_marginal_matrix(d);
  MarginalLp lp = marginal_constraints(d, m, observed_rhs(o));
  std::vector<Rational> c = disagreement_objective(d);
  if (maximize)
    for (Rational& v : c) v = -v;
  LpResult r = solve_equality_form(lp.A, lp.b, c);
  if (r.status == LpStatus::Infeasible)
    throw infeasibility_error("marginal constraints infeasible", std::move(r.farkas));
  if (r.status != LpStatus::Optimal)
    throw internal_error("coupling LP cannot be unbounded");
  return {maximize ? -r.objective : r.objective, Coupling{d.kind, std::move(r.x)}};
}

}  // namespace detail

// Exact minimum of the coupling cost over all couplings matching the
// observed 2-marginals.
inline Rational min_delta_lp(const BellObservables& o) {
  return detail::optimize_delta(o, false).first;
}
inline Rational min_delta_lp(const LGObservables& o) {
  return detail::optimize_delta(o, false).first;
}

// Same, also returning an optimal coupling.
inline std::pair<Rational, Coupling> min_delta_lp_witness(const BellObservables& o) {
  return detail::optimize_delta(o, false);
}
inline std::pair<Rational, Coupling> min_delta_lp_witness(const LGObservables& o) {
  return detail::optimize_delta(o, false);
}

// Exact maximum of the same objective (the other end of the projected
// coupling polytope).
inline Rational max_delta_lp(const BellObservables& o) {
  return detail::optimize_delta(o, true).first;
}
inline Rational max_delta_lp(const LGObservables& o) {
  return detail::optimize_delta(o, true).first;
}

namespace detail {

template <typename Observables>
Rational min_delta_singles(const Observables& o) {
  constexpr bool is_bell = std::is_same_v<Observables, BellObservables>;
  if constexpr (is_bell)
    require_valid_bell(o);
  else
    require_valid_lg(o);
  const SystemDescriptor d =
      SystemDescriptor::make(is_bell ? SystemKind::Bell : SystemKind::LG);
  const std::size_t n = d.atoms();
  MarginalLp lp;
  // One row per variable: Pr[V = +1] = (1 + <V>)/2; products unconstrained.
  std::vector<Rational> singles;
  if constexpr (is_bell)
    singles = {o.a[0][0], o.b[0][0], o.a[0][1], o.b[0][1],
               o.a[1][0], o.b[1][0], o.a[1][1], o.b[1][1]};
  else
    singles = {o.x12, o.y12, o.x13, o.z13, o.y23, o.z23};
  for (int v = 0; v < variable_count(d.kind); ++v) {
    std::vector<Rational> row(n, Rational(0));
    for (std::size_t atom = 0; atom < n; ++atom)
      if (atom_sign(d.kind, atom, v) > 0) row[atom] = 1;
    lp.A.push_back(std::move(row));
    lp.b.push_back((1 + singles[static_cast<std::size_t>(v)]) / 2);
  }
  lp.A.emplace_back(n, Rational(1));
  lp.b.emplace_back(1);
  LpResult r = solve_equality_form(lp.A, lp.b, disagreement_objective(d));
  if (r.status != LpStatus::Optimal)
    throw internal_error("single-marginal LP must be feasible and bounded");
  return r.objective;
}

}  // namespace detail

// Minimum coupling cost when only the single marginals are enforced: the
// LP counterpart of the signaling measure delta0.
inline Rational min_delta_singles_lp(const BellObservables& o) {
  return detail::min_delta_singles(o);
}
inline Rational min_delta_singles_lp(const LGObservables& o) {
  return detail::min_delta_singles(o);
}

struct CouplingFeasibility {
  bool feasible = false;
  Coupling witness;               // set when feasible
  std::vector<Rational> farkas;   // set when infeasible
};

// Whether a coupling exists matching both the observed and the connection
// 2-marginals; returns a witness coupling or a Farkas certificate.
inline CouplingFeasibility coupling_feasible(const BellObservables& o,
                                             const BellConnections& c) {
  detail::require_valid_bell(o);
  for (const Rational& v : {c.aa1, c.aa2, c.bb1, c.bb2})
    if (abs(v) > 1) throw validation_error("connection expectation outside [-1, 1]");
  const SystemDescriptor d = SystemDescriptor::bell();
  const MarginalMatrix m = build_marginal_matrix(d);
  auto rhs = detail::observed_rhs(o);
  rhs.push_back({4, pair_probabilities(c.aa1, o.a[0][0], o.a[0][1])});
  rhs.push_back({5, pair_probabilities(c.aa2, o.a[1][0], o.a[1][1])});
  rhs.push_back({6, pair_probabilities(c.bb1, o.b[0][0], o.b[1][0])});
  rhs.push_back({7, pair_probabilities(c.bb2, o.b[0][1], o.b[1][1])});
  detail::MarginalLp lp = detail::marginal_constraints(d, m, rhs);
  LpResult r = solve_equality_form(lp.A, lp.b, std::vector<Rational>(d.atoms(), Rational(0)));
  CouplingFeasibility out;
  if (r.status == LpStatus::Optimal) {
    out.feasible = true;
    out.witness = Coupling{d.kind, std::move(r.x)};
  } else {
    out.farkas = std::move(r.farkas);
  }
  return out;
}

inline CouplingFeasibility coupling_feasible(const LGObservables& o,
                                             const LGConnections& c) {
  detail::require_valid_lg(o);
  for (const Rational& v : {c.xx, c.yy, c.zz})
    if (abs(v) > 1) throw validation_error("connection expectation outside [-1, 1]");
  const SystemDescriptor d = SystemDescriptor::lg();
  const MarginalMatrix m = build_marginal_matrix(d);
  auto rhs = detail::observed_rhs(o);
  rhs.push_back({3, pair_probabilities(c.xx, o.x12, o.x13)});
  rhs.push_back({4, pair_probabilities(c.yy, o.y12, o.y23)});
  rhs.push_back({5, pair_probabilities(c.zz, o.z13, o.z23)});
  detail::MarginalLp lp = detail::marginal_constraints(d, m, rhs);
  LpResult r = solve_equality_form(lp.A, lp.b, std::vector<Rational>(d.atoms(), Rational(0)));
  CouplingFeasibility out;
  if (r.status == LpStatus::Optimal) {
    out.feasible = true;
    out.witness = Coupling{d.kind, std::move(r.x)};
  } else {
    out.farkas = std::move(r.farkas);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic random systems for property testing
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index,
                              std::uint64_t salt = 0) {
  return splitmix64(seed ^ splitmix64(index + 1) ^ splitmix64(salt * 0x51ull));
}

// Top 32 bits of the raw engine output; avoids distribution objects so the
// stream is identical on every platform.
inline std::uint64_t draw_u32(std::mt19937_64& eng) { return eng() >> 32; }

inline const Integer& two32() {
  static const Integer v = Integer(1) << 32;
  return v;
}

// A random joint table: four integer weights over their sum.
inline ContextTable random_table(std::mt19937_64& eng) {
  for (;;) {
    Integer n[4];
    Integer total = 0;
    for (auto& v : n) {
      v = Integer(draw_u32(eng));
      total += v;
    }
    if (total == 0) continue;
    return {Rational(n[0], total), Rational(n[1], total), Rational(n[2], total),
            Rational(n[3], total)};
  }
}

// Half plain tables, half tables concentrated on one diagonal, so product
// expectations near +-1 (where the cyclic compatibility bounds actually
// bind) appear with useful frequency.
inline ContextTable random_sharp_table(std::mt19937_64& eng) {
  const std::uint64_t pick = draw_u32(eng);
  if ((pick & 3) < 2) return random_table(eng);
  const bool correlated = (pick & 1) == 0;
  for (;;) {
    const Integer big1(draw_u32(eng)), big2(draw_u32(eng));
    const Integer small1(draw_u32(eng) & 0x3ff), small2(draw_u32(eng) & 0x3ff);
    const Integer total = big1 + big2 + small1 + small2;
    if (total == 0) continue;
    if (correlated)
      return {Rational(big1, total), Rational(small1, total), Rational(small2, total),
              Rational(big2, total)};
    return {Rational(small1, total), Rational(big1, total), Rational(big2, total),
            Rational(small2, total)};
  }
}

// Uniform dyadic rational in [lo, hi].
inline Rational random_in(std::mt19937_64& eng, const Rational& lo, const Rational& hi) {
  return lo + Rational(Integer(draw_u32(eng)), two32()) * (hi - lo);
}

// A product expectation consistent with the two singles; endpoints drawn
// with positive probability to stress the boundary.
inline Rational random_product(std::mt19937_64& eng, const Rational& first,
                               const Rational& second) {
  const Rational lo = -1 + abs(first + second);
  const Rational hi = 1 - abs(first - second);
  switch (draw_u32(eng) & 3) {
    case 0:
      return lo;
    case 1:
      return hi;
    default:
      return random_in(eng, lo, hi);
  }
}

inline Rational random_single(std::mt19937_64& eng) {
  return random_in(eng, Rational(-1), Rational(1));
}

}  // namespace detail

// Deterministic pseudorandom valid systems: each context's table is four
// 32-bit integers over their sum, so validity holds by construction and the
// same seed always reproduces the same system.
inline BellObservables random_bell(std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  BellObservables o;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ContextExpectations e = expectations_from_table(detail::random_table(eng));
      o.ab[i][j] = e.ab;
      o.a[i][j] = e.a;
      o.b[i][j] = e.b;
    }
  return o;
}

inline LGObservables random_lg(std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  return LGObservables::from_tables(detail::random_table(eng),
                                    detail::random_table(eng),
                                    detail::random_table(eng));
}

// Variants biased toward near-deterministic contexts; these exercise the
// regime where compatibility actually fails.
inline BellObservables random_bell_sharp(std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  BellObservables o;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ContextExpectations e = expectations_from_table(detail::random_sharp_table(eng));
      o.ab[i][j] = e.ab;
      o.a[i][j] = e.a;
      o.b[i][j] = e.b;
    }
  return o;
}

inline LGObservables random_lg_sharp(std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  return LGObservables::from_tables(detail::random_sharp_table(eng),
                                    detail::random_sharp_table(eng),
                                    detail::random_sharp_table(eng));
}

// Exactly marginal-selective random systems (singles shared across contexts,
// products drawn within each context's admissible interval).
inline BellObservables random_bell_ms(std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  const Rational a1 = detail::random_single(eng), a2 = detail::random_single(eng);
  const Rational b1 = detail::random_single(eng), b2 = detail::random_single(eng);
  BellObservables o;
  const Rational a_of[2] = {a1, a2}, b_of[2] = {b1, b2};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      o.a[i][j] = a_of[i];
      o.b[i][j] = b_of[j];
      o.ab[i][j] = detail::random_product(eng, a_of[i], b_of[j]);
    }
  return o;
}

inline LGObservables random_lg_ms(std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  const Rational x = detail::random_single(eng), y = detail::random_single(eng),
                 z = detail::random_single(eng);
  LGObservables o;
  o.x12 = o.x13 = x;
  o.y12 = o.y23 = y;
  o.z13 = o.z23 = z;
  o.xy = detail::random_product(eng, x, y);
  o.xz = detail::random_product(eng, x, z);
  o.yz = detail::random_product(eng, y, z);
  return o;
}

namespace detail {

// Per-pair value for one of the generator modes below.
inline Rational connection_value(std::mt19937_64& eng, int mode, const Rational& first,
                                 const Rational& second) {
  switch (mode) {
    case 0:
      return -1 + abs(first + second);  // most anticorrelated admissible
    case 1:
      return 1 - abs(first - second);  // most correlated admissible
    default:
      return random_product(eng, first, second);
  }
}

}  // namespace detail

// Random connection expectations satisfying each pair's box constraint
// against its singles. A quarter of the draws push every connection to the
// same extreme of its box, so incompatible combinations occur with useful
// frequency alongside compatible ones.
inline BellConnections random_bell_connections(const BellObservables& o,
                                               std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  const int mode = static_cast<int>(detail::draw_u32(eng) & 7);  // 0, 1, or mixed
  return {detail::connection_value(eng, mode, o.a[0][0], o.a[0][1]),
          detail::connection_value(eng, mode, o.a[1][0], o.a[1][1]),
          detail::connection_value(eng, mode, o.b[0][0], o.b[1][0]),
          detail::connection_value(eng, mode, o.b[0][1], o.b[1][1])};
}

inline LGConnections random_lg_connections(const LGObservables& o, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  const int mode = static_cast<int>(detail::draw_u32(eng) & 7);
  return {detail::connection_value(eng, mode, o.x12, o.x13),
          detail::connection_value(eng, mode, o.y12, o.y23),
          detail::connection_value(eng, mode, o.z13, o.z23)};
}

// ---------------------------------------------------------------------------
// Equivalence verification harness
// ---------------------------------------------------------------------------

struct VerifyReport {
  std::size_t instances = 0;
  std::size_t delta_min_matches = 0;
  std::size_t feasibility_matches = 0;
  std::size_t feasible_cases = 0;
  std::size_t infeasible_cases = 0;
  std::size_t bracket_ok = 0;
  std::size_t attainment_checked = 0;
  std::size_t attainment_ok = 0;
  std::vector<std::string> failures;  // ordered by instance index

  bool ok() const { return failures.empty(); }

  std::string summary() const {
    std::ostringstream out;
    out << instances - failures.size() << "/" << instances
        << " instances: closed form = LP oracle";
    if (!failures.empty()) out << "; first failure: " << failures.front();
    return out.str();
  }
};

namespace detail {

struct InstanceOutcome {
  bool delta_ok = false, feas_ok = false, bracket_ok = false;
  bool attainment_checked = false, attainment_ok = true;
  bool feasible = false;
  std::string failure;  // empty when fine
};

template <typename Observables, typename Connections>
InstanceOutcome check_instance(const Observables& obs, const Connections& conn,
                               bool check_attainment) {
  constexpr bool is_bell = std::is_same_v<Observables, BellObservables>;
  InstanceOutcome out;
  Rational closed, lower, upper;
  bool closed_feasible;
  if constexpr (is_bell) {
    closed = delta_min_bell(obs);
    lower = closed;
    upper = delta_upper_bell(obs);
    closed_feasible = connections_compatible_bell(obs, conn);
  } else {
    closed = delta_min_lg(obs).delta_min;
    lower = closed;
    upper = delta_upper_lg(obs);
    closed_feasible = connections_compatible_lg(obs, conn);
  }
  const Rational lp = min_delta_lp(obs);
  out.delta_ok = lp == closed;
  if (!out.delta_ok)
    out.failure = "delta_min mismatch: lp=" + to_fraction_string(lp) +
                  " closed=" + to_fraction_string(closed);

  const bool lp_feasible = coupling_feasible(obs, conn).feasible;
  out.feasible = lp_feasible;
  out.feas_ok = lp_feasible == closed_feasible;
  if (!out.feas_ok && out.failure.empty())
    out.failure = std::string("feasibility mismatch: lp=") +
                  (lp_feasible ? "feasible" : "infeasible") +
                  " closed=" + (closed_feasible ? "feasible" : "infeasible");

  out.bracket_ok = lower <= lp && lp <= upper;
  if (!out.bracket_ok && out.failure.empty()) out.failure = "bounds do not bracket LP value";

  if (check_attainment) {
    out.attainment_checked = true;
    const Rational lp_max = max_delta_lp(obs);
    out.attainment_ok = lp_max == upper;
    if (!out.attainment_ok && out.failure.empty())
      out.failure = "upper bound not attained: lp_max=" + to_fraction_string(lp_max) +
                    " upper=" + to_fraction_string(upper);
  }
  return out;
}

}  // namespace detail

// Runs n seeded instances (optionally across worker threads; results are
// merged by instance index, so the report is identical either way). Each
// instance checks closed-form delta_min against the LP, closed-form coupling
// compatibility against LP feasibility, the projected bounds bracketing, and
// on a stride of instances that the projected upper bound is attained.
// `sharp` switches to the near-deterministic observable generator.
inline VerifyReport verify_equivalence(SystemKind kind, std::size_t n,
                                       std::uint64_t seed, unsigned threads = 0,
                                       std::size_t attainment_stride = 16,
                                       bool sharp = false) {
  if (n == 0) throw validation_error("verify_equivalence: n must be positive");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, 64);

  std::vector<detail::InstanceOutcome> outcomes(n);
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const bool attain = attainment_stride != 0 && i % attainment_stride == 0;
      if (kind == SystemKind::Bell) {
        BellObservables obs = sharp ? random_bell_sharp(detail::mix_seed(seed, i))
                                    : random_bell(detail::mix_seed(seed, i));
        BellConnections conn = random_bell_connections(obs, detail::mix_seed(seed, i, 1));
        outcomes[i] = detail::check_instance(obs, conn, attain);
      } else {
        LGObservables obs = sharp ? random_lg_sharp(detail::mix_seed(seed, i))
                                  : random_lg(detail::mix_seed(seed, i));
        LGConnections conn = random_lg_connections(obs, detail::mix_seed(seed, i, 1));
        outcomes[i] = detail::check_instance(obs, conn, attain);
      }
    }
  };

  if (threads <= 1 || n < 2) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      if (begin >= n) break;
      pool.emplace_back(worker, begin, std::min(n, begin + chunk));
    }
    for (auto& th : pool) th.join();
  }

  VerifyReport report;
  report.instances = n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = outcomes[i];
    report.delta_min_matches += o.delta_ok;
    report.feasibility_matches += o.feas_ok;
    report.bracket_ok += o.bracket_ok;
    report.attainment_checked += o.attainment_checked;
    report.attainment_ok += o.attainment_checked && o.attainment_ok;
    (o.feasible ? report.feasible_cases : report.infeasible_cases) += 1;
    if (!o.failure.empty())
      report.failures.push_back("instance " + std::to_string(i) + ": " + o.failure);
  }
  return report;
}

}  // namespace contextuality
