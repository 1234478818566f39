#pragma once

// Closed-form contextuality measures for the 2x2 (Bell/CHSH-type) and
// cyclic-3 (Leggett-Garg-type) systems, with and without marginal
// selectivity, plus the closed-form coupling-compatibility tests the LP
// oracle is checked against.

#include "contextuality/core.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace contextuality {

enum class Parity { Even, Odd };

inline Rational s_parity_enumerated(const std::vector<Rational>& values, Parity parity);

// Maximum of +-v1 +- v2 +- ... +- vk over sign assignments whose number of
// minus signs has the requested parity. Closed form: the unconstrained
// maximum sum(|v_i|) needs one minus per negative entry; if that count has
// the wrong parity, the cheapest fix flips the smallest |v_i| (a zero entry
// makes the fix free, which min|v_i| = 0 already encodes). Debug builds
// cross-check every call against the exhaustive enumeration.
inline Rational s_parity(const std::vector<Rational>& values, Parity parity) {
  if (values.empty()) throw validation_error("s_parity: empty value list");
  Rational total = 0;
  Rational min_abs = abs(values.front());
  std::size_t negatives = 0;
  for (const Rational& v : values) {
    Rational a = abs(v);
    total += a;
    if (a < min_abs) min_abs = a;
    if (v < 0) ++negatives;
  }
  const bool want_odd = parity == Parity::Odd;
  Rational result = (negatives % 2 == 1) == want_odd ? total : total - 2 * min_abs;
#ifndef NDEBUG
  if (values.size() <= 12 && result != s_parity_enumerated(values, parity))
    throw internal_error("s_parity closed form disagrees with enumeration");
#endif
  return result;
}

// Exhaustive 2^k reference for s_parity; kept as an independent self-check.
inline Rational s_parity_enumerated(const std::vector<Rational>& values, Parity parity) {
  if (values.empty()) throw validation_error("s_parity: empty value list");
  const std::size_t k = values.size();
  bool found = false;
  Rational best = 0;
  for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
    const std::size_t minuses = static_cast<std::size_t>(__builtin_popcountll(mask));
    if ((minuses % 2 == 1) != (parity == Parity::Odd)) continue;
    Rational sum = 0;
    for (std::size_t i = 0; i < k; ++i)
      sum += (mask >> i) & 1 ? -values[i] : values[i];
    if (!found || sum > best) {
      best = sum;
      found = true;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Bell (2x2) system
// ---------------------------------------------------------------------------

inline std::vector<Rational> bell_products(const BellObservables& o) {
  return {o.ab[0][0], o.ab[0][1], o.ab[1][0], o.ab[1][1]};
}

// Minimum coupling cost forced by the marginals alone; the natural measure of
// signaling. Zero exactly when marginal selectivity holds.
inline Rational delta0_bell(const BellObservables& o) {
  return (abs(o.a[0][0] - o.a[0][1]) + abs(o.a[1][0] - o.a[1][1]) +
          abs(o.b[0][0] - o.b[1][0]) + abs(o.b[0][1] - o.b[1][1])) /
         2;
}

// Half the (possibly negative) excess of the maximal CHSH combination over
// its classical bound of 2. Reported unclamped.
inline Rational delta_chsh(const BellObservables& o) {
  return s_parity(bell_products(o), Parity::Odd) / 2 - 1;
}

inline Rational delta_min_bell(const BellObservables& o) {
  Rational d0 = delta0_bell(o);
  Rational dc = delta_chsh(o);
  return d0 >= dc ? d0 : dc;
}

// The four CHSH combinations |... - 2<A_ij B_ij>| with exactly one minus,
// minus placed on ab22, ab21, ab12, ab11 in that order.
inline std::array<Rational, 4> chsh_combinations(const BellObservables& o) {
  const std::vector<Rational> r = bell_products(o);
  const Rational s = r[0] + r[1] + r[2] + r[3];
  return {abs(s - 2 * r[3]), abs(s - 2 * r[2]), abs(s - 2 * r[1]), abs(s - 2 * r[0])};
}

// Largest coupling cost compatible with the observables (the upper side of
// the projected coupling polytope).
inline Rational delta_upper_bell(const BellObservables& o) {
  Rational from_products = 5 - s_parity(bell_products(o), Parity::Odd) / 2;
  Rational from_singles =
      4 - (abs(o.a[0][0] + o.a[0][1]) + abs(o.a[1][0] + o.a[1][1]) +
           abs(o.b[0][0] + o.b[1][0]) + abs(o.b[0][1] + o.b[1][1])) /
              2;
  return from_products <= from_singles ? from_products : from_singles;
}

inline bool marginal_selectivity_bell(const BellObservables& o, const Rational& tol = 0) {
  if (tol < 0) throw validation_error("marginal_selectivity_bell: negative tolerance");
  return abs(o.a[0][0] - o.a[0][1]) <= tol && abs(o.a[1][0] - o.a[1][1]) <= tol &&
         abs(o.b[0][0] - o.b[1][0]) <= tol && abs(o.b[0][1] - o.b[1][1]) <= tol;
}

struct BellReport {
  Rational delta0;
  Rational delta_chsh;
  Rational delta_min;
  Rational degree;                   // delta_min - delta0, >= 0
  std::array<Rational, 4> chsh_lhs;  // the four one-minus |combinations|
  Rational bound;                    // 2 (1 + delta0)
  bool marginal_selectivity = false;
  Rational delta_lower;  // tightest lower bound on the coupling cost
  Rational delta_upper;  // tightest upper bound on the coupling cost
};

inline BellReport contextuality_degree_bell(const BellObservables& o) {
  BellReport r;
  r.delta0 = delta0_bell(o);
  r.delta_chsh = delta_chsh(o);
  r.delta_min = r.delta0 >= r.delta_chsh ? r.delta0 : r.delta_chsh;
  r.degree = r.delta_min - r.delta0;
  r.chsh_lhs = chsh_combinations(o);
  r.bound = 2 * (1 + r.delta0);
  r.marginal_selectivity = r.delta0 == 0;
  r.delta_lower = r.delta_min;
  r.delta_upper = delta_upper_bell(o);
  return r;
}

// Closed-form coupling compatibility for the 2x2 system: both parity-mixed
// cyclic bounds plus the per-pair box constraints for all eight pairs.
inline bool connections_compatible_bell(const BellObservables& o,
                                        const BellConnections& c) {
  const std::vector<Rational> obs = bell_products(o);
  const std::vector<Rational> conn = {c.aa1, c.bb1, c.aa2, c.bb2};
  if (s_parity(obs, Parity::Even) > 6 - s_parity(conn, Parity::Odd)) return false;
  if (s_parity(obs, Parity::Odd) > 6 - s_parity(conn, Parity::Even)) return false;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!validate_context(o.context(i, j))) return false;
  return validate_context(c.aa1, o.a[0][0], o.a[0][1]) &&
         validate_context(c.aa2, o.a[1][0], o.a[1][1]) &&
         validate_context(c.bb1, o.b[0][0], o.b[1][0]) &&
         validate_context(c.bb2, o.b[0][1], o.b[1][1]);
}

// ---------------------------------------------------------------------------
// Leggett-Garg (cyclic-3) system
// ---------------------------------------------------------------------------

inline std::vector<Rational> lg_products(const LGObservables& o) {
  return {o.xy, o.xz, o.yz};
}

inline Rational delta0_lg(const LGObservables& o) {
  return (abs(o.x12 - o.x13) + abs(o.y12 - o.y23) + abs(o.z13 - o.z23)) / 2;
}

// Half the (possibly negative) maximum violation of the Suppes-Zanotti
// inequalities.
inline Rational delta_sz(const LGObservables& o) {
  return s_parity(lg_products(o), Parity::Odd) / 2 - Rational(1, 2);
}

inline Rational delta_upper_lg(const LGObservables& o) {
  Rational from_products = Rational(7, 2) - s_parity(lg_products(o), Parity::Even) / 2;
  Rational from_singles =
      3 - (abs(o.x12 + o.x13) + abs(o.y12 + o.y23) + abs(o.z13 + o.z23)) / 2;
  return from_products <= from_singles ? from_products : from_singles;
}

inline bool marginal_selectivity_lg(const LGObservables& o, const Rational& tol = 0) {
  if (tol < 0) throw validation_error("marginal_selectivity_lg: negative tolerance");
  return abs(o.x12 - o.x13) <= tol && abs(o.y12 - o.y23) <= tol &&
         abs(o.z13 - o.z23) <= tol;
}

struct LGReport {
  Rational delta0;    // Delta'_0
  Rational delta_sz;  // Delta'_SZ
  Rational delta_min; // max of the two
  Rational degree;
  std::array<Rational, 4> sz_lhs;  // xy+yz-xz, xy-yz+xz, -xy+yz+xz, -xy-yz-xz
  Rational bound;                  // 1 + 2 delta0
  bool marginal_selectivity = false;
  Rational delta_lower;
  Rational delta_upper;
};

inline LGReport delta_min_lg(const LGObservables& o) {
  LGReport r;
  r.delta0 = delta0_lg(o);
  r.delta_sz = delta_sz(o);
  r.delta_min = r.delta0 >= r.delta_sz ? r.delta0 : r.delta_sz;
  r.degree = r.delta_min - r.delta0;
  r.sz_lhs = {o.xy + o.yz - o.xz, o.xy - o.yz + o.xz, -o.xy + o.yz + o.xz,
              -o.xy - o.yz - o.xz};
  r.bound = 1 + 2 * r.delta0;
  r.marginal_selectivity = r.delta0 == 0;
  r.delta_lower = r.delta_min;
  r.delta_upper = delta_upper_lg(o);

  // The four signed-sum inequalities are equivalent to the two-sided
  // Suppes-Zanotti form  -1-2d0 <= xy+yz+xz <= 1+2d0 + 2 min{xy,yz,xz}.
  bool four_form = true;
  for (const Rational& lhs : r.sz_lhs)
    if (lhs > r.bound) four_form = false;
  Rational total = o.xy + o.yz + o.xz;
  Rational least = o.xy;
  if (o.yz < least) least = o.yz;
  if (o.xz < least) least = o.xz;
  bool two_sided = -r.bound <= total && total <= r.bound + 2 * least;
  if (four_form != two_sided)
    throw internal_error("Suppes-Zanotti formulations disagree");
  return r;
}

// Closed-form coupling compatibility for the cyclic-3 system: the six-term
// odd-parity bound plus box constraints for all six pairs.
inline bool connections_compatible_lg(const LGObservables& o, const LGConnections& c) {
  if (s_parity({o.xy, o.xz, o.yz, c.xx, c.yy, c.zz}, Parity::Odd) > 4) return false;
  return o.valid() && validate_context(c.xx, o.x12, o.x13) &&
         validate_context(c.yy, o.y12, o.y23) && validate_context(c.zz, o.z13, o.z23);
}

}  // namespace contextuality
