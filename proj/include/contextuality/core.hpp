#pragma once

// Domain types for systems of binary (+1/-1) random variables observed in
// pairs under incompatible conditions: per-context joint tables, observed
// expectations, connection expectations, and couplings (joint distributions
// over all variables at once). All types are immutable value types and all
// operations are pure.

#include "contextuality/rational.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace contextuality {

enum class SystemKind { Bell, LG };

// Joint distribution of one observed pair, outcomes ordered
// (+1,+1), (+1,-1), (-1,+1), (-1,-1).
struct ContextTable {
  Rational pp, pm, mp, mm;

  Rational sum() const { return pp + pm + mp + mm; }
};

// Published tables are often rounded; a row printed as summing to 0.999
// is accepted as-is (and never renormalized).
inline const Rational kTableSumTolerance = Rational(1, 500);

inline void validate_table(const ContextTable& t, const std::string& where = "table") {
  auto check_cell = [&](const Rational& v, const char* name) {
    if (v < 0)
      throw validation_error(where + "." + name + ": negative probability " +
                             to_fraction_string(v));
  };
  check_cell(t.pp, "pp");
  check_cell(t.pm, "pm");
  check_cell(t.mp, "mp");
  check_cell(t.mm, "mm");
  if (abs(t.sum() - 1) > kTableSumTolerance)
    throw validation_error(where + ": sum out of tolerance (= " +
                           to_fraction_string(t.sum()) + ")");
}

// Product and single expectations of one observed pair.
struct ContextExpectations {
  Rational ab, a, b;
};

// <VW>, <V>, <W> from the joint table. Cells are used raw, so a table whose
// printed sum is 0.999 yields the expectations of exactly those cells.
inline ContextExpectations expectations_from_table(const ContextTable& t,
                                                   const std::string& where = "table") {
  validate_table(t, where);
  return {t.pp - t.pm - t.mp + t.mm,   // <VW>
          t.pp + t.pm - t.mp - t.mm,   // <V>
          t.pp - t.pm + t.mp - t.mm};  // <W>
}

// True iff a joint table with these expectations exists:
// -1 + |a+b| <= ab <= 1 - |a-b|, everything in [-1, 1].
inline bool validate_context(const Rational& ab, const Rational& a, const Rational& b) {
  if (abs(ab) > 1 || abs(a) > 1 || abs(b) > 1) return false;
  return Rational(-1) + abs(a + b) <= ab && ab <= Rational(1) - abs(a - b);
}

inline bool validate_context(const ContextExpectations& e) {
  return validate_context(e.ab, e.a, e.b);
}

// Inverse of expectations_from_table on valid contexts: p = (1 +- a +- b +- ab)/4.
inline ContextTable table_from_expectations(const Rational& ab, const Rational& a,
                                            const Rational& b) {
  return {(1 + a + b + ab) / 4, (1 + a - b - ab) / 4,
          (1 - a + b - ab) / 4, (1 - a - b + ab) / 4};
}

inline ContextTable table_from_expectations(const ContextExpectations& e) {
  return table_from_expectations(e.ab, e.a, e.b);
}

// Observed expectations of the 2x2 system: four contexts (i,j), each with
// product ab[i][j] = <A_ij B_ij> and singles a[i][j] = <A_ij>, b[i][j] = <B_ij>.
// Indices are 0-based.
struct BellObservables {
  std::array<std::array<Rational, 2>, 2> ab, a, b;

  ContextExpectations context(int i, int j) const { return {ab[i][j], a[i][j], b[i][j]}; }

  bool valid() const {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (!validate_context(context(i, j))) return false;
    return true;
  }

  static BellObservables from_tables(const ContextTable& t11, const ContextTable& t12,
                                     const ContextTable& t21, const ContextTable& t22) {
    BellObservables obs;
    const ContextTable* tables[2][2] = {{&t11, &t12}, {&t21, &t22}};
    const char* names[2][2] = {{"a1b1", "a1b2"}, {"a2b1", "a2b2"}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        ContextExpectations e = expectations_from_table(*tables[i][j], names[i][j]);
        obs.ab[i][j] = e.ab;
        obs.a[i][j] = e.a;
        obs.b[i][j] = e.b;
      }
    return obs;
  }
};

// Observed expectations of the cyclic-3 (temporal) system: three contexts
// pairing (X12,Y12), (X13,Z13), (Y23,Z23), with all six single expectations.
struct LGObservables {
  Rational xy, xz, yz;                      // <X12 Y12>, <X13 Z13>, <Y23 Z23>
  Rational x12, x13, y12, y23, z13, z23;    // singles

  bool valid() const {
    return validate_context(xy, x12, y12) && validate_context(xz, x13, z13) &&
           validate_context(yz, y23, z23);
  }

  static LGObservables from_tables(const ContextTable& txy, const ContextTable& txz,
                                   const ContextTable& tyz) {
    ContextExpectations exy = expectations_from_table(txy, "xy");
    ContextExpectations exz = expectations_from_table(txz, "xz");
    ContextExpectations eyz = expectations_from_table(tyz, "yz");
    return {exy.ab, exz.ab, eyz.ab, exy.a, exz.a, exy.b, eyz.a, exz.b, eyz.b};
  }
};

// Expectations of the unobservable same-output pairs across contexts.
struct BellConnections {
  Rational aa1, aa2, bb1, bb2;  // <A11 A12>, <A21 A22>, <B11 B21>, <B12 B22>
};

struct LGConnections {
  Rational xx, yy, zz;  // <X12 X13>, <Y12 Y23>, <Z13 Z23>
};

// Fixed variable orders shared by couplings, marginal matrices, vertex
// enumeration, and the LP oracle. Atom index encodes variable values bitwise,
// most-significant bit first, bit 1 <-> value +1.
inline const std::vector<std::string>& variable_names(SystemKind kind) {
  static const std::vector<std::string> bell = {"A11", "B11", "A12", "B12",
                                                "A21", "B21", "A22", "B22"};
  static const std::vector<std::string> lg = {"X12", "Y12", "X13", "Z13", "Y23", "Z23"};
  return kind == SystemKind::Bell ? bell : lg;
}

inline int variable_count(SystemKind kind) { return kind == SystemKind::Bell ? 8 : 6; }

inline std::size_t atom_count(SystemKind kind) {
  return std::size_t(1) << variable_count(kind);
}

// Value (+1/-1) of variable `var` (index into variable_names) in `atom`.
inline int atom_sign(SystemKind kind, std::size_t atom, int var) {
  const int shift = variable_count(kind) - 1 - var;
  return (atom >> shift) & 1 ? +1 : -1;
}

// An (ordered) pair of variables; `first` indexes the table rows.
struct VariablePair {
  std::string name;
  int first = 0, second = 0;
};

inline const std::vector<VariablePair>& observed_pairs(SystemKind kind) {
  static const std::vector<VariablePair> bell = {
      {"a1b1", 0, 1}, {"a1b2", 2, 3}, {"a2b1", 4, 5}, {"a2b2", 6, 7}};
  static const std::vector<VariablePair> lg = {{"xy", 0, 1}, {"xz", 2, 3}, {"yz", 4, 5}};
  return kind == SystemKind::Bell ? bell : lg;
}

inline const std::vector<VariablePair>& connection_pairs(SystemKind kind) {
  static const std::vector<VariablePair> bell = {
      {"aa1", 0, 2}, {"aa2", 4, 6}, {"bb1", 1, 5}, {"bb2", 3, 7}};
  static const std::vector<VariablePair> lg = {{"xx", 0, 2}, {"yy", 1, 4}, {"zz", 3, 5}};
  return kind == SystemKind::Bell ? bell : lg;
}

inline VariablePair find_pair(SystemKind kind, const std::string& name) {
  for (const auto& p : observed_pairs(kind))
    if (p.name == name) return p;
  for (const auto& p : connection_pairs(kind))
    if (p.name == name) return p;
  throw validation_error("unknown pair name: '" + name + "'");
}

// A joint distribution over all variables of the system: one probability per
// atom (2^8 for Bell, 2^6 for LG).
struct Coupling {
  SystemKind kind;
  std::vector<Rational> atoms;

  void validate() const {
    if (atoms.size() != atom_count(kind))
      throw validation_error("coupling has " + std::to_string(atoms.size()) +
                             " atoms, expected " + std::to_string(atom_count(kind)));
    Rational total = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i] < 0)
        throw validation_error("coupling atom " + std::to_string(i) + " is negative");
      total += atoms[i];
    }
    if (total != 1)
      throw validation_error("coupling atoms sum to " + to_fraction_string(total));
  }

  static Coupling uniform(SystemKind kind) {
    return {kind, std::vector<Rational>(atom_count(kind),
                                        Rational(1, long(atom_count(kind))))};
  }

  static Coupling point_mass(SystemKind kind, std::size_t atom) {
    Coupling q{kind, std::vector<Rational>(atom_count(kind), Rational(0))};
    q.atoms.at(atom) = 1;
    return q;
  }
};

// Exact 2-marginal of a coupling for any observed or connection pair.
inline ContextTable coupling_marginal(const Coupling& q, const VariablePair& pair) {
  q.validate();
  ContextTable t{0, 0, 0, 0};
  for (std::size_t atom = 0; atom < q.atoms.size(); ++atom) {
    const bool fp = atom_sign(q.kind, atom, pair.first) > 0;
    const bool sp = atom_sign(q.kind, atom, pair.second) > 0;
    Rational& cell = fp ? (sp ? t.pp : t.pm) : (sp ? t.mp : t.mm);
    cell += q.atoms[atom];
  }
  return t;
}

inline ContextTable coupling_marginal(const Coupling& q, const std::string& pair_name) {
  return coupling_marginal(q, find_pair(q.kind, pair_name));
}

}  // namespace contextuality
