#pragma once

// System descriptors tie together the fixed variable/atom order, the observed
// and connection pairs, and the expectation coordinates (products of observed
// pairs, singles, products of connection pairs) in which the coupling
// polytopes live. Also the 0/1 marginal matrix M with p = M q and the
// vertex map sending each atom to its expectation-coordinate image.

#include "contextuality/core.hpp"
#include "contextuality/linear_system.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace contextuality {

// One expectation coordinate: a single variable (second < 0) or a product.
struct CoordinateDef {
  std::string name;
  int first = 0;
  int second = -1;
};

struct SystemDescriptor {
  SystemKind kind;
  std::vector<std::string> variables;
  std::vector<VariablePair> observed;
  std::vector<VariablePair> connections;
  std::vector<CoordinateDef> coordinates;  // observed products, singles, connections

  static SystemDescriptor make(SystemKind kind) {
    SystemDescriptor d;
    d.kind = kind;
    d.variables = variable_names(kind);
    d.observed = observed_pairs(kind);
    d.connections = connection_pairs(kind);
    if (kind == SystemKind::Bell) {
      d.coordinates = {
          {"ab11", 0, 1}, {"ab12", 2, 3}, {"ab21", 4, 5}, {"ab22", 6, 7},
          {"a11", 0, -1}, {"a12", 2, -1}, {"a21", 4, -1}, {"a22", 6, -1},
          {"b11", 1, -1}, {"b12", 3, -1}, {"b21", 5, -1}, {"b22", 7, -1},
          {"aa1", 0, 2},  {"aa2", 4, 6},  {"bb1", 1, 5},  {"bb2", 3, 7}};
    } else {
      d.coordinates = {{"xy", 0, 1},   {"xz", 2, 3},   {"yz", 4, 5},
                       {"x12", 0, -1}, {"x13", 2, -1}, {"y12", 1, -1},
                       {"y23", 4, -1}, {"z13", 3, -1}, {"z23", 5, -1},
                       {"xx", 0, 2},   {"yy", 1, 4},   {"zz", 3, 5}};
    }
    return d;
  }

  static SystemDescriptor bell() { return make(SystemKind::Bell); }
  static SystemDescriptor lg() { return make(SystemKind::LG); }

  std::size_t atoms() const { return atom_count(kind); }
  std::size_t dimension() const { return coordinates.size(); }

  std::vector<std::string> coordinate_names() const {
    std::vector<std::string> names;
    names.reserve(coordinates.size());
    for (const auto& c : coordinates) names.push_back(c.name);
    return names;
  }

  // Value of one expectation coordinate at one atom: sigma_V or sigma_V*sigma_W.
  int coordinate_sign(std::size_t atom, const CoordinateDef& c) const {
    int s = atom_sign(kind, atom, c.first);
    if (c.second >= 0) s *= atom_sign(kind, atom, c.second);
    return s;
  }
};

// The binary matrix M with p = M q: one row per (pair, outcome combination),
// observed pairs first, outcomes ordered (+,+), (+,-), (-,+), (-,-).
// M[r][q] = 1 iff atom q assigns that outcome combination to the pair.
struct MarginalMatrix {
  std::vector<VariablePair> pairs;          // observed then connection pairs
  std::vector<std::vector<std::uint8_t>> rows;

  std::size_t row_of(std::size_t pair_index, bool first_plus, bool second_plus) const {
    return pair_index * 4 + (first_plus ? 0 : 2) + (second_plus ? 0 : 1);
  }
};

inline MarginalMatrix build_marginal_matrix(const SystemDescriptor& d) {
  MarginalMatrix m;
  m.pairs = d.observed;
  m.pairs.insert(m.pairs.end(), d.connections.begin(), d.connections.end());
  const std::size_t n = d.atoms();
  m.rows.assign(m.pairs.size() * 4, std::vector<std::uint8_t>(n, 0));
  for (std::size_t p = 0; p < m.pairs.size(); ++p) {
    for (std::size_t atom = 0; atom < n; ++atom) {
      const bool fp = atom_sign(d.kind, atom, m.pairs[p].first) > 0;
      const bool sp = atom_sign(d.kind, atom, m.pairs[p].second) > 0;
      m.rows[m.row_of(p, fp, sp)][atom] = 1;
    }
  }
  return m;
}

// Per-pair probabilities in the same row order as build_marginal_matrix,
// reconstructed exactly from the pair's expectations.
inline std::array<Rational, 4> pair_probabilities(const Rational& product,
                                                  const Rational& first,
                                                  const Rational& second) {
  ContextTable t = table_from_expectations(product, first, second);
  return {t.pp, t.pm, t.mp, t.mm};
}

// The expectation-coordinate image of every atom, in atom order. All entries
// are +1 or -1 and, for Bell/LG descriptors, the points are pairwise distinct.
struct VertexSet {
  std::vector<std::string> coords;
  std::vector<std::vector<Integer>> points;
};

inline VertexSet enumerate_vertices(const SystemDescriptor& d) {
  VertexSet v;
  v.coords = d.coordinate_names();
  v.points.reserve(d.atoms());
  for (std::size_t atom = 0; atom < d.atoms(); ++atom) {
    std::vector<Integer> point;
    point.reserve(d.dimension());
    for (const auto& c : d.coordinates) point.emplace_back(d.coordinate_sign(atom, c));
    v.points.push_back(std::move(point));
  }
  return v;
}

}  // namespace contextuality
