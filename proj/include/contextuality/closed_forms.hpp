#pragma once

// Expected halfspace representations in closed form: the coupling
// compatibility systems (signed-parity cyclic bounds plus per-pair box
// constraints) and the projected coupling-cost systems, both as
// canonicalized LinearSystems. These are what the enumerated facets and the
// Fourier-Motzkin projection are matched against.

#include "contextuality/linear_system.hpp"
#include "contextuality/measures.hpp"
#include "contextuality/system.hpp"

#include <string>
#include <vector>

namespace contextuality {

namespace detail {

// All sign patterns over `members` whose minus-count parity matches; each
// yields  sum(eps_i * coord_i) <= rhs.
inline void add_parity_rows(LinearSystem& sys, const std::vector<std::size_t>& members,
                            Parity parity, const Integer& rhs,
                            const std::vector<Integer>& base = {},
                            const Integer& base_rhs_shift = 0) {
  const std::size_t k = members.size();
  const std::size_t width = sys.coordinates().size();
  for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
    const bool odd = __builtin_popcountll(mask) % 2 == 1;
    if (odd != (parity == Parity::Odd)) continue;
    std::vector<Integer> coeffs = base.empty() ? std::vector<Integer>(width, Integer(0))
                                               : base;
    for (std::size_t i = 0; i < k; ++i)
      coeffs[members[i]] += (mask >> i) & 1 ? Integer(-1) : Integer(1);
    sys.add_inequality(std::move(coeffs), rhs + base_rhs_shift);
  }
}

// -1 + |v + w| <= r <= 1 - |v - w| as four rows.
inline void add_implicit_rows(LinearSystem& sys, std::size_t r, std::size_t v,
                              std::size_t w) {
  const std::size_t width = sys.coordinates().size();
  auto row = [&](int cr, int cv, int cw) {
    std::vector<Integer> coeffs(width, Integer(0));
    coeffs[r] = cr;
    coeffs[v] += cv;
    coeffs[w] += cw;
    sys.add_inequality(std::move(coeffs), Integer(1));
  };
  row(+1, +1, -1);
  row(+1, -1, +1);
  row(-1, +1, +1);
  row(-1, -1, -1);
}

struct PairCoords {
  std::size_t product, first_single, second_single;
};

inline std::vector<PairCoords> pair_coordinate_indices(const SystemDescriptor& d,
                                                       const LinearSystem& sys) {
  // Locate, for every observed and connection pair, the product coordinate
  // and the single coordinates of its two members.
  auto single_index = [&](int var) {
    for (std::size_t i = 0; i < d.coordinates.size(); ++i)
      if (d.coordinates[i].second < 0 && d.coordinates[i].first == var)
        return sys.coordinate_index(d.coordinates[i].name);
    throw internal_error("no single coordinate for variable");
  };
  auto product_index = [&](const VariablePair& p) {
    for (std::size_t i = 0; i < d.coordinates.size(); ++i)
      if (d.coordinates[i].second >= 0 &&
          ((d.coordinates[i].first == p.first && d.coordinates[i].second == p.second) ||
           (d.coordinates[i].first == p.second && d.coordinates[i].second == p.first)))
        return sys.coordinate_index(d.coordinates[i].name);
    throw internal_error("no product coordinate for pair");
  };
  std::vector<PairCoords> out;
  for (const auto& p : d.observed)
    out.push_back({product_index(p), single_index(p.first), single_index(p.second)});
  for (const auto& p : d.connections)
    out.push_back({product_index(p), single_index(p.first), single_index(p.second)});
  return out;
}

}  // namespace detail

// The coupling compatibility system in expectation coordinates: odd-parity
// signed sums of the cyclic products bounded by (cycle length - 2), plus the
// box constraints of every pair. Bell: 128 + 32 rows; LG: 32 + 24 rows.
inline LinearSystem compatibility_system(const SystemDescriptor& d) {
  LinearSystem sys(d.coordinate_names());
  const auto pairs = detail::pair_coordinate_indices(d, sys);
  std::vector<std::size_t> cycle;
  for (const auto& pc : pairs) cycle.push_back(pc.product);
  const Integer bound = Integer(long(pairs.size())) - 2;
  detail::add_parity_rows(sys, cycle, Parity::Odd, bound);
  for (const auto& pc : pairs)
    detail::add_implicit_rows(sys, pc.product, pc.first_single, pc.second_single);
  sys.canonicalize();
  return sys;
}

// Only the box-constraint rows (used to classify facets in the partition).
inline LinearSystem implicit_constraint_system(const SystemDescriptor& d) {
  LinearSystem sys(d.coordinate_names());
  for (const auto& pc : detail::pair_coordinate_indices(d, sys))
    detail::add_implicit_rows(sys, pc.product, pc.first_single, pc.second_single);
  sys.canonicalize();
  return sys;
}

// The projected coupling-cost system over the observables and the coordinate
// "delta" (appended last). Lower bounds come from the odd-parity products and
// the single differences, upper bounds from the opposite-parity products
// (odd for the 8-cycle, even for the 6-cycle) and the single sums; the
// observed pairs' box constraints remain.
inline LinearSystem delta_system_closed_form(const SystemDescriptor& d) {
  std::vector<std::string> coords;
  for (const auto& c : d.coordinates) {
    bool is_connection = false;
    for (const auto& p : d.connections)
      if (c.second >= 0 && ((c.first == p.first && c.second == p.second) ||
                            (c.first == p.second && c.second == p.first)))
        is_connection = true;
    if (!is_connection) coords.push_back(c.name);
  }
  coords.push_back("delta");
  LinearSystem sys(coords);
  const std::size_t width = coords.size();
  const std::size_t delta = width - 1;

  // Product coordinates are the first |observed| coordinates by construction.
  std::vector<std::size_t> products;
  for (std::size_t i = 0; i < d.observed.size(); ++i) products.push_back(i);

  const bool bell = d.kind == SystemKind::Bell;
  const Integer lower_rhs = bell ? 2 : 1;   // sum(eps r) - 2 delta <= 2(cycle/2) - 2
  const Integer upper_rhs = bell ? 10 : 7;  // sum(eps r) + 2 delta <= ...
  const Parity upper_parity = bell ? Parity::Odd : Parity::Even;

  {  // lower product bounds
    std::vector<Integer> base(width, Integer(0));
    base[delta] = -2;
    detail::add_parity_rows(sys, products, Parity::Odd, lower_rhs, base);
  }
  {  // upper product bounds
    std::vector<Integer> base(width, Integer(0));
    base[delta] = 2;
    detail::add_parity_rows(sys, products, upper_parity, upper_rhs, base);
  }

  // Single-difference lower bounds and single-sum upper bounds: one row per
  // sign pattern over the connections' member singles.
  const auto singles = [&]() {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& p : d.connections) {
      std::size_t a = width, b = width;
      for (const auto& c : d.coordinates)
        if (c.second < 0) {
          if (c.first == p.first) a = sys.coordinate_index(c.name);
          if (c.first == p.second) b = sys.coordinate_index(c.name);
        }
      out.emplace_back(a, b);
    }
    return out;
  }();
  const std::size_t k = singles.size();
  for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
    std::vector<Integer> lower(width, Integer(0)), upper(width, Integer(0));
    lower[delta] = -2;
    upper[delta] = 2;
    for (std::size_t i = 0; i < k; ++i) {
      const Integer s = (mask >> i) & 1 ? Integer(-1) : Integer(1);
      lower[singles[i].first] += s;
      lower[singles[i].second] -= s;
      upper[singles[i].first] += s;
      upper[singles[i].second] += s;
    }
    sys.add_inequality(std::move(lower), Integer(0));
    sys.add_inequality(std::move(upper), Integer(bell ? 8 : 6));
  }

  // Box constraints of the observed pairs.
  for (std::size_t i = 0; i < d.observed.size(); ++i) {
    const auto& p = d.observed[i];
    std::size_t a = width, b = width;
    for (const auto& c : d.coordinates)
      if (c.second < 0) {
        if (c.first == p.first) a = sys.coordinate_index(c.name);
        if (c.first == p.second) b = sys.coordinate_index(c.name);
      }
    detail::add_implicit_rows(sys, i, a, b);
  }
  sys.canonicalize();
  return sys;
}

// Partition of enumerated facets into cyclic-compatibility rows and box
// rows. Exact canonical-form matching; any unmatched or missing row is an
// error listing the offending rows.
struct FacetPartition {
  std::size_t compatibility = 0;
  std::size_t implicit = 0;
  std::vector<std::string> unmatched;  // facets matching neither family
  std::vector<std::string> missing;    // expected rows not enumerated

  bool ok() const { return unmatched.empty() && missing.empty(); }
};

inline FacetPartition match_closed_form(const LinearSystem& facets,
                                        const SystemDescriptor& d,
                                        bool throw_on_mismatch = true) {
  LinearSystem expected = compatibility_system(d);
  LinearSystem boxes = implicit_constraint_system(d);
  auto serialize_row = [&](const LinearRow& row) {
    LinearSystem one(facets.coordinates());
    one.add_row(row);
    std::string s = one.serialize();
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
  };

  FacetPartition part;
  std::vector<bool> seen(expected.rows().size(), false);
  for (const auto& row : facets.rows()) {
    bool found = false;
    for (std::size_t i = 0; i < expected.rows().size(); ++i) {
      if (!seen[i] && expected.rows()[i] == row) {
        seen[i] = true;
        found = true;
        bool is_box = false;
        for (const auto& b : boxes.rows())
          if (b == row) is_box = true;
        if (is_box)
          ++part.implicit;
        else
          ++part.compatibility;
        break;
      }
    }
    if (!found) part.unmatched.push_back(serialize_row(row));
  }
  for (std::size_t i = 0; i < expected.rows().size(); ++i)
    if (!seen[i]) part.missing.push_back(serialize_row(expected.rows()[i]));

  if (throw_on_mismatch && !part.ok()) {
    std::string msg = "facet partition mismatch;";
    if (!part.unmatched.empty()) {
      msg += " unmatched:";
      for (const auto& s : part.unmatched) msg += " [" + s + "]";
    }
    if (!part.missing.empty()) {
      msg += " missing:";
      for (const auto& s : part.missing) msg += " [" + s + "]";
    }
    throw internal_error(msg);
  }
  return part;
}

}  // namespace contextuality
