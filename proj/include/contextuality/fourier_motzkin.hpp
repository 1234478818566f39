#pragma once

// Projection machinery: Fourier-Motzkin elimination of named coordinates,
// LP-based removal of redundant inequalities, and the pipeline that projects
// a compatibility facet system onto (observables, coupling cost).
//
// The LPs here have few variables and many constraints, so they are solved
// through their duals: maximizing c.x over {A x <= b} becomes a simplex run
// on min b.l s.t. A^T l = c, l >= 0, and feasibility of {A x <= b} is the
// absence of a Farkas certificate (min b.l s.t. A^T l = 0, l >= 0 staying
// at zero).

#include "contextuality/facet_enum.hpp"
#include "contextuality/linear_system.hpp"
#include "contextuality/simplex.hpp"
#include "contextuality/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace contextuality {

// Eliminates one coordinate: every lower bound is paired with every upper
// bound, coordinate-free rows pass through, and the result is canonicalized
// over the remaining coordinates. Equalities involving the coordinate are
// first split into opposite inequalities. A system with the coordinate
// absent projects to itself.
inline LinearSystem fourier_motzkin_eliminate(const LinearSystem& sys,
                                              const std::string& var) {
  if (!sys.has_coordinate(var)) {
    LinearSystem out = sys;
    out.canonicalize();
    return out;
  }
  const std::size_t idx = sys.coordinate_index(var);

  std::vector<LinearRow> lower, upper;
  LinearSystem out(sys.coordinates());
  for (const LinearRow& row : sys.rows()) {
    if (row.coeffs[idx] == 0) {
      out.add_row(row);
      continue;
    }
    if (row.equality) {
      LinearRow le = row, ge = row;
      le.equality = false;
      ge.equality = false;
      for (Integer& c : ge.coeffs) c = -c;
      ge.rhs = -ge.rhs;
      (le.coeffs[idx] > 0 ? upper : lower).push_back(std::move(le));
      (ge.coeffs[idx] > 0 ? upper : lower).push_back(std::move(ge));
    } else {
      (row.coeffs[idx] > 0 ? upper : lower).push_back(row);
    }
  }

  for (const LinearRow& lo : lower) {
    for (const LinearRow& up : upper) {
      const Integer ml = up.coeffs[idx];   // > 0
      const Integer mu = -lo.coeffs[idx];  // > 0
      LinearRow combined;
      combined.coeffs.resize(lo.coeffs.size());
      for (std::size_t j = 0; j < lo.coeffs.size(); ++j)
        combined.coeffs[j] = ml * lo.coeffs[j] + mu * up.coeffs[j];
      combined.rhs = ml * lo.rhs + mu * up.rhs;
      out.add_row(std::move(combined));
    }
  }
  out.canonicalize();
  return out.without_coordinate(out.coordinate_index(var));
}

namespace detail {

// Dual data of "max c.x over the inequalities of sys": columns are the
// inequality rows (equalities contribute a +/- column pair).
struct DualProblem {
  std::vector<std::vector<Rational>> cols;  // coefficient vectors, one per dual var
  std::vector<Rational> rhs;                // primal right-hand sides
};

inline DualProblem build_dual(const LinearSystem& sys) {
  DualProblem d;
  for (const LinearRow& row : sys.rows()) {
    std::vector<Rational> col(row.coeffs.begin(), row.coeffs.end());
    d.cols.push_back(col);
    d.rhs.emplace_back(row.rhs);
    if (row.equality) {
      for (Rational& v : col) v = -v;
      d.cols.push_back(std::move(col));
      d.rhs.emplace_back(-Rational(row.rhs));
    }
  }
  return d;
}

// Assembles the simplex input for  min rhs.l  s.t.  sum_i l_i col_i = target.
inline LpResult solve_dual(const DualProblem& d, const std::vector<Rational>& target) {
  const std::size_t dim = target.size();
  const std::size_t n = d.cols.size();
  std::vector<std::vector<Rational>> A(dim, std::vector<Rational>(n, Rational(0)));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < dim; ++i) A[i][j] = d.cols[j][i];
  return solve_equality_form(A, target, d.rhs);
}

}  // namespace detail

// Whether { x : rows of sys } is nonempty, by absence of a Farkas
// certificate.
inline bool system_feasible(const LinearSystem& sys) {
  detail::DualProblem d = detail::build_dual(sys);
  LpResult r = detail::solve_dual(d, std::vector<Rational>(sys.coordinates().size(),
                                                           Rational(0)));
  switch (r.status) {
    case LpStatus::Unbounded:
      return false;  // arbitrarily negative certificate value
    case LpStatus::Optimal:
      return r.objective >= 0;
    case LpStatus::Infeasible:
      throw internal_error("Farkas LP cannot be infeasible");
  }
  return false;
}

struct MaximizeResult {
  LpStatus status = LpStatus::Optimal;  // Optimal or Unbounded
  Rational value;
};

// Max of objective.x over sys, which must be feasible (callers establish
// this first); dual infeasibility then certifies an unbounded maximum.
inline MaximizeResult maximize_over(const LinearSystem& sys,
                                    const std::vector<Rational>& objective) {
  detail::DualProblem d = detail::build_dual(sys);
  LpResult r = detail::solve_dual(d, objective);
  switch (r.status) {
    case LpStatus::Optimal:
      return {LpStatus::Optimal, r.objective};
    case LpStatus::Infeasible:
      return {LpStatus::Unbounded, Rational(0)};
    case LpStatus::Unbounded:
      throw internal_error("dual unbounded: primal system was infeasible");
  }
  return {};
}

// Drops every inequality whose removal leaves the feasible set unchanged:
// maximize the row's left-hand side subject to the remaining rows and drop
// the row iff the optimum still satisfies it (an unbounded subproblem keeps
// the row, an infeasible remainder makes it vacuous). Rows are tested in
// canonical order against the current (already pruned) set, so the result
// is deterministic. Equalities are never dropped.
inline LinearSystem remove_redundant(LinearSystem sys) {
  sys.canonicalize();
  std::vector<LinearRow> live(sys.rows().begin(), sys.rows().end());
  bool known_feasible = system_feasible(sys);

  std::size_t i = 0;
  while (i < live.size()) {
    if (live[i].equality) {
      ++i;
      continue;
    }
    LinearSystem others(sys.coordinates());
    for (std::size_t j = 0; j < live.size(); ++j)
      if (j != i) others.add_row(live[j]);

    bool drop = false;
    if (!known_feasible && !system_feasible(others)) {
      drop = true;  // empty remainder implies every row
    } else {
      std::vector<Rational> obj(live[i].coeffs.begin(), live[i].coeffs.end());
      MaximizeResult r = maximize_over(others, obj);
      drop = r.status == LpStatus::Optimal && r.value <= Rational(live[i].rhs);
    }
    if (drop)
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }

  LinearSystem out(sys.coordinates());
  for (LinearRow& row : live) out.add_row(std::move(row));
  out.canonicalize();
  return out;
}

// Projects the compatibility facet system onto the observables and the
// coupling cost ("delta", appended as the last coordinate): adjoin the
// defining equation 2*delta + sum(connections) = #connections, substitute it
// for the first connection coordinate, then eliminate the remaining
// connection coordinates in declaration order, pruning redundant rows after
// every step.
inline LinearSystem derive_delta_system(const SystemDescriptor& d,
                                        const LinearSystem& facets) {
  std::vector<std::string> coords = facets.coordinates();
  coords.push_back("delta");
  LinearSystem sys(coords);
  const std::size_t width = coords.size();
  const std::size_t delta = width - 1;
  for (const LinearRow& row : facets.rows()) {
    LinearRow wide = row;
    wide.coeffs.push_back(0);
    sys.add_row(std::move(wide));
  }

  std::vector<std::size_t> conn_idx;
  for (const auto& p : d.connections) conn_idx.push_back(sys.coordinate_index(p.name));
  const Integer k(long(d.connections.size()));

  // Substitute first connection = k - 2*delta - (other connections).
  {
    LinearSystem substituted(coords);
    for (LinearRow row : sys.rows()) {
      const Integer a = row.coeffs[conn_idx.front()];
      if (a != 0) {
        row.coeffs[conn_idx.front()] = 0;
        for (std::size_t c = 1; c < conn_idx.size(); ++c) row.coeffs[conn_idx[c]] -= a;
        row.coeffs[delta] -= 2 * a;
        row.rhs -= a * k;
      }
      substituted.add_row(std::move(row));
    }
    substituted.canonicalize();
    sys = substituted.without_coordinate(conn_idx.front());
  }
  sys = remove_redundant(std::move(sys));

  for (std::size_t c = 1; c < conn_idx.size(); ++c) {
    sys = fourier_motzkin_eliminate(sys, d.connections[c].name);
    sys = remove_redundant(std::move(sys));
  }
  return sys;
}

inline LinearSystem derive_delta_system(const SystemDescriptor& d) {
  return derive_delta_system(d, facet_enumeration(enumerate_vertices(d)));
}

}  // namespace contextuality
