#pragma once

// Exact two-phase primal simplex over rationals, for LPs in equality form
//
//   minimize c.x   subject to   A x = b,  x >= 0.
//
// Pivoting uses Dantzig's rule and falls back to Bland's rule after a run of
// degenerate pivots, so termination is guaranteed without giving up speed on
// the typical path. Redundant constraint rows are tolerated (their artificial
// variables simply stay basic at zero). Infeasibility comes with a Farkas
// certificate y (y.A <= 0 componentwise, y.b > 0), verified exactly before
// being returned.

#include "contextuality/rational.hpp"

#include <cstddef>
#include <vector>

namespace contextuality {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;            // set when Optimal
  std::vector<Rational> x;       // set when Optimal
  std::vector<Rational> farkas;  // set when Infeasible
};

namespace detail {

class SimplexTableau {
 public:
  SimplexTableau(const std::vector<std::vector<Rational>>& A,
                 const std::vector<Rational>& b)
      : m_(A.size()), n_(m_ ? A[0].size() : 0) {
    flip_.assign(m_, false);
    rows_.assign(m_, std::vector<Rational>(n_ + m_ + 1, Rational(0)));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = b[i] < 0;
      flip_[i] = flip;
      for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = flip ? -A[i][j] : A[i][j];
      rows_[i][n_ + i] = 1;
      rows_[i].back() = flip ? -b[i] : b[i];
      basis_[i] = n_ + i;
    }
  }

  // Phase 1: minimize the sum of artificials. Returns its optimal value.
  Rational run_phase1() {
    cost_.assign(n_ + m_ + 1, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j <= n_ + m_; ++j)
        if (rows_[i][j] != 0) cost_[j] -= rows_[i][j];
    for (std::size_t i = 0; i < m_; ++i) cost_[n_ + i] += 1;
    pivot_until_optimal(/*allow_unbounded=*/false);
    return -cost_.back();
  }

  // Dual values of the phase-1 optimum, mapped back to the original row
  // signs; this is the Farkas certificate when phase 1 ends positive.
  std::vector<Rational> phase1_duals() const {
    std::vector<Rational> y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      y[i] = 1 - cost_[n_ + i];
      if (flip_[i]) y[i] = -y[i];
    }
    return y;
  }

  // Pivots basic artificials out where possible; rows that cannot release
  // their artificial are redundant (all structural coefficients zero) and
  // stay inert. Call only after a zero phase-1 optimum.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (rows_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 with the real objective. Artificial columns never re-enter.
  LpStatus run_phase2(const std::vector<Rational>& c) {
    cost_.assign(n_ + m_ + 1, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_ || c[basis_[i]] == 0) continue;
      const Rational factor = c[basis_[i]];
      for (std::size_t j = 0; j <= n_ + m_; ++j)
        if (rows_[i][j] != 0) cost_[j] -= factor * rows_[i][j];
    }
    return pivot_until_optimal(/*allow_unbounded=*/true);
  }

  Rational objective() const { return -cost_.back(); }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = rows_[i].back();
    return x;
  }

 private:
  static constexpr std::size_t kBlandAfter = 64;  // degenerate pivots in a row

  LpStatus pivot_until_optimal(bool allow_unbounded) {
    std::size_t degenerate_streak = 0;
    for (;;) {
      const bool bland = degenerate_streak >= kBlandAfter;
      std::size_t enter = n_ + m_;
      for (std::size_t j = 0; j < n_; ++j) {  // artificials never enter
        if (cost_[j] >= 0) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (enter == n_ + m_ || cost_[j] < cost_[enter]) enter = j;
      }
      if (enter == n_ + m_) return LpStatus::Optimal;

      std::size_t leave = m_;
      Rational best_ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        if (rows_[i][enter] <= 0) continue;
        Rational ratio = rows_[i].back() / rows_[i][enter];
        if (leave == m_ || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == m_) {
        if (!allow_unbounded) throw internal_error("phase-1 subproblem unbounded");
        return LpStatus::Unbounded;
      }
      degenerate_streak = rows_[leave].back() == 0 ? degenerate_streak + 1 : 0;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    std::vector<Rational>& pr = rows_[row];
    const Rational inv = Rational(1) / pr[col];
    if (inv != 1)
      for (Rational& v : pr)
        if (v != 0) v *= inv;
    for (std::size_t i = 0; i <= m_; ++i) {
      std::vector<Rational>& target = i == m_ ? cost_ : rows_[i];
      if (&target == &pr) continue;
      const Rational factor = target[col];
      if (factor == 0) continue;
      for (std::size_t j = 0; j <= n_ + m_; ++j)
        if (pr[j] != 0) target[j] -= factor * pr[j];
      target[col] = 0;
    }
    basis_[row] = col;
  }

  std::size_t m_, n_;
  std::vector<std::vector<Rational>> rows_;  // m x (n + m + 1), rhs last
  std::vector<Rational> cost_;
  std::vector<std::size_t> basis_;
  std::vector<bool> flip_;
};

}  // namespace detail

// Solves min c.x s.t. A x = b, x >= 0 exactly.
inline LpResult solve_equality_form(const std::vector<std::vector<Rational>>& A,
                                    const std::vector<Rational>& b,
                                    const std::vector<Rational>& c) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : c.size();
  for (const auto& row : A)
    if (row.size() != n) throw validation_error("ragged constraint matrix");
  if (b.size() != m || c.size() != n)
    throw validation_error("mismatched LP dimensions");

  if (m == 0) {  // min c.x over x >= 0 alone
    LpResult result;
    for (const Rational& cj : c)
      if (cj < 0) {
        result.status = LpStatus::Unbounded;
        return result;
      }
    result.status = LpStatus::Optimal;
    result.objective = 0;
    result.x.assign(n, Rational(0));
    return result;
  }

  detail::SimplexTableau tableau(A, b);
  LpResult result;
  if (tableau.run_phase1() > 0) {
    result.status = LpStatus::Infeasible;
    result.farkas = tableau.phase1_duals();
    // The certificate is checked exactly; failure here would be a solver bug.
    Rational yb = 0;
    for (std::size_t i = 0; i < m; ++i) yb += result.farkas[i] * b[i];
    if (yb <= 0) throw internal_error("invalid Farkas certificate (y.b <= 0)");
    for (std::size_t j = 0; j < n; ++j) {
      Rational ya = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (A[i][j] != 0) ya += result.farkas[i] * A[i][j];
      if (ya > 0) throw internal_error("invalid Farkas certificate (y.A > 0)");
    }
    return result;
  }
  tableau.drive_out_artificials();
  result.status = tableau.run_phase2(c);
  if (result.status == LpStatus::Optimal) {
    result.objective = tableau.objective();
    result.x = tableau.solution();
  }
  return result;
}

}  // namespace contextuality
