#pragma once

// Canonicalized systems of linear equalities/inequalities over named
// coordinates, with integer coefficients (denominators cleared). Canonical
// form makes system equality a plain row comparison: coefficients
// gcd-reduced, inequalities oriented as <=, equalities with positive leading
// coefficient, rows sorted lexicographically, duplicates removed.

#include "contextuality/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace contextuality {

struct LinearRow {
  std::vector<Integer> coeffs;
  Integer rhs;
  bool equality = false;

  // lhs . point, exact.
  Rational evaluate(const std::vector<Rational>& point) const {
    Rational v = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (coeffs[i] != 0) v += Rational(coeffs[i]) * point[i];
    return v;
  }

  bool satisfied_by(const std::vector<Rational>& point) const {
    Rational v = evaluate(point);
    return equality ? v == Rational(rhs) : v <= Rational(rhs);
  }

  friend bool operator==(const LinearRow&, const LinearRow&) = default;
};

inline bool row_less(const LinearRow& a, const LinearRow& b) {
  if (a.equality != b.equality) return a.equality;  // equalities first
  if (a.coeffs != b.coeffs) return std::lexicographical_compare(
      a.coeffs.begin(), a.coeffs.end(), b.coeffs.begin(), b.coeffs.end());
  return a.rhs < b.rhs;
}

class LinearSystem {
 public:
  LinearSystem() = default;
  explicit LinearSystem(std::vector<std::string> coords) : coords_(std::move(coords)) {}

  const std::vector<std::string>& coordinates() const { return coords_; }
  const std::vector<LinearRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  std::size_t coordinate_index(const std::string& name) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == name) return i;
    throw validation_error("unknown coordinate: '" + name + "'");
  }

  bool has_coordinate(const std::string& name) const {
    return std::find(coords_.begin(), coords_.end(), name) != coords_.end();
  }

  void add_row(LinearRow row) {
    if (row.coeffs.size() != coords_.size())
      throw validation_error("row width does not match coordinate count");
    rows_.push_back(std::move(row));
  }

  void add_inequality(std::vector<Integer> coeffs, Integer rhs) {
    add_row({std::move(coeffs), std::move(rhs), false});
  }

  void add_equality(std::vector<Integer> coeffs, Integer rhs) {
    add_row({std::move(coeffs), std::move(rhs), true});
  }

  // Clears denominators by the common multiple before storing.
  void add_inequality(const std::vector<Rational>& coeffs, const Rational& rhs) {
    add_row(cleared(coeffs, rhs, false));
  }

  void add_equality(const std::vector<Rational>& coeffs, const Rational& rhs) {
    add_row(cleared(coeffs, rhs, true));
  }

  std::size_t equality_count() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.equality;
    return n;
  }

  std::size_t inequality_count() const { return rows_.size() - equality_count(); }

  bool satisfies(const std::vector<Rational>& point) const {
    for (const auto& r : rows_)
      if (!r.satisfied_by(point)) return false;
    return true;
  }

  // Reduce every row, drop trivially true rows, orient, sort, dedupe.
  void canonicalize() {
    std::vector<LinearRow> keep;
    keep.reserve(rows_.size());
    for (LinearRow& r : rows_)
      if (canonicalize_row(r)) keep.push_back(std::move(r));
    std::sort(keep.begin(), keep.end(), row_less);
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    rows_ = std::move(keep);
  }

  // Removes a coordinate whose column is identically zero (post-elimination).
  LinearSystem without_coordinate(std::size_t idx) const {
    std::vector<std::string> coords = coords_;
    coords.erase(coords.begin() + static_cast<std::ptrdiff_t>(idx));
    LinearSystem out(std::move(coords));
    for (const auto& r : rows_) {
      if (r.coeffs[idx] != 0)
        throw internal_error("cannot drop coordinate with nonzero coefficient");
      LinearRow nr = r;
      nr.coeffs.erase(nr.coeffs.begin() + static_cast<std::ptrdiff_t>(idx));
      out.rows_.push_back(std::move(nr));
    }
    return out;
  }

  // One row per line: "c1*name1 + c2*name2 + ... <= k" (or "= k"), integer
  // coefficients, zero coefficients omitted, rows in canonical order.
  std::string serialize() const {
    std::ostringstream out;
    for (const auto& r : rows_) {
      bool any = false;
      for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
        if (r.coeffs[i] == 0) continue;
        if (any) out << " + ";
        out << r.coeffs[i].str() << "*" << coords_[i];
        any = true;
      }
      if (!any) out << "0";
      out << (r.equality ? " = " : " <= ") << r.rhs.str() << "\n";
    }
    return out.str();
  }

  friend bool operator==(const LinearSystem&, const LinearSystem&) = default;

 private:
  LinearRow cleared(const std::vector<Rational>& coeffs, const Rational& rhs,
                    bool equality) const {
    if (coeffs.size() != coords_.size())
      throw validation_error("row width does not match coordinate count");
    Integer lcm = denominator_of(rhs);
    for (const Rational& c : coeffs)
      lcm = lcm / gcd(lcm, denominator_of(c)) * denominator_of(c);
    LinearRow row;
    row.coeffs.reserve(coeffs.size());
    for (const Rational& c : coeffs)
      row.coeffs.push_back(numerator_of(c) * (lcm / denominator_of(c)));
    row.rhs = numerator_of(rhs) * (lcm / denominator_of(rhs));
    row.equality = equality;
    return row;
  }

  // Returns false when the row is trivially true and should be dropped.
  static bool canonicalize_row(LinearRow& r) {
    Integer g = 0;
    for (const Integer& c : r.coeffs) g = gcd(g, c);
    g = gcd(g, r.rhs);
    if (g == 0) return false;  // 0 = 0
    bool all_zero = true;
    for (const Integer& c : r.coeffs)
      if (c != 0) {
        all_zero = false;
        break;
      }
    if (all_zero && !r.equality && r.rhs >= 0) return false;  // 0 <= k, k >= 0
    for (Integer& c : r.coeffs) c /= g;
    r.rhs /= g;
    if (r.equality) {
      for (const Integer& c : r.coeffs) {
        if (c == 0) continue;
        if (c < 0) {
          for (Integer& x : r.coeffs) x = -x;
          r.rhs = -r.rhs;
        }
        break;
      }
      if (all_zero && r.rhs < 0) r.rhs = -r.rhs;  // 0 = -1  ->  0 = 1
    }
    return true;
  }

  std::vector<std::string> coords_;
  std::vector<LinearRow> rows_;
};

}  // namespace contextuality
