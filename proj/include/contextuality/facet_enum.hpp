#pragma once

// Exact facet enumeration (V- to H-representation) by the incremental
// double-description method, run on the dual cone: a point p lifts to the
// constraint c0 + c.p >= 0, and the extreme rays (c0, c) of the constrained
// cone are exactly the facets -c.x <= c0 of conv(P) when P is
// full-dimensional. Affinely deficient input is handled by first splitting
// off the affine hull as equalities (one per non-pivot coordinate, in solved
// form) and enumerating facets in the pivot coordinates. All arithmetic is
// integer/rational; insertion follows the lexicographic order of the points.

#include "contextuality/linear_system.hpp"
#include "contextuality/system.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace contextuality {
namespace detail {

// Fixed-width bit set sized at run time; tracks which constraints a ray
// satisfies with equality.
class ZeroSet {
 public:
  explicit ZeroSet(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }

  static ZeroSet intersect(const ZeroSet& a, const ZeroSet& b) {
    ZeroSet out;
    out.words_.resize(a.words_.size());
    for (std::size_t w = 0; w < a.words_.size(); ++w)
      out.words_[w] = a.words_[w] & b.words_[w];
    return out;
  }

  bool contains(const ZeroSet& other) const {  // other subseteq this
    for (std::size_t w = 0; w < words_.size(); ++w)
      if ((other.words_[w] & ~words_[w]) != 0) return false;
    return true;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  std::vector<Integer> v;
  ZeroSet zeros;
};

inline void normalize_ray(std::vector<Integer>& v) {
  Integer g = 0;
  for (const Integer& x : v) g = gcd(g, x);
  if (g > 1)
    for (Integer& x : v) x /= g;
}

inline Integer dot(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

// Extreme rays of { z : h.z >= 0 for all h in constraints }. The constraint
// normals must span the full space (pointed cone).
inline std::vector<std::vector<Integer>> double_description(
    const std::vector<std::vector<Integer>>& constraints) {
  const std::size_t m = constraints.size();
  const std::size_t dim = constraints.front().size();

  // Greedily pick an initial nonsingular subset in insertion order.
  std::vector<std::size_t> base;
  std::vector<std::vector<Rational>> gauss;  // row-reduced copies
  for (std::size_t i = 0; i < m && base.size() < dim; ++i) {
    std::vector<Rational> row(constraints[i].begin(), constraints[i].end());
    for (std::size_t k = 0; k < gauss.size(); ++k) {
      std::size_t lead = 0;
      while (gauss[k][lead] == 0) ++lead;
      if (row[lead] == 0) continue;
      const Rational f = row[lead] / gauss[k][lead];
      for (std::size_t j = 0; j < dim; ++j) row[j] -= f * gauss[k][j];
    }
    if (std::all_of(row.begin(), row.end(), [](const Rational& x) { return x == 0; }))
      continue;
    gauss.push_back(std::move(row));
    base.push_back(i);
  }
  if (base.size() < dim)
    throw internal_error("double_description: cone is not pointed");

  // Invert the base matrix; its columns are the rays of the initial
  // simplicial cone (base row i maps ray j to delta_ij >= 0).
  std::vector<std::vector<Rational>> inv(dim, std::vector<Rational>(2 * dim, Rational(0)));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) inv[i][j] = Rational(constraints[base[i]][j]);
    inv[i][dim + i] = 1;
  }
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t piv = col;
    while (inv[piv][col] == 0) ++piv;  // nonsingular by construction
    std::swap(inv[piv], inv[col]);
    const Rational d = inv[col][col];
    for (auto& x : inv[col]) x /= d;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i == col || inv[i][col] == 0) continue;
      const Rational f = inv[i][col];
      for (std::size_t j = 0; j < 2 * dim; ++j) inv[i][j] -= f * inv[col][j];
    }
  }

  std::vector<Ray> rays;
  for (std::size_t j = 0; j < dim; ++j) {
    Ray r;
    r.v.resize(dim);
    Integer lcm = 1;
    for (std::size_t i = 0; i < dim; ++i) {
      const Integer den = denominator_of(inv[i][dim + j]);
      lcm = lcm / gcd(lcm, den) * den;
    }
    for (std::size_t i = 0; i < dim; ++i) {
      const Rational& e = inv[i][dim + j];
      r.v[i] = numerator_of(e) * (lcm / denominator_of(e));
    }
    normalize_ray(r.v);
    r.zeros = ZeroSet(m);
    for (std::size_t i = 0; i < dim; ++i)
      if (i != j) r.zeros.set(base[i]);
    rays.push_back(std::move(r));
  }

  std::vector<bool> processed(m, false);
  for (std::size_t i : base) processed[i] = true;
  std::vector<std::size_t> processed_list(base.begin(), base.end());

  for (std::size_t t = 0; t < m; ++t) {
    if (processed[t]) continue;
    const std::vector<Integer>& h = constraints[t];
    std::vector<Integer> slack(rays.size());
    std::vector<std::size_t> plus, zero, minus;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      slack[i] = dot(h, rays[i].v);
      if (slack[i] > 0)
        plus.push_back(i);
      else if (slack[i] < 0)
        minus.push_back(i);
      else
        zero.push_back(i);
    }
    processed[t] = true;
    processed_list.push_back(t);
    if (minus.empty()) {
      for (std::size_t i : zero) rays[i].zeros.set(t);
      continue;
    }

    std::vector<Ray> created;
    for (std::size_t u : plus) {
      for (std::size_t v : minus) {
        const ZeroSet common = ZeroSet::intersect(rays[u].zeros, rays[v].zeros);
        if (common.count() + 2 < dim) continue;  // rank can't reach dim-2
        bool adjacent = true;
        for (std::size_t w = 0; w < rays.size(); ++w) {
          if (w == u || w == v) continue;
          if (rays[w].zeros.contains(common)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Ray nr;
        nr.v.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
          nr.v[i] = slack[u] * rays[v].v[i] - slack[v] * rays[u].v[i];
        normalize_ray(nr.v);
        nr.zeros = ZeroSet(m);
        for (std::size_t k : processed_list)
          if (dot(constraints[k], nr.v) == 0) nr.zeros.set(k);
        created.push_back(std::move(nr));
      }
    }

    std::vector<Ray> next;
    next.reserve(plus.size() + zero.size() + created.size());
    for (std::size_t i : plus) next.push_back(std::move(rays[i]));
    for (std::size_t i : zero) {
      rays[i].zeros.set(t);
      next.push_back(std::move(rays[i]));
    }
    for (Ray& r : created) next.push_back(std::move(r));
    rays = std::move(next);
  }

  std::vector<std::vector<Integer>> out;
  out.reserve(rays.size());
  for (Ray& r : rays) out.push_back(std::move(r.v));
  return out;
}

// Reduced row echelon form over rationals; returns pivot column indices.
inline std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& mat) {
  std::vector<std::size_t> pivots;
  const std::size_t rows = mat.size();
  const std::size_t cols = rows ? mat[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t sel = r;
    while (sel < rows && mat[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(mat[sel], mat[r]);
    const Rational d = mat[r][col];
    for (auto& x : mat[r]) x /= d;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || mat[i][col] == 0) continue;
      const Rational f = mat[i][col];
      for (std::size_t j = 0; j < cols; ++j) mat[i][j] -= f * mat[r][j];
    }
    pivots.push_back(col);
    ++r;
  }
  mat.resize(r);
  return pivots;
}

}  // namespace detail

// Exact H-representation of conv(points): affine-hull equalities plus the
// facet inequalities, canonicalized. Throws on degenerate input (fewer than
// two distinct points).
inline LinearSystem facet_enumeration(const VertexSet& input) {
  if (input.points.empty())
    throw validation_error("facet_enumeration: empty vertex set");
  const std::size_t d = input.coords.size();

  std::vector<std::vector<Integer>> pts = input.points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2)
    throw validation_error("facet_enumeration: degenerate input (all points identical)");

  // Affine hull: row-reduce the differences against the first point.
  std::vector<std::vector<Rational>> diffs;
  diffs.reserve(pts.size() - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<Rational> row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = Rational(pts[i][j] - pts[0][j]);
    diffs.push_back(std::move(row));
  }
  const std::vector<std::size_t> pivots = detail::rref(diffs);
  const std::size_t rank = pivots.size();

  LinearSystem out(input.coords);

  if (rank < d) {
    // One equality per non-pivot coordinate, solved against the pivots:
    // z has 1 at the free coordinate and -R[k][free] at pivot k.
    std::vector<bool> is_pivot(d, false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    for (std::size_t f = 0; f < d; ++f) {
      if (is_pivot[f]) continue;
      std::vector<Rational> z(d, Rational(0));
      z[f] = 1;
      for (std::size_t k = 0; k < rank; ++k) z[pivots[k]] = -diffs[k][f];
      Rational rhs = 0;
      for (std::size_t j = 0; j < d; ++j)
        if (z[j] != 0) rhs += z[j] * Rational(pts[0][j]);
      out.add_equality(z, rhs);
    }
    // Facets live in the pivot coordinates.
    VertexSet reduced;
    for (std::size_t p : pivots) reduced.coords.push_back(input.coords[p]);
    for (const auto& pt : pts) {
      std::vector<Integer> rp;
      rp.reserve(rank);
      for (std::size_t p : pivots) rp.push_back(pt[p]);
      reduced.points.push_back(std::move(rp));
    }
    LinearSystem inner = facet_enumeration(reduced);
    for (const LinearRow& row : inner.rows()) {
      std::vector<Integer> lifted(d, Integer(0));
      for (std::size_t k = 0; k < rank; ++k) lifted[pivots[k]] = row.coeffs[k];
      if (row.equality)
        out.add_equality(std::move(lifted), row.rhs);
      else
        out.add_inequality(std::move(lifted), row.rhs);
    }
    out.canonicalize();
    return out;
  }

  // Full-dimensional: dual-cone double description on lifted points (1, p).
  std::vector<std::vector<Integer>> constraints;
  constraints.reserve(pts.size());
  for (const auto& p : pts) {
    std::vector<Integer> h;
    h.reserve(d + 1);
    h.push_back(1);
    h.insert(h.end(), p.begin(), p.end());
    constraints.push_back(std::move(h));
  }
  for (const auto& ray : detail::double_description(constraints)) {
    std::vector<Integer> coeffs(d);
    for (std::size_t j = 0; j < d; ++j) coeffs[j] = -ray[j + 1];
    out.add_inequality(std::move(coeffs), ray[0]);
  }
  out.canonicalize();
  return out;
}

}  // namespace contextuality
