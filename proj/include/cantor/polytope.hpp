#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "cantor/affine.hpp"
#include "cantor/scalar.hpp"

namespace cantor {

/// Bounded convex polytope carrying both representations. Halfspaces are
/// a·x <= b. Margins are measured in the sup metric, so the point-to-halfspace
/// distance is (b - a·x)/||a||_1, which stays rational on rational data.
template <class S>
struct ConvexCell {
  struct Half {
    VecX<S> a;
    S b;
  };
  std::vector<VecX<S>> verts;
  std::vector<Half> halves;

  int dim() const { return verts.empty() ? 0 : static_cast<int>(verts.front().size()); }
};

template <class S>
S l1_norm(const VecX<S>& v) {
  S s = from_rat<S>(Rat(0));
  for (Eigen::Index i = 0; i < v.size(); ++i) s += abs(v(i));
  return s;
}

/// Signed sup-metric margin of x relative to the H-form: positive iff the
/// closed sup-ball of that radius around x stays inside.
template <class S>
S halfspace_margin(const ConvexCell<S>& cell, const VecX<S>& x) {
  S m = from_rat<S>(Rat(1000000));
  for (const auto& h : cell.halves) {
    S slack = (h.b - h.a.dot(x)) / l1_norm(h.a);
    if (slack < m) m = slack;
  }
  return m;
}

template <class S>
bool cell_contains(const ConvexCell<S>& cell, const VecX<S>& x) {
  for (const auto& h : cell.halves)
    if (scalar_traits<S>::definitely_positive(h.a.dot(x) - h.b)) return false;
  return true;
}

/// min over inner vertices of the outer sup-margin; positive iff
/// inner ⊂ outer with that sup-ball clearance (outer convex).
template <class S>
S containment_margin(const ConvexCell<S>& inner, const ConvexCell<S>& outer) {
  S m = from_rat<S>(Rat(1000000));
  for (const auto& v : inner.verts) {
    S mv = halfspace_margin(outer, v);
    if (mv < m) m = mv;
  }
  return m;
}

template <class S>
ConvexCell<S> interval_cell(const S& lo, const S& hi) {
  ConvexCell<S> c;
  VecX<S> vlo(1), vhi(1), n(1);
  vlo(0) = lo;
  vhi(0) = hi;
  c.verts = {vlo, vhi};
  n(0) = from_rat<S>(Rat(-1));
  c.halves.push_back({n, S(-lo)});
  n(0) = from_rat<S>(Rat(1));
  c.halves.push_back({n, hi});
  return c;
}

template <class S>
ConvexCell<S> box_cell(const VecX<S>& lo, const VecX<S>& hi) {
  const int d = static_cast<int>(lo.size());
  ConvexCell<S> c;
  for (int mask = 0; mask < (1 << d); ++mask) {
    VecX<S> v(d);
    for (int i = 0; i < d; ++i) v(i) = (mask >> i) & 1 ? hi(i) : lo(i);
    c.verts.push_back(v);
  }
  for (int i = 0; i < d; ++i) {
    VecX<S> n = zero_vec<S>(d);
    n(i) = from_rat<S>(Rat(1));
    c.halves.push_back({n, hi(i)});
    n(i) = from_rat<S>(Rat(-1));
    c.halves.push_back({n, S(-lo(i))});
  }
  return c;
}

/// Exact 2-D convex hull (monotone chain) with H-form from the hull edges.
template <class S>
ConvexCell<S> polygon_hull(std::vector<VecX<S>> pts) {
  auto less = [](const VecX<S>& p, const VecX<S>& q) {
    if (p(0) != q(0)) return p(0) < q(0);
    return p(1) < q(1);
  };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const VecX<S>& p, const VecX<S>& q) {
                          return p(0) == q(0) && p(1) == q(1);
                        }),
            pts.end());
  if (pts.size() < 3) throw std::invalid_argument("polygon_hull: needs 3+ distinct points");
  auto cross = [](const VecX<S>& o, const VecX<S>& p, const VecX<S>& q) {
    return (p(0) - o(0)) * (q(1) - o(1)) - (p(1) - o(1)) * (q(0) - o(0));
  };
  std::vector<VecX<S>> hull;
  for (int pass = 0; pass < 2; ++pass) {
    size_t start = hull.size();
    auto scan = [&](const VecX<S>& p) {
      while (hull.size() >= start + 2 &&
             !scalar_traits<S>::definitely_positive(
                 cross(hull[hull.size() - 2], hull.back(), p)))
        hull.pop_back();
      hull.push_back(p);
    };
    if (pass == 0)
      for (const auto& p : pts) scan(p);
    else
      for (auto it = pts.rbegin(); it != pts.rend(); ++it) scan(*it);
    hull.pop_back();
  }
  ConvexCell<S> c;
  c.verts = hull;
  const int n = static_cast<int>(hull.size());
  for (int i = 0; i < n; ++i) {
    const VecX<S>&p = hull[i], &q = hull[(i + 1) % n];
    VecX<S> normal(2);
    normal(0) = q(1) - p(1);  // outward for a ccw hull
    normal(1) = p(0) - q(0);
    c.halves.push_back({normal, normal.dot(p)});
  }
  return c;
}

template <class S>
ConvexCell<S> affine_image(const ConvexCell<S>& cell, const AffineMap<S>& f) {
  ConvexCell<S> out;
  out.verts.reserve(cell.verts.size());
  for (const auto& v : cell.verts) out.verts.push_back(f(v));
  MatX<S> inv = mat_inverse(f.linear);
  for (const auto& h : cell.halves) {
    VecX<S> a = inv.transpose() * h.a;
    out.halves.push_back({a, S(h.b + a.dot(f.trans))});
  }
  return out;
}

/// Minkowski sum with the closed sup-ball of radius r.
template <class S>
ConvexCell<S> fatten(const ConvexCell<S>& cell, const S& r) {
  const int d = cell.dim();
  ConvexCell<S> out;
  for (const auto& v : cell.verts)
    for (int mask = 0; mask < (1 << d); ++mask) {
      VecX<S> w = v;
      for (int i = 0; i < d; ++i) w(i) += ((mask >> i) & 1) ? r : S(-r);
      out.verts.push_back(w);
    }
  for (const auto& h : cell.halves) out.halves.push_back({h.a, S(h.b + r * l1_norm(h.a))});
  return out;
}

/// V/H consistency: every vertex inside every halfspace, every halfspace
/// supported by at least one vertex (exact scalars only for the support part).
template <class S>
bool cell_consistent(const ConvexCell<S>& cell) {
  if (cell.verts.empty() || cell.halves.empty()) return false;
  for (const auto& h : cell.halves) {
    bool supported = false;
    for (const auto& v : cell.verts) {
      S slack = h.b - h.a.dot(v);
      if (scalar_traits<S>::definitely_positive(-slack)) return false;
      if constexpr (is_exact_v<S>) {
        if (slack.is_zero()) supported = true;
      } else {
        if (!slack.definitely_nonzero()) supported = true;
      }
    }
    if (!supported) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Prisms: {(s, t_1..t_d) : s0 <= s <= s1, lo_j(s) <= t_j <= hi_j(s)} with
// lo_j, hi_j affine in s. Every region piece of the paper's construction is
// one of these; they are closed under the splits below and convert to
// ConvexCell in closed form (fiber-product vertices, 2 + 2d facets).
// ---------------------------------------------------------------------------

template <class S>
struct Prism {
  struct Line {
    S at0, at1;  // values at s0 and s1
  };
  S s0, s1;
  std::vector<Line> lo, hi;

  int fibers() const { return static_cast<int>(lo.size()); }

  S lo_at(int j, const S& s) const { return eval(lo[j], s); }
  S hi_at(int j, const S& s) const { return eval(hi[j], s); }

  S eval(const Line& l, const S& s) const {
    return l.at0 + (l.at1 - l.at0) * (s - s0) / (s1 - s0);
  }

  bool nonempty() const {
    for (int j = 0; j < fibers(); ++j)
      if (scalar_traits<S>::definitely_positive(lo[j].at0 - hi[j].at0) ||
          scalar_traits<S>::definitely_positive(lo[j].at1 - hi[j].at1))
        return false;
    return !scalar_traits<S>::definitely_positive(s0 - s1);
  }
};

template <class S>
ConvexCell<S> prism_to_cell(const Prism<S>& p) {
  const int d = p.fibers();
  ConvexCell<S> c;
  for (int side = 0; side < 2; ++side) {
    S s = side ? p.s1 : p.s0;
    for (int mask = 0; mask < (1 << d); ++mask) {
      VecX<S> v(d + 1);
      v(0) = s;
      for (int j = 0; j < d; ++j) {
        const auto& l = (mask >> j) & 1 ? p.hi[j] : p.lo[j];
        v(j + 1) = side ? l.at1 : l.at0;
      }
      c.verts.push_back(v);
    }
  }
  VecX<S> n = zero_vec<S>(d + 1);
  n(0) = from_rat<S>(Rat(1));
  c.halves.push_back({n, p.s1});
  n(0) = from_rat<S>(Rat(-1));
  c.halves.push_back({n, S(-p.s0)});
  S ds = p.s1 - p.s0;
  for (int j = 0; j < d; ++j) {
    // t_j >= lo_j(s): lo = q s + r with q = (at1-at0)/ds, r = at0 - q s0.
    {
      S q = (p.lo[j].at1 - p.lo[j].at0) / ds;
      VecX<S> a = zero_vec<S>(d + 1);
      a(0) = q;
      a(j + 1) = from_rat<S>(Rat(-1));
      c.halves.push_back({a, S(q * p.s0 - p.lo[j].at0)});
    }
    {
      S q = (p.hi[j].at1 - p.hi[j].at0) / ds;
      VecX<S> a = zero_vec<S>(d + 1);
      a(0) = -q;
      a(j + 1) = from_rat<S>(Rat(1));
      c.halves.push_back({a, S(p.hi[j].at0 - q * p.s0)});
    }
  }
  return c;
}

/// Fiber product over the shared s-interval: factors must agree on [s0, s1].
template <class S>
Prism<S> fiber_product(const std::vector<Prism<S>>& factors) {
  if (factors.empty()) throw std::invalid_argument("fiber_product: empty");
  Prism<S> out;
  out.s0 = factors.front().s0;
  out.s1 = factors.front().s1;
  for (const auto& f : factors) {
    if (f.fibers() != 1) throw std::invalid_argument("fiber_product: factors must be 2-D");
    if (!(f.s0 == out.s0) || !(f.s1 == out.s1))
      throw std::invalid_argument("fiber_product: mismatched s-range");
    out.lo.push_back(f.lo[0]);
    out.hi.push_back(f.hi[0]);
  }
  return out;
}

template <class S>
std::pair<Prism<S>, Prism<S>> split_at_s(const Prism<S>& p, const S& c) {
  Prism<S> left = p, right = p;
  left.s1 = c;
  right.s0 = c;
  for (int j = 0; j < p.fibers(); ++j) {
    left.lo[j].at1 = p.lo_at(j, c);
    left.hi[j].at1 = p.hi_at(j, c);
    right.lo[j].at0 = left.lo[j].at1;
    right.hi[j].at0 = left.hi[j].at1;
  }
  return {left, right};
}

/// Restrict fiber j to [l, h] (constants in s): intersection stays a prism
/// only when the cut lines do not cross the existing bounds inside (s0, s1);
/// callers split at crossing abscissae first. This clamps conservatively.
template <class S>
Prism<S> clamp_fiber(const Prism<S>& p, int j, const S& l, const S& h) {
  Prism<S> out = p;
  if (out.lo[j].at0 < l) out.lo[j].at0 = l;
  if (out.lo[j].at1 < l) out.lo[j].at1 = l;
  if (out.hi[j].at0 > h) out.hi[j].at0 = h;
  if (out.hi[j].at1 > h) out.hi[j].at1 = h;
  return out;
}

// ---------------------------------------------------------------------------
// Parallelotopes and exact intersection tests (supports the linked-pair
// searches; complete separating-axis enumeration for d <= 4).
// ---------------------------------------------------------------------------

/// {center + E alpha : alpha in [-1,1]^d}, columns of E the half-edges.
template <class S>
struct Parallelotope {
  VecX<S> center;
  MatX<S> edges;
};

template <class S>
Parallelotope<S> box_para(const VecX<S>& lo, const VecX<S>& hi) {
  const int d = static_cast<int>(lo.size());
  Parallelotope<S> p;
  p.center = VecX<S>((lo + hi) / from_rat<S>(Rat(2)));
  p.edges = MatX<S>::Constant(d, d, from_rat<S>(Rat(0)));
  for (int i = 0; i < d; ++i) p.edges(i, i) = (hi(i) - lo(i)) / from_rat<S>(Rat(2));
  return p;
}

template <class S>
Parallelotope<S> map_para(const AffineMap<S>& f, const Parallelotope<S>& p) {
  return {f(p.center), MatX<S>(f.linear * p.edges)};
}

namespace detail {

// Null direction of a (d-1)-subset of columns; empty when rank-deficient.
template <class S>
std::optional<VecX<S>> normal_to(const MatX<S>& cols) {
  const int d = static_cast<int>(cols.rows());
  // Solve cols^T n = 0 by Gaussian elimination on the (d-1) x d system.
  MatX<S> m = cols.transpose();
  std::vector<int> pivot_col;
  int row = 0;
  std::vector<bool> used(d, false);
  for (int c = 0; c < d && row < m.rows(); ++c) {
    int pr = -1;
    for (int r = row; r < m.rows(); ++r)
      if (scalar_traits<S>::definitely_nonzero(m(r, c))) { pr = r; break; }
    if (pr < 0) continue;
    m.row(pr).swap(m.row(row));
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row) continue;
      S f = m(r, c) / m(row, c);
      m.row(r) -= f * m.row(row);
    }
    pivot_col.push_back(c);
    used[c] = true;
    ++row;
  }
  if (row < m.rows()) return std::nullopt;  // dependent subset: no unique facet normal
  int free_col = -1;
  for (int c = 0; c < d; ++c)
    if (!used[c]) { free_col = c; break; }
  if (free_col < 0) return std::nullopt;
  VecX<S> n = zero_vec<S>(d);
  n(free_col) = from_rat<S>(Rat(1));
  for (int r = 0; r < row; ++r) n(pivot_col[r]) = -m(r, free_col) / m(r, pivot_col[r]);
  return n;
}

}  // namespace detail

/// Strict separation test via the complete facet-normal enumeration of the
/// Minkowski difference: every facet normal annihilates d-1 edge directions
/// drawn from the two bodies; closed polytopes touching counts as linked.
template <class S>
bool paras_disjoint(const Parallelotope<S>& p, const Parallelotope<S>& q) {
  const int d = static_cast<int>(p.center.size());
  if (d == 1) {
    S gap = abs(p.center(0) - q.center(0)) - abs(p.edges(0, 0)) - abs(q.edges(0, 0));
    return scalar_traits<S>::definitely_positive(gap);
  }
  MatX<S> all(d, 2 * d);
  all.leftCols(d) = p.edges;
  all.rightCols(d) = q.edges;
  std::vector<int> idx(d - 1);
  VecX<S> delta = p.center - q.center;
  auto test_normal = [&](const VecX<S>& n) {
    S lhs = abs(n.dot(delta));
    S radius = from_rat<S>(Rat(0));
    for (int i = 0; i < d; ++i) radius += abs(n.dot(p.edges.col(i))) + abs(n.dot(q.edges.col(i)));
    return scalar_traits<S>::definitely_positive(lhs - radius);
  };
  // iterate over all (d-1)-subsets of the 2d edge directions
  std::vector<int> comb(d - 1);
  for (int i = 0; i < d - 1; ++i) comb[i] = i;
  while (true) {
    MatX<S> cols(d, d - 1);
    for (int i = 0; i < d - 1; ++i) cols.col(i) = all.col(comb[i]);
    if (auto n = detail::normal_to(cols)) {
      if (test_normal(*n)) return true;
    }
    int k = d - 2;
    while (k >= 0 && comb[k] == 2 * d - (d - 1) + k) --k;
    if (k < 0) break;
    ++comb[k];
    for (int i = k + 1; i < d - 1; ++i) comb[i] = comb[i - 1] + 1;
  }
  return false;
}

/// Largest normalized separation over the candidate normals: a sup-metric
/// lower bound on the gap between the bodies (0 when none separates).
template <class S>
S paras_gap(const Parallelotope<S>& p, const Parallelotope<S>& q) {
  const int d = static_cast<int>(p.center.size());
  S best = from_rat<S>(Rat(0));
  VecX<S> delta = p.center - q.center;
  auto consider = [&](const VecX<S>& n) {
    S radius = from_rat<S>(Rat(0));
    for (int i = 0; i < d; ++i) radius += abs(n.dot(p.edges.col(i))) + abs(n.dot(q.edges.col(i)));
    S gap = (abs(n.dot(delta)) - radius) / l1_norm(n);
    if (best < gap) best = gap;
  };
  if (d == 1) {
    VecX<S> n(1);
    n(0) = from_rat<S>(Rat(1));
    consider(n);
    return best;
  }
  MatX<S> all(d, 2 * d);
  all.leftCols(d) = p.edges;
  all.rightCols(d) = q.edges;
  std::vector<int> comb(d - 1);
  for (int i = 0; i < d - 1; ++i) comb[i] = i;
  while (true) {
    MatX<S> cols(d, d - 1);
    for (int i = 0; i < d - 1; ++i) cols.col(i) = all.col(comb[i]);
    if (auto n = detail::normal_to(cols)) consider(*n);
    int k = d - 2;
    while (k >= 0 && comb[k] == 2 * d - (d - 1) + k) --k;
    if (k < 0) break;
    ++comb[k];
    for (int i = k + 1; i < d - 1; ++i) comb[i] = comb[i - 1] + 1;
  }
  return best;
}

}  // namespace cantor
