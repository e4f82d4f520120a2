#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cantor/norms.hpp"
#include "cantor/polytope.hpp"

namespace cantor {

/// A family member for covering checks: an affine self-map of the region
/// coordinates (s, t_1..t_d), tagged with its renormalization role.
template <class S>
struct FamilyOp {
  std::string name;
  AffineMap<S> action;
  bool expanding = false;
  /// Extra sup-fattening applied to images of this op before the containment
  /// test (absorbs e.g. the SL-ball dependence of contracting actions).
  S image_fatten = from_rat<S>(Rat(0));
};

/// Region made of one or more convex cells (single cell = convex region).
template <class S>
struct Region {
  std::vector<ConvexCell<S>> members;

  bool convex() const { return members.size() == 1; }
  int dim() const { return members.empty() ? 0 : members.front().dim(); }
};

template <class S>
struct CoveringEntry {
  int cell = 0;
  int op = 0;
  int target_member = 0;  // member of the region certified to contain the image
  S margin = from_rat<S>(Rat(0));
};

template <class S>
struct CoveringCertificate {
  Region<S> region;
  std::vector<ConvexCell<S>> cells;
  std::vector<FamilyOp<S>> family;
  std::vector<std::vector<int>> assignment;  // per cell: op indices
  std::vector<CoveringEntry<S>> entries;
  S delta = from_rat<S>(Rat(0));     // min image margin
  S delta_strong = from_rat<S>(Rat(0));  // strong-covering radius delta/(1+Lip)
  std::string mode;                  // "exact" | "ball"
  bool passed = false;
  std::string witness;               // failing (cell, op, vertex) if any
  bool coverage_ok = false;
  std::string coverage_witness;
};

// ---------------------------------------------------------------------------
// Exact coverage of a prism region by prism cells, fiber by fiber: within
// every refined s-column the vertical section of the region must be covered
// by the sections of the cells. Endpoint lines are affine in s, so refining
// the columns at all pairwise crossings makes the endpoint order constant per
// column and a midpoint check exact.
// ---------------------------------------------------------------------------

namespace detail {

template <class S>
void add_crossing(const S& p0, const S& p1, const S& q0, const S& q1, const S& u, const S& v,
                  std::vector<S>* cuts) {
  // lines through (u,p0)-(v,p1) and (u,q0)-(v,q1); crossing s in (u,v)?
  S dp = (p1 - p0) - (q1 - q0);
  if (!scalar_traits<S>::definitely_nonzero(dp)) return;
  S s = u + (q0 - p0) / dp * (v - u);
  if (scalar_traits<S>::definitely_positive(s - u) &&
      scalar_traits<S>::definitely_positive(v - s))
    cuts->push_back(s);
}

// 1-D cover test: target [lo, hi] by intervals; true iff union covers.
template <class S>
bool intervals_cover(const S& lo, const S& hi, std::vector<std::pair<S, S>> iv) {
  std::sort(iv.begin(), iv.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  S reach = lo;
  for (const auto& [a, b] : iv) {
    if (scalar_traits<S>::definitely_positive(a - reach)) break;  // gap
    if (reach < b) reach = b;
  }
  return !scalar_traits<S>::definitely_positive(hi - reach);
}

}  // namespace detail

/// Region prism covered by cell prisms whose fibers are chosen independently:
/// cells must be the full product family over per-fiber candidate lists.
/// Verifies, for each fiber j and each refined column, that the per-fiber
/// candidate sections cover the region's section. Returns a witness column on
/// failure.
template <class S>
bool prism_cover_fiberwise(const Prism<S>& region,
                           const std::vector<std::vector<Prism<S>>>& fiber_cells,
                           std::string* witness = nullptr) {
  const int d = region.fibers();
  if (static_cast<int>(fiber_cells.size()) != d)
    throw std::invalid_argument("prism_cover_fiberwise: fiber count mismatch");
  for (int j = 0; j < d; ++j) {
    // columns: region s-range refined by cell ranges and line crossings
    std::vector<S> cuts = {region.s0, region.s1};
    for (const auto& c : fiber_cells[j]) {
      for (const S& s : {c.s0, c.s1})
        if (!scalar_traits<S>::definitely_positive(region.s0 - s) &&
            !scalar_traits<S>::definitely_positive(s - region.s1))
          cuts.push_back(s);
    }
    // crossings between every pair of boundary lines (region + cells), mapped
    // to a common parameterization over [region.s0, region.s1]
    auto line_at = [&](const Prism<S>& p, bool high, const S& s) {
      return high ? p.hi_at(0, s) : p.lo_at(0, s);
    };
    std::vector<const Prism<S>*> ps = {};
    std::vector<Prism<S>> region1;  // region fiber j as a 2-D prism
    {
      Prism<S> rj;
      rj.s0 = region.s0;
      rj.s1 = region.s1;
      rj.lo = {typename Prism<S>::Line{region.lo[j].at0, region.lo[j].at1}};
      rj.hi = {typename Prism<S>::Line{region.hi[j].at0, region.hi[j].at1}};
      region1.push_back(rj);
    }
    for (const auto& c : fiber_cells[j]) ps.push_back(&c);
    ps.push_back(&region1.front());
    const S &u = region.s0, &v = region.s1;
    for (size_t a = 0; a < ps.size(); ++a)
      for (size_t b = a; b < ps.size(); ++b)
        for (bool ha : {false, true})
          for (bool hb : {false, true}) {
            if (a == b && ha == hb) continue;
            detail::add_crossing(line_at(*ps[a], ha, u), line_at(*ps[a], ha, v),
                                 line_at(*ps[b], hb, u), line_at(*ps[b], hb, v), u, v, &cuts);
          }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
      S mid = (cuts[k] + cuts[k + 1]) / from_rat<S>(Rat(2));
      std::vector<std::pair<S, S>> sections;
      for (const auto& c : fiber_cells[j]) {
        if (scalar_traits<S>::definitely_positive(c.s0 - mid) ||
            scalar_traits<S>::definitely_positive(mid - c.s1))
          continue;  // cell not active in this column
        sections.emplace_back(c.lo_at(0, mid), c.hi_at(0, mid));
      }
      if (!detail::intervals_cover(region.lo_at(j, mid), region.hi_at(j, mid), sections)) {
        if (witness)
          *witness = "fiber " + std::to_string(j) + " column s=" +
                     std::to_string(scalar_traits<S>::approx(mid));
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Union containment by box subdivision (depth-capped, conservative).
// ---------------------------------------------------------------------------

template <class S>
std::pair<VecX<S>, VecX<S>> bounding_box(const ConvexCell<S>& cell) {
  const int d = cell.dim();
  VecX<S> lo = cell.verts.front(), hi = cell.verts.front();
  for (const auto& v : cell.verts)
    for (int i = 0; i < d; ++i) {
      if (v(i) < lo(i)) lo(i) = v(i);
      if (hi(i) < v(i)) hi(i) = v(i);
    }
  return {lo, hi};
}

namespace detail {

template <class S>
bool box_inside(const VecX<S>& lo, const VecX<S>& hi, const ConvexCell<S>& cell, S* margin) {
  const int d = static_cast<int>(lo.size());
  S m = from_rat<S>(Rat(1000000));
  for (int mask = 0; mask < (1 << d); ++mask) {
    VecX<S> corner(d);
    for (int i = 0; i < d; ++i) corner(i) = (mask >> i) & 1 ? hi(i) : lo(i);
    S mm = halfspace_margin(cell, corner);
    if (mm < m) m = mm;
  }
  *margin = m;
  return !scalar_traits<S>::definitely_positive(-m);
}

template <class S>
bool box_misses(const VecX<S>& lo, const VecX<S>& hi, const ConvexCell<S>& cell) {
  const int d = static_cast<int>(lo.size());
  for (const auto& h : cell.halves) {
    // min of a·x over the box exceeds b => box misses the cell
    S mn = h.b;  // compute b - min a·x
    S acc = from_rat<S>(Rat(0));
    for (int i = 0; i < d; ++i) {
      const S& coef = h.a(i);
      acc += scalar_traits<S>::definitely_positive(-coef) ? coef * hi(i) : coef * lo(i);
    }
    if (scalar_traits<S>::definitely_positive(acc - mn)) return true;
  }
  return false;
}

template <class S>
std::optional<S> union_margin_rec(const VecX<S>& lo, const VecX<S>& hi,
                                  const ConvexCell<S>& inner,
                                  const std::vector<ConvexCell<S>>& members, int depth) {
  if (box_misses(lo, hi, inner)) return from_rat<S>(Rat(1000000));
  S best_margin = from_rat<S>(Rat(-1000000));
  for (const auto& m : members) {
    S mm = from_rat<S>(Rat(0));
    if (box_inside(lo, hi, m, &mm)) return mm;
    if (best_margin < mm) best_margin = mm;
  }
  if (depth <= 0) return std::nullopt;  // inconclusive at the cap
  int axis = 0;
  S w = hi(0) - lo(0);
  for (int i = 1; i < lo.size(); ++i)
    if (w < hi(i) - lo(i)) { w = hi(i) - lo(i); axis = i; }
  VecX<S> midhi = hi, midlo = lo;
  S mid = (lo(axis) + hi(axis)) / from_rat<S>(Rat(2));
  midhi(axis) = mid;
  midlo(axis) = mid;
  auto a = union_margin_rec(lo, midhi, inner, members, depth - 1);
  if (!a) return std::nullopt;
  auto b = union_margin_rec(midlo, hi, inner, members, depth - 1);
  if (!b) return std::nullopt;
  return cantor::min(*a, *b);
}

}  // namespace detail

/// Sup-margin of `inner` within a union of convex members, by adaptive box
/// subdivision of inner's bounding box; nullopt when the depth cap fires.
template <class S>
std::optional<S> union_containment_margin(const ConvexCell<S>& inner,
                                          const std::vector<ConvexCell<S>>& members,
                                          int depth_cap = 12) {
  auto [lo, hi] = bounding_box(inner);
  return detail::union_margin_rec(lo, hi, inner, members, depth_cap);
}

/// Spec-facing margin entry point: convex regions need only vertex checks,
/// union regions go through subdivision.
template <class S>
std::optional<S> containment_margin_region(const ConvexCell<S>& cell, const Region<S>& region,
                                           int depth_cap = 12) {
  if (region.convex()) return containment_margin(cell, region.members.front());
  return union_containment_margin(cell, region.members, depth_cap);
}

// ---------------------------------------------------------------------------
// check_covering and certificate utilities
// ---------------------------------------------------------------------------

struct CheckOptions {
  bool require_coverage = true;
  int subdivision_depth = 12;
};

/// Verifies the covering condition cell by cell: each cell's image under each
/// assigned map must land in the region with positive sup-margin; cells must
/// cover the region closure (the caller passes `coverage_checked` when an
/// exact fiberwise proof was already run; otherwise a subdivision check of
/// each region member inside the union of cells runs here).
template <class S>
CoveringCertificate<S> check_covering(const Region<S>& region,
                                      const std::vector<ConvexCell<S>>& cells,
                                      const std::vector<FamilyOp<S>>& family,
                                      const std::vector<std::vector<int>>& assignment,
                                      std::optional<bool> coverage_checked = std::nullopt,
                                      const CheckOptions& opts = {}) {
  CoveringCertificate<S> cert;
  cert.region = region;
  cert.cells = cells;
  cert.family = family;
  cert.assignment = assignment;
  cert.mode = is_exact_v<S> ? "exact" : "ball";
  if (family.empty()) throw std::invalid_argument("check_covering: empty family");
  if (assignment.size() != cells.size())
    throw std::invalid_argument("check_covering: assignment size mismatch");

  if (coverage_checked.has_value()) {
    cert.coverage_ok = *coverage_checked;
  } else if (opts.require_coverage) {
    cert.coverage_ok = true;
    for (size_t m = 0; m < region.members.size(); ++m) {
      auto mm = union_containment_margin(region.members[m], cells, opts.subdivision_depth);
      if (!mm || scalar_traits<S>::definitely_positive(-*mm)) {
        cert.coverage_ok = false;
        cert.coverage_witness = "region member " + std::to_string(m) +
                                (mm ? " uncovered" : " inconclusive at depth cap");
        break;
      }
    }
  } else {
    cert.coverage_ok = true;
  }

  bool first = true;
  bool all_positive = true;
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    if (assignment[ci].empty()) throw std::invalid_argument("check_covering: unassigned cell");
    for (int oi : assignment[ci]) {
      ConvexCell<S> img = affine_image(cells[ci], family[oi].action);
      if (scalar_traits<S>::definitely_positive(family[oi].image_fatten))
        img = fatten(img, family[oi].image_fatten);
      // best member of the union
      S best = from_rat<S>(Rat(-1000000));
      int best_member = 0;
      for (size_t m = 0; m < region.members.size(); ++m) {
        S mm = containment_margin(img, region.members[m]);
        if (best < mm) { best = mm; best_member = static_cast<int>(m); }
      }
      cert.entries.push_back({static_cast<int>(ci), oi, best_member, best});
      if (first || best < cert.delta) cert.delta = best;
      first = false;
      if (!scalar_traits<S>::definitely_positive(best)) {
        all_positive = false;
        if (cert.witness.empty())
          cert.witness = "cell " + std::to_string(ci) + " op " + family[oi].name +
                         " margin " + std::to_string(scalar_traits<S>::approx(best));
      }
    }
  }
  S lip = from_rat<S>(Rat(1));
  for (const auto& op : family) {
    S l = inf_op_norm(op.action.linear);
    if (lip < l) lip = l;
  }
  cert.delta_strong = cert.delta / (from_rat<S>(Rat(1)) + lip);
  cert.passed = all_positive && cert.coverage_ok;
  return cert;
}

/// C0-perturbation radius preserving the certificate: delta/2 shrunk by the
/// worst operator Lipschitz constant over the region hull (sup metric).
template <class S>
S stability_radius(const CoveringCertificate<S>& cert) {
  S lip = from_rat<S>(Rat(1));
  for (const auto& op : cert.family) {
    S l = inf_op_norm(op.action.linear);
    if (lip < l) lip = l;
  }
  return cert.delta / (from_rat<S>(Rat(2)) * lip);
}

/// Deterministic grid re-check of an issued certificate: samples >= `samples`
/// points of the region (bounding-box lattice filtered to the region), and for
/// each finds an assigned op of some containing cell that maps it inside.
/// Returns the number of counterexamples.
template <class S>
int soundness_sweep(const CoveringCertificate<S>& cert, int samples = 10000) {
  if (cert.cells.empty()) return samples;
  const int d = cert.cells.front().dim();
  // lattice over the union bounding box
  auto [lo, hi] = bounding_box(cert.region.members.front());
  for (const auto& m : cert.region.members) {
    auto [l2, h2] = bounding_box(m);
    for (int i = 0; i < d; ++i) {
      if (l2(i) < lo(i)) lo(i) = l2(i);
      if (hi(i) < h2(i)) hi(i) = h2(i);
    }
  }
  int per_axis = std::max(2, static_cast<int>(std::ceil(std::pow(double(samples), 1.0 / d))));
  long total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis;
  int bad = 0, tested = 0;
  for (long k = 0; k < total; ++k) {
    long rem = k;
    VecX<S> x(d);
    for (int i = 0; i < d; ++i) {
      int ii = rem % per_axis;
      rem /= per_axis;
      x(i) = lo(i) + (hi(i) - lo(i)) * from_rat<S>(Rat(2 * ii + 1, 2 * per_axis));
    }
    bool in_region = false;
    for (const auto& m : cert.region.members)
      if (cell_contains(m, x)) { in_region = true; break; }
    if (!in_region) continue;
    ++tested;
    bool ok = false;
    for (size_t ci = 0; ci < cert.cells.size() && !ok; ++ci) {
      if (!cell_contains(cert.cells[ci], x)) continue;
      for (int oi : cert.assignment[ci]) {
        VecX<S> y = cert.family[oi].action(x);
        for (const auto& m : cert.region.members)
          if (cell_contains(m, y)) { ok = true; break; }
        if (ok) break;
      }
    }
    if (!ok) ++bad;
  }
  return tested > 0 ? bad : samples;
}

}  // namespace cantor
