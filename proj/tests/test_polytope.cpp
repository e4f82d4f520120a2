#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cantor/covering.hpp"
#include "cantor/polytope.hpp"

using namespace cantor;

namespace {
VecX<Rat> pt2(Rat x, Rat y) {
  VecX<Rat> v(2);
  v << x, y;
  return v;
}
}  // namespace

TEST_CASE("affine image of cells") {
  // Id keeps the cell
  auto sq = box_cell<Rat>(pt2(Rat(0), Rat(0)), pt2(Rat(1), Rat(1)));
  auto same = affine_image(sq, affine_identity<Rat>(2));
  CHECK(same.verts.size() == 4);
  CHECK(cell_consistent(same));
  // unit square under diag(2,1) is the 2x1 rectangle
  MatX<Rat> d21 = identity_mat<Rat>(2);
  d21(0, 0) = Rat(2);
  auto rect = affine_image(sq, affine(d21, zero_vec<Rat>(2)));
  auto [lo, hi] = bounding_box(rect);
  CHECK(lo(0) == Rat(0));
  CHECK(hi(0) == Rat(2));
  CHECK(hi(1) == Rat(1));
  CHECK(cell_consistent(rect));
  // rotation preserves vertex count
  MatX<Rat> rot(2, 2);
  rot << Rat(3, 5), Rat(-4, 5), Rat(4, 5), Rat(3, 5);
  auto rotated = affine_image(sq, affine(rot, zero_vec<Rat>(2)));
  CHECK(rotated.verts.size() == sq.verts.size());
  CHECK(cell_consistent(rotated));
}

TEST_CASE("containment margins in the sup metric") {
  auto outer = interval_cell(Rat(-1), Rat(2));
  auto inner = interval_cell(Rat(0), Rat(1));
  CHECK(containment_margin(inner, outer) == Rat(1));
  // a cell equal to the region touches: margin 0
  CHECK(containment_margin(outer, outer) == Rat(0));
  auto sq = box_cell<Rat>(pt2(Rat(0), Rat(0)), pt2(Rat(4), Rat(4)));
  auto small = box_cell<Rat>(pt2(Rat(1), Rat(1)), pt2(Rat(2), Rat(2)));
  CHECK(containment_margin(small, sq) == Rat(1));
  CHECK(containment_margin(sq, small) == Rat(-2));
}

TEST_CASE("polygon hull and H-form") {
  std::vector<VecX<Rat>> pts = {pt2(Rat(0), Rat(0)), pt2(Rat(2), Rat(0)), pt2(Rat(2), Rat(2)),
                                pt2(Rat(0), Rat(2)), pt2(Rat(1), Rat(1))};
  auto hull = polygon_hull(pts);
  CHECK(hull.verts.size() == 4);  // interior point dropped
  CHECK(cell_consistent(hull));
  CHECK(cell_contains(hull, pt2(Rat(1), Rat(1))));
  CHECK_FALSE(cell_contains(hull, pt2(Rat(3), Rat(1))));
  CHECK(halfspace_margin(hull, pt2(Rat(1), Rat(1))) == Rat(1));
}

TEST_CASE("prism to cell and splits") {
  Prism<Rat> p;
  p.s0 = Rat(0);
  p.s1 = Rat(2);
  p.lo = {{Rat(0), Rat(1)}};   // lo(s) = s/2
  p.hi = {{Rat(2), Rat(4)}};   // hi(s) = 2 + s
  CHECK(p.nonempty());
  auto cell = prism_to_cell(p);
  CHECK(cell.verts.size() == 4);
  CHECK(cell_consistent(cell));
  CHECK(cell_contains(cell, pt2(Rat(1), Rat(1))));
  CHECK_FALSE(cell_contains(cell, pt2(Rat(1), Rat(0))));  // below lo(1) = 1/2
  auto [l, r] = split_at_s(p, Rat(1));
  CHECK(l.s1 == Rat(1));
  CHECK(l.lo[0].at1 == Rat(1, 2));
  CHECK(r.lo[0].at0 == Rat(1, 2));
  // fiber product stacks trapezoids over the shared s-range
  auto prod = fiber_product<Rat>({p, p});
  auto pc = prism_to_cell(prod);
  CHECK(pc.verts.size() == 8);
  CHECK(pc.halves.size() == 6);
  CHECK(cell_consistent(pc));
}

TEST_CASE("fattening: H offsets and vertices") {
  auto sq = box_cell<Rat>(pt2(Rat(0), Rat(0)), pt2(Rat(1), Rat(1)));
  auto fat = fatten(sq, Rat(1, 4));
  CHECK(cell_contains(fat, pt2(Rat(-1, 4), Rat(-1, 4))));
  CHECK_FALSE(cell_contains(fat, pt2(Rat(-1, 2), Rat(0))));
  CHECK(containment_margin(sq, fat) == Rat(1, 4));
}

TEST_CASE("parallelotope separation is exact") {
  auto a = box_para<Rat>(pt2(Rat(0), Rat(0)), pt2(Rat(1), Rat(1)));
  auto b = box_para<Rat>(pt2(Rat(2), Rat(0)), pt2(Rat(3), Rat(1)));
  CHECK(paras_disjoint(a, b));
  // touching boxes are linked (closed sets)
  auto c = box_para<Rat>(pt2(Rat(1), Rat(0)), pt2(Rat(2), Rat(1)));
  CHECK_FALSE(paras_disjoint(a, c));
  CHECK(paras_gap(a, b) == Rat(1));
  CHECK(paras_gap(a, c) == Rat(0));
  // rotated overlap
  MatX<Rat> rot(2, 2);
  rot << Rat(3, 5), Rat(-4, 5), Rat(4, 5), Rat(3, 5);
  auto rot_a = map_para(affine(rot, zero_vec<Rat>(2)), a);
  CHECK_FALSE(paras_disjoint(a, rot_a));
  // diagonal separation that axis tests alone would miss
  VecX<Rat> t(2);
  t << Rat(19, 10), Rat(19, 10);
  auto shifted = map_para(AffineMap<Rat>{rot, t}, a);
  bool dis = paras_disjoint(a, shifted);
  // oracle: sample alpha grid of both bodies, min distance must agree in sign
  bool overlap_found = false;
  for (int i = 0; i <= 8 && !overlap_found; ++i)
    for (int j = 0; j <= 8 && !overlap_found; ++j) {
      VecX<Rat> alpha(2);
      alpha << Rat(2 * i - 8, 8), Rat(2 * j - 8, 8);
      VecX<Rat> p = shifted.center + shifted.edges * alpha;
      if (cell_contains(box_cell<Rat>(pt2(Rat(0), Rat(0)), pt2(Rat(1), Rat(1))), p))
        overlap_found = true;
    }
  CHECK(dis == !overlap_found);
}

TEST_CASE("1-D and 3-D parallelotope tests") {
  VecX<Rat> l1(1), h1(1), l2(1), h2(1);
  l1 << Rat(0);
  h1 << Rat(1);
  l2 << Rat(3, 2);
  h2 << Rat(2);
  CHECK(paras_disjoint(box_para(l1, h1), box_para(l2, h2)));
  VecX<Rat> a3(3), b3(3), c3(3), d3(3);
  a3 << Rat(0), Rat(0), Rat(0);
  b3 << Rat(1), Rat(1), Rat(1);
  c3 << Rat(1, 2), Rat(1, 2), Rat(1, 2);
  d3 << Rat(2), Rat(2), Rat(2);
  CHECK_FALSE(paras_disjoint(box_para(a3, b3), box_para(c3, d3)));
  c3 << Rat(2), Rat(2), Rat(2);
  d3 << Rat(3), Rat(3), Rat(3);
  CHECK(paras_disjoint(box_para(a3, b3), box_para(c3, d3)));
}

TEST_CASE("union containment by subdivision") {
  // two overlapping boxes cover a straddling cell
  auto m1 = box_cell<Rat>(pt2(Rat(0), Rat(0)), pt2(Rat(3, 2), Rat(1)));
  auto m2 = box_cell<Rat>(pt2(Rat(1), Rat(0)), pt2(Rat(3), Rat(1)));
  auto inner = box_cell<Rat>(pt2(Rat(1, 2), Rat(1, 4)), pt2(Rat(2), Rat(3, 4)));
  auto margin = union_containment_margin(inner, {m1, m2});
  REQUIRE(margin.has_value());
  CHECK(margin->sign() > 0);
  // a cell escaping the union is rejected
  auto outside = box_cell<Rat>(pt2(Rat(2), Rat(0)), pt2(Rat(4), Rat(1)));
  auto bad = union_containment_margin(outside, {m1, m2});
  CHECK((!bad.has_value() || bad->sign() <= 0));
}

TEST_CASE("fiberwise prism coverage") {
  // region: s in [0,2], t in [s/4, 2]; cells: lower half + upper half with overlap
  Prism<Rat> region;
  region.s0 = Rat(0);
  region.s1 = Rat(2);
  region.lo = {{Rat(0), Rat(1, 2)}};
  region.hi = {{Rat(2), Rat(2)}};
  Prism<Rat> low = region, high = region;
  low.hi = {{Rat(5, 4), Rat(5, 4)}};
  high.lo = {{Rat(1), Rat(1)}};
  std::string witness;
  CHECK(prism_cover_fiberwise<Rat>(region, {{low, high}}, &witness));
  // shrink until a gap opens mid-column
  Prism<Rat> low_bad = low;
  low_bad.hi = {{Rat(5, 4), Rat(1, 2)}};  // dips below high.lo after crossing
  CHECK_FALSE(prism_cover_fiberwise<Rat>(region, {{low_bad, high}}, &witness));
  CHECK(!witness.empty());
}
