#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cantor/affine.hpp"
#include "cantor/norms.hpp"

using namespace cantor;

namespace {

// x -> x/(N+tau) + w, the K1-style generators used across the suite.
AffineMap<Rat> gen1d(const Rat& ratio, const Rat& off) { return affine_1d(ratio, off); }

template <class S>
AffineMap<S> random_affine(std::mt19937& rng, int d, bool complex_entries = false) {
  std::uniform_int_distribution<int> num(-8, 8), den(1, 6);
  auto draw_rat = [&] { return Rat(num(rng), den(rng)); };
  while (true) {
    MatX<S> lin(d, d);
    VecX<S> tr(d);
    for (int i = 0; i < d; ++i) {
      tr(i) = [&] {
        if constexpr (is_complex_v<S>)
          return S(scalar_traits<real_t<S>>::from_rat(draw_rat()),
                   scalar_traits<real_t<S>>::from_rat(draw_rat()));
        else
          return from_rat<S>(draw_rat());
      }();
      for (int j = 0; j < d; ++j) {
        if constexpr (is_complex_v<S>) {
          (void)complex_entries;
          lin(i, j) = S(scalar_traits<real_t<S>>::from_rat(draw_rat()),
                        scalar_traits<real_t<S>>::from_rat(draw_rat()));
        } else {
          lin(i, j) = from_rat<S>(draw_rat());
        }
      }
    }
    if (is_invertible(lin)) return AffineMap<S>{lin, tr};
  }
}

double dist(const AffineMap<Ball>& f, const AffineMap<Ball>& g) {
  double m = 0;
  for (int i = 0; i < f.dim(); ++i) {
    m = std::max(m, std::fabs(f.trans(i).mid() - g.trans(i).mid()));
    for (int j = 0; j < f.dim(); ++j)
      m = std::max(m, std::fabs(f.linear(i, j).mid() - g.linear(i, j).mid()));
  }
  return m;
}

}  // namespace

TEST_CASE("compose: identity, K1 words, inverse") {
  auto id = affine_identity<Rat>(1);
  auto g11 = gen1d(Rat(1, 7), Rat(0));
  auto g21 = gen1d(Rat(1, 7), Rat(1, 7));
  CHECK(compose(id, g11).linear(0, 0) == Rat(1, 7));
  CHECK(compose(id, g11).trans(0) == Rat(0));
  // N=7, tau=0: g11 ∘ g21 = x/49 + 1/49
  auto w = compose(g11, g21);
  CHECK(w.linear(0, 0) == Rat(1, 49));
  CHECK(w.trans(0) == Rat(1, 49));
  auto round = compose(g21, invert(g21));
  CHECK(round.linear(0, 0) == Rat(1));
  CHECK(round.trans(0) == Rat(0));
}

TEST_CASE("invert: identity, x/N, involution") {
  auto id = affine_identity<Rat>(2);
  auto iid = invert(id);
  CHECK(iid.linear == id.linear);
  auto f = gen1d(Rat(1, 7), Rat(0));
  auto fi = invert(f);
  CHECK(fi.linear(0, 0) == Rat(7));
  CHECK(fi.trans(0) == Rat(0));
  auto ff = invert(invert(f));
  CHECK(ff.linear(0, 0) == f.linear(0, 0));
  CHECK(ff.trans(0) == f.trans(0));
  MatX<Rat> sing(1, 1);
  sing(0, 0) = Rat(0);
  CHECK_THROWS(affine(sing, zero_vec<Rat>(1)));
}

TEST_CASE("group laws on random triples, exact") {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    int d = 1 + static_cast<int>(rng() % 3);
    auto f = random_affine<Rat>(rng, d);
    auto g = random_affine<Rat>(rng, d);
    auto h = random_affine<Rat>(rng, d);
    auto lhs = compose(compose(f, g), h);
    auto rhs = compose(f, compose(g, h));
    CHECK(lhs.linear == rhs.linear);
    CHECK(lhs.trans == rhs.trans);
    auto inv = compose(invert(f), f);
    CHECK(inv.linear == identity_mat<Rat>(d));
    for (int i = 0; i < d; ++i) CHECK(inv.trans(i) == Rat(0));
  }
}

TEST_CASE("decompose: trivial and derived examples") {
  // decompose(Id) = (0, 1, Id)
  auto did = decompose(affine_identity<Rat>(3));
  CHECK(did.scale == Rat(1));
  CHECK(did.unimodular == identity_mat<Rat>(3));
  // d=1: x -> x/2 gives (0, 1/2, 1)
  auto dh = decompose(gen1d(Rat(1, 2), Rat(0)));
  CHECK(dh.scale == Rat(1, 2));
  CHECK(dh.unimodular(0, 0) == Rat(1));
  // d=2 diag(2, 1/2): det 1, so s = 1 and the SL part is the matrix itself
  MatX<Rat> lin = identity_mat<Rat>(2);
  lin(0, 0) = Rat(2);
  lin(1, 1) = Rat(1, 2);
  auto dd = decompose(affine(lin, zero_vec<Rat>(2)));
  CHECK(dd.scale == Rat(1));
  CHECK(dd.unimodular(0, 0) == Rat(2));
  CHECK(dd.unimodular(1, 1) == Rat(1, 2));
  // recompose is a two-sided inverse here
  auto back = recompose(dd);
  CHECK(back.linear == lin);
}

TEST_CASE("decompose: SL* determinant convention") {
  // even real d, negative det: scale stays positive, det(unimodular) = -1
  MatX<Rat> lin(2, 2);
  lin << Rat(0), Rat(1), Rat(1), Rat(0);
  auto dec = decompose(affine(lin, zero_vec<Rat>(2)));
  CHECK(dec.scale == Rat(1));
  CHECK(mat_det(dec.unimodular) == Rat(-1));
  // odd real d, negative det: sign goes to the scale, det(unimodular) = +1
  MatX<Rat> lin3 = identity_mat<Rat>(3);
  lin3(0, 0) = Rat(-8);
  auto dec3 = decompose(affine(lin3, zero_vec<Rat>(3)));
  CHECK(dec3.scale == Rat(-2));
  CHECK(mat_det(dec3.unimodular) == Rat(1));
  // exact mode refuses non-perfect-power determinants
  MatX<Rat> bad = identity_mat<Rat>(2);
  bad(0, 0) = Rat(1, 2);
  CHECK_THROWS(decompose(affine(bad, zero_vec<Rat>(2))));
}

TEST_CASE("decomposition round-trip: 1000 random maps per (d, field), ball mode") {
  std::mt19937 rng(23);
  for (int d = 1; d <= 3; ++d) {
    int reps = 1000 / 3;
    for (int t = 0; t < reps; ++t) {
      auto fr = random_affine<Rat>(rng, d);
      auto f = AffineMap<Ball>{mat_from_rat<Ball>(fr.linear), vec_from_rat<Ball>(fr.trans)};
      auto rt = recompose(decompose(f));
      for (int i = 0; i < d; ++i) {
        CHECK(std::fabs(rt.trans(i).mid() - f.trans(i).mid()) <= 1e-9);
        for (int j = 0; j < d; ++j) {
          // true value is inside the tracked radius
          double err = std::fabs(rt.linear(i, j).mid() - f.linear(i, j).mid());
          CHECK(err <= rt.linear(i, j).rad() + 1e-12);
        }
      }
      // complex field
      auto gc1 = random_affine<CRat>(rng, d);
      AffineMap<CBall> g{MatX<CBall>(d, d), VecX<CBall>(d)};
      for (int i = 0; i < d; ++i) {
        g.trans(i) = scalar_traits<CRat>::to_ball(gc1.trans(i));
        for (int j = 0; j < d; ++j) g.linear(i, j) = scalar_traits<CRat>::to_ball(gc1.linear(i, j));
      }
      auto rtc = recompose(decompose(g));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double err = std::abs(scalar_traits<CBall>::approx(rtc.linear(i, j)) -
                                scalar_traits<CBall>::approx(g.linear(i, j)));
          double rad = rtc.linear(i, j).real().rad() + rtc.linear(i, j).imag().rad();
          CHECK(err <= rad + 1e-9);
        }
    }
  }
}

TEST_CASE("group_mul matches composition through decomposition") {
  std::mt19937 rng(5);
  for (int t = 0; t < 40; ++t) {
    int d = 1 + static_cast<int>(rng() % 2);
    auto fr = random_affine<Rat>(rng, d);
    auto gr = random_affine<Rat>(rng, d);
    auto f = AffineMap<Ball>{mat_from_rat<Ball>(fr.linear), vec_from_rat<Ball>(fr.trans)};
    auto g = AffineMap<Ball>{mat_from_rat<Ball>(gr.linear), vec_from_rat<Ball>(gr.trans)};
    auto lhs = recompose(group_mul(decompose(f), decompose(g)));
    auto rhs = compose(f, g);
    CHECK(dist(lhs, rhs) <= 1e-8);
  }
}

TEST_CASE("op_norm and co_norm") {
  CHECK(op_norm(identity_mat<Rat>(3)).mid() == doctest::Approx(1.0));
  CHECK(co_norm(identity_mat<Rat>(3)).mid() == doctest::Approx(1.0));
  MatX<Rat> diag = identity_mat<Rat>(2);
  diag(0, 0) = Rat(3);
  diag(1, 1) = Rat(2);
  auto on = op_norm(diag);
  auto cn = co_norm(diag);
  CHECK(on.lo() <= 3.0);
  CHECK(on.hi() >= 3.0);
  CHECK(on.rad() < 1e-9);
  CHECK(cn.lo() <= 2.0);
  CHECK(cn.hi() >= 2.0);
  // rotation: both singular values 1
  MatX<Rat> rot(2, 2);
  rot << Rat(3, 5), Rat(-4, 5), Rat(4, 5), Rat(3, 5);
  CHECK(op_norm(rot).mid() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(co_norm(rot).mid() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("norm duality and submultiplicativity on random matrices") {
  std::mt19937 rng(31);
  for (int t = 0; t < 25; ++t) {
    int d = 1 + static_cast<int>(rng() % 3);
    auto f = random_affine<Rat>(rng, d);
    auto inv = mat_inverse(f.linear);
    Ball lhs = co_norm(f.linear) * op_norm(inv);
    CHECK(lhs.lo() <= 1.0 + 1e-7);
    CHECK(lhs.hi() >= 1.0 - 1e-7);
    auto g = random_affine<Rat>(rng, d);
    Ball ab = op_norm(MatX<Rat>(f.linear * g.linear));
    Ball bound = op_norm(f.linear) * op_norm(g.linear);
    CHECK(ab.lo() <= bound.hi() * (1 + 1e-9));
  }
}

TEST_CASE("expanding action: K1 generator examples") {
  // gen = Id fixes everything
  auto idd = decompose(affine_identity<Rat>(1));
  auto fixed = expanding_action(affine_identity<Rat>(1), idd);
  CHECK(fixed.scale == Rat(1));
  // d=1, N=7, tau=0, gen = g11: (v,t) = (1/2, 3/10) -> (7/2, 21/10)
  auto g11 = gen1d(Rat(1, 7), Rat(0));
  DecomposedAffine<Rat> x{VecX<Rat>(1), Rat(3, 10), identity_mat<Rat>(1)};
  x.v(0) = Rat(1, 2);
  auto y = expanding_action(g11, x);
  CHECK(y.v(0) == Rat(7, 2));
  CHECK(y.scale == Rat(21, 10));
  // gen = g12 = x/7 + 6/7: (v,t) = (1,1) -> (1,7)
  auto g12 = gen1d(Rat(1, 7), Rat(6, 7));
  DecomposedAffine<Rat> z{VecX<Rat>(1), Rat(1), identity_mat<Rat>(1)};
  z.v(0) = Rat(1);
  auto zz = expanding_action(g12, z);
  CHECK(zz.v(0) == Rat(1));
  CHECK(zz.scale == Rat(7));
}

TEST_CASE("contracting action: K1' generator examples") {
  // f2 = x/2 + 1/2 at tau=0: (v,t) = (0,1) -> (1/2, 1/2)
  auto f2 = gen1d(Rat(1, 2), Rat(1, 2));
  DecomposedAffine<Rat> x{zero_vec<Rat>(1), Rat(1), identity_mat<Rat>(1)};
  auto y = contracting_action(f2, x);
  CHECK(y.v(0) == Rat(1, 2));
  CHECK(y.scale == Rat(1, 2));
  // f1 = x/2: translation unchanged, scale halves
  auto f1 = gen1d(Rat(1, 2), Rat(0));
  DecomposedAffine<Rat> w{zero_vec<Rat>(1), Rat(5, 3), identity_mat<Rat>(1)};
  w.v(0) = Rat(-2, 7);
  auto u = contracting_action(f1, w);
  CHECK(u.v(0) == Rat(-2, 7));
  CHECK(u.scale == Rat(5, 6));
}

TEST_CASE("action-composition consistency on random inputs") {
  std::mt19937 rng(43);
  for (int t = 0; t < 30; ++t) {
    int d = 1 + static_cast<int>(rng() % 2);
    auto genr = random_affine<Rat>(rng, d);
    auto confr = random_affine<Rat>(rng, d);
    auto gen = AffineMap<Ball>{mat_from_rat<Ball>(genr.linear), vec_from_rat<Ball>(genr.trans)};
    auto conf = decompose(
        AffineMap<Ball>{mat_from_rat<Ball>(confr.linear), vec_from_rat<Ball>(confr.trans)});
    auto via_action = expanding_action(gen, conf);
    auto via_compose = decompose(compose(invert(gen), recompose(conf)));
    CHECK(dist(recompose(via_action), recompose(via_compose)) <= 1e-7);
    auto c_action = contracting_action(gen, conf);
    auto c_compose = decompose(compose(recompose(conf), gen));
    CHECK(dist(recompose(c_action), recompose(c_compose)) <= 1e-7);
  }
}

TEST_CASE("realify: multiplicativity and examples") {
  // z -> z is Id on R^2
  auto idc = affine_identity<CRat>(1);
  auto rid = realify(idc);
  CHECK(rid.linear == identity_mat<Rat>(2));
  // z -> iz has linear part [[0,-1],[1,0]]
  MatX<CRat> ilin(1, 1);
  ilin(0, 0) = CRat(Rat(0), Rat(1));
  auto rot = realify(AffineMap<CRat>{ilin, VecX<CRat>::Constant(1, CRat(Rat(0), Rat(0)))});
  CHECK(rot.linear(0, 0) == Rat(0));
  CHECK(rot.linear(0, 1) == Rat(-1));
  CHECK(rot.linear(1, 0) == Rat(1));
  CHECK(rot.linear(1, 1) == Rat(0));
  // z -> 2z is 2 Id
  MatX<CRat> two(1, 1);
  two(0, 0) = CRat(Rat(2), Rat(0));
  auto r2 = realify(AffineMap<CRat>{two, VecX<CRat>::Constant(1, CRat(Rat(0), Rat(0)))});
  CHECK(r2.linear(0, 0) == Rat(2));
  CHECK(r2.linear(1, 1) == Rat(2));
  // homomorphism on random pairs
  std::mt19937 rng(17);
  for (int t = 0; t < 25; ++t) {
    int d = 1 + static_cast<int>(rng() % 2);
    auto f = random_affine<CRat>(rng, d);
    auto g = random_affine<CRat>(rng, d);
    auto lhs = realify(compose(f, g));
    auto rhs = compose(realify(f), realify(g));
    CHECK(lhs.linear == rhs.linear);
    CHECK(lhs.trans == rhs.trans);
  }
}
