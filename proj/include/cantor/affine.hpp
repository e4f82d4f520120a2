#pragma once

#include <stdexcept>
#include <utility>

#include "cantor/linalg.hpp"
#include "cantor/scalar.hpp"

namespace cantor {

/// Invertible affine self-map x -> linear x + trans of F^d.
template <class S>
struct AffineMap {
  MatX<S> linear;
  VecX<S> trans;

  int dim() const { return static_cast<int>(trans.size()); }

  VecX<S> operator()(const VecX<S>& x) const { return linear * x + trans; }
};

template <class S>
bool is_invertible(const MatX<S>& m) {
  return !lu_decompose(m).singular;
}

/// Checked constructor: fails if the determinant is zero (exact mode) or its
/// modulus is not bounded away from zero beyond the tracked radius (ball mode).
template <class S>
AffineMap<S> affine(MatX<S> linear, VecX<S> trans) {
  if (linear.rows() != linear.cols() || linear.rows() != trans.size())
    throw std::invalid_argument("affine: inconsistent dimensions");
  if (!is_invertible(linear)) throw std::domain_error("affine: linear part not invertible");
  return AffineMap<S>{std::move(linear), std::move(trans)};
}

template <class S>
AffineMap<S> affine_identity(int d) {
  return AffineMap<S>{identity_mat<S>(d), zero_vec<S>(d)};
}

/// 1-D convenience: x -> a x + b.
template <class S>
AffineMap<S> affine_1d(const S& a, const S& b) {
  MatX<S> m(1, 1);
  m(0, 0) = a;
  VecX<S> v(1);
  v(0) = b;
  return affine(std::move(m), std::move(v));
}

/// compose(f, g)(x) = f(g(x)).
template <class S>
AffineMap<S> compose(const AffineMap<S>& f, const AffineMap<S>& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("compose: dimension mismatch");
  return AffineMap<S>{f.linear * g.linear, f.linear * g.trans + f.trans};
}

template <class S>
AffineMap<S> invert(const AffineMap<S>& f) {
  auto lu = lu_decompose(f.linear);
  if (lu.singular) throw std::domain_error("invert: determinant not certifiably nonzero");
  MatX<S> inv = lu_inverse(lu);
  return AffineMap<S>{inv, VecX<S>(-(inv * f.trans))};
}

template <class S>
bool approx_equal(const AffineMap<S>& f, const AffineMap<S>& g, double tol) {
  if (f.dim() != g.dim()) return false;
  auto near = [tol](const S& a, const S& b) {
    auto d = scalar_traits<S>::approx(a) - scalar_traits<S>::approx(b);
    return std::abs(d) <= tol;
  };
  for (int i = 0; i < f.dim(); ++i) {
    if (!near(f.trans(i), g.trans(i))) return false;
    for (int j = 0; j < f.dim(); ++j)
      if (!near(f.linear(i, j), g.linear(i, j))) return false;
  }
  return true;
}

/// (v, s, unimodular) coordinates of F^d ⋊ (F* × SL*(d,F)): the map is
/// x -> s * unimodular * x + v. det(unimodular) is 1 for odd real d and for
/// complex fields, ±1 for even real d. For complex scalars `scale` stores the
/// principal d-th root of det, so the paper's torus coordinate arg(det) equals
/// d * arg(scale).
template <class S>
struct DecomposedAffine {
  VecX<S> v;
  S scale;
  MatX<S> unimodular;

  int dim() const { return static_cast<int>(v.size()); }
};

namespace detail {

inline Ball nth_root(const Ball& x, unsigned d) {
  if (d == 1) return x;
  if (!(x.lo() > 0)) throw std::domain_error("nth_root: needs positive interval");
  double lo = std::pow(x.lo(), 1.0 / d) * (1 - 1e-12);
  double hi = std::pow(x.hi(), 1.0 / d) * (1 + 1e-12);
  return from_endpoints(lo, hi);
}

// Real scale factor s with s^d = |det| (sign handled by caller). Exact mode
// requires |det| to be a perfect d-th power.
inline Rat scale_root(const Rat& absdet, unsigned d) {
  Rat r(0);
  if (!exact_root(absdet, d, &r))
    throw std::domain_error(
        "decompose: |det| has no exact rational d-th root (use ball scalars)");
  return r;
}
inline Ball scale_root(const Ball& absdet, unsigned d) { return nth_root(absdet, d); }

template <class R>
std::complex<R> complex_nth_root(const std::complex<R>& z, unsigned d);

template <>
inline CBall complex_nth_root(const CBall& z, unsigned d) {
  if (d == 1) return z;
  double re = z.real().mid(), im = z.imag().mid();
  double r = std::hypot(re, im), th = std::atan2(im, re);
  double rad = z.real().rad() + z.imag().rad();
  if (!(r - rad > 0)) throw std::domain_error("complex_nth_root: det interval contains 0");
  double rr = std::pow(r, 1.0 / d), tt = th / d;
  // Error transport: d-th root is 1/(d (r-rad)^{(d-1)/d}) Lipschitz in modulus;
  // the angle moves by at most 2 rad/(r-rad) (arcsin bound), scaled by rr/d.
  double lip = 1.0 / (d * std::pow(r - rad, 1.0 - 1.0 / d));
  double err = Ball::widen(lip * rad + rr * (2.0 * rad / (r - rad)) / d, rr);
  return CBall(Ball(rr * std::cos(tt), err), Ball(rr * std::sin(tt), err));
}

template <>
inline CRat complex_nth_root(const CRat& z, unsigned d) {
  if (d == 1) return z;
  // Exact only when det is real positive with an exact root, or d == 2 with a
  // rational square root of (|det|, det) pair; anything else must go through
  // ball scalars.
  if (z.imag().is_zero() && z.real().sign() > 0)
    return CRat(scale_root(z.real(), d), Rat(0));
  if (d == 2) {
    // sqrt(a+bi) = (x, b/(2x)) with x = sqrt((a + |z|)/2) when all stay rational
    Rat a = z.real(), b = z.imag();
    Rat mod2 = a * a + b * b, mod(0);
    if (exact_root(mod2, 2, &mod)) {
      if (b.is_zero() && a.sign() < 0) {
        Rat y(0);
        if (exact_root(-a, 2, &y)) return CRat(Rat(0), y);
      }
      Rat x2 = (a + mod) / Rat(2), x(0);
      if (x2.sign() > 0 && exact_root(x2, 2, &x)) return CRat(x, b / (Rat(2) * x));
    }
  }
  throw std::domain_error("decompose: complex det has no exact rational d-th root");
}

}  // namespace detail

/// Appendix-style semidirect splitting [x -> Ax+v] -> (v, s_A, s_A^{-1} A).
template <class S>
DecomposedAffine<S> decompose(const AffineMap<S>& f) {
  const unsigned d = static_cast<unsigned>(f.dim());
  S det = mat_det(f.linear);
  if (!scalar_traits<S>::definitely_nonzero(det))
    throw std::domain_error("decompose: determinant not certifiably nonzero");
  S s;
  if constexpr (!is_complex_v<S>) {
    bool neg = scalar_traits<S>::definitely_positive(-det);
    S root = detail::scale_root(neg ? S(-det) : det, d);
    if (neg && d % 2 == 0) {
      s = root;  // det(unimodular) = -1 branch of SL^±
    } else {
      s = neg ? S(-root) : root;
    }
  } else {
    s = detail::complex_nth_root(det, d);
  }
  MatX<S> uni = f.linear / s;
  return DecomposedAffine<S>{f.trans, s, std::move(uni)};
}

template <class S>
AffineMap<S> recompose(const DecomposedAffine<S>& x) {
  return AffineMap<S>{MatX<S>(x.unimodular * x.scale), x.v};
}

/// Semidirect product law (v,a,A)*(w,b,B) = (a·Aw+v, ab, AB); equals the
/// decomposition of the composed maps.
template <class S>
DecomposedAffine<S> group_mul(const DecomposedAffine<S>& x, const DecomposedAffine<S>& y) {
  return DecomposedAffine<S>{VecX<S>(x.scale * (x.unimodular * y.v) + x.v), S(x.scale * y.scale),
                             MatX<S>(x.unimodular * y.unimodular)};
}

/// Action of an expanding renormalization operator psi^{-1} (psi = [x->Px+w]
/// a contracting generator of K) on group coordinates:
///   (v, t, A) -> (P^{-1}(v-w), t/s_P, Phat^{-1} A).
template <class S>
DecomposedAffine<S> expanding_action(const AffineMap<S>& gen, const DecomposedAffine<S>& x) {
  if (gen.dim() != x.dim()) throw std::invalid_argument("expanding_action: dimension mismatch");
  DecomposedAffine<S> g = decompose(gen);
  MatX<S> phat_inv = mat_inverse(g.unimodular);
  MatX<S> p_inv = phat_inv / g.scale;
  return DecomposedAffine<S>{VecX<S>(p_inv * (x.v - g.v)), S(x.scale / g.scale),
                             MatX<S>(phat_inv * x.unimodular)};
}

/// Action of a contracting renormalization operator phi = [x->P'x+w'] (a
/// generator of K') on group coordinates:
///   (v, t, A) -> (v + t·Aw', t·s_{P'}, A Phat').
template <class S>
DecomposedAffine<S> contracting_action(const AffineMap<S>& gen, const DecomposedAffine<S>& x) {
  if (gen.dim() != x.dim()) throw std::invalid_argument("contracting_action: dimension mismatch");
  DecomposedAffine<S> g = decompose(gen);
  return DecomposedAffine<S>{VecX<S>(x.v + x.scale * (x.unimodular * g.v)), S(x.scale * g.scale),
                             MatX<S>(x.unimodular * g.unimodular)};
}

/// C^d -> R^{2d} with the interleaving (x_1..x_d, y_1..y_d); a complex linear
/// map A+iB becomes [[A,-B],[B,A]].
template <class R>
AffineMap<R> realify(const AffineMap<std::complex<R>>& f) {
  const int d = f.dim();
  MatX<R> lin(2 * d, 2 * d);
  VecX<R> tr(2 * d);
  for (int i = 0; i < d; ++i) {
    tr(i) = f.trans(i).real();
    tr(d + i) = f.trans(i).imag();
    for (int j = 0; j < d; ++j) {
      R a = f.linear(i, j).real(), b = f.linear(i, j).imag();
      lin(i, j) = a;
      lin(i, d + j) = -b;
      lin(d + i, j) = b;
      lin(d + i, d + j) = a;
    }
  }
  return AffineMap<R>{std::move(lin), std::move(tr)};
}

template <class R>
AffineMap<std::complex<R>> complexify(const AffineMap<R>& f, int d) {
  if (f.dim() != 2 * d) throw std::invalid_argument("complexify: dimension mismatch");
  MatX<std::complex<R>> lin(d, d);
  VecX<std::complex<R>> tr(d);
  for (int i = 0; i < d; ++i) {
    tr(i) = std::complex<R>(f.trans(i), f.trans(d + i));
    for (int j = 0; j < d; ++j)
      lin(i, j) = std::complex<R>(f.linear(i, j), f.linear(d + i, j));
  }
  return AffineMap<std::complex<R>>{std::move(lin), std::move(tr)};
}

}  // namespace cantor
