#pragma once

#include <cmath>

#include "cantor/affine.hpp"
#include "cantor/linalg.hpp"
#include "cantor/scalar.hpp"

namespace cantor {

namespace detail {

template <class S>
MatX<double> approx_mat(const MatX<S>& m) {
  static_assert(!is_complex_v<S>);
  MatX<double> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = scalar_traits<S>::approx(m(i, j));
  return out;
}

inline VecX<double> power_iterate(const MatX<double>& s, int iters) {
  const int n = static_cast<int>(s.rows());
  VecX<double> v = VecX<double>::Ones(n);
  v(0) += 0.5;  // break symmetric ties deterministically
  v.normalize();
  for (int k = 0; k < iters; ++k) {
    VecX<double> w = s * v;
    double norm = w.norm();
    if (!(norm > 0)) break;
    v = w / norm;
  }
  return v;
}

// Certified Rayleigh lower bound v'Sv / v'v computed in the matrix scalar's
// own arithmetic with v's double entries taken exactly.
template <class S>
Ball rayleigh(const MatX<S>& sym, const VecX<double>& v) {
  const int n = static_cast<int>(sym.rows());
  VecX<S> x(n);
  for (int i = 0; i < n; ++i) x(i) = from_rat<S>(Ball::rat_of_double(v(i)));
  S num = from_rat<S>(Rat(0)), den = from_rat<S>(Rat(0));
  VecX<S> sx = sym * x;
  for (int i = 0; i < n; ++i) {
    num += x(i) * sx(i);
    den += x(i) * x(i);
  }
  return ball_of(num) / ball_of(den);
}

// Is lambda_max(sym) < mu certifiable? Exact for Rat, conservative for Ball.
template <class S>
bool below(const MatX<S>& sym, const Rat& mu) {
  const int n = static_cast<int>(sym.rows());
  MatX<S> shifted = -sym;
  for (int i = 0; i < n; ++i) shifted(i, i) += from_rat<S>(mu);
  return ldlt_positive(shifted);
}

template <class S>
bool above(const MatX<S>& sym, const Rat& mu) {  // lambda_min(sym) > mu?
  const int n = static_cast<int>(sym.rows());
  MatX<S> shifted = sym;
  for (int i = 0; i < n; ++i) shifted(i, i) -= from_rat<S>(mu);
  return ldlt_positive(shifted);
}

// Gershgorin upper bound on lambda_max of a symmetric ball/rational matrix.
template <class S>
double gershgorin_hi(const MatX<S>& sym) {
  const int n = static_cast<int>(sym.rows());
  double best = 0;
  for (int i = 0; i < n; ++i) {
    double row = ball_of(sym(i, i)).hi();
    for (int j = 0; j < n; ++j)
      if (j != i) row += abs(ball_of(sym(i, j))).hi();
    best = std::max(best, row);
  }
  return best;
}

/// Enclosure of lambda_max(sym) for symmetric PSD `sym`: power iteration
/// proposes, exact/certified LDL^T shifts dispose.
template <class S>
Ball lambda_max_enclosure(const MatX<S>& sym) {
  const int n = static_cast<int>(sym.rows());
  if (n == 1) return ball_of(sym(0, 0));
  VecX<double> v = power_iterate(approx_mat(sym), 60);
  double lo = rayleigh(sym, v).lo();
  lo = std::max(lo, 0.0);
  double hi = gershgorin_hi(sym);
  if (hi < lo) hi = lo;
  // Shrink the upper bound toward the Rayleigh estimate by bisection.
  for (int it = 0; it < 80 && hi - lo > 1e-14 * (1 + std::fabs(hi)); ++it) {
    double mid = lo + (hi - lo) / 2;
    Rat mu = Ball::rat_of_double(mid);
    if (below(sym, mu))
      hi = mid;
    else
      lo = mid;  // could not certify "below": true value may exceed mid
  }
  return from_endpoints(std::max(0.0, rayleigh(sym, v).lo()), hi);
}

template <class S>
Ball lambda_min_enclosure(const MatX<S>& sym) {
  const int n = static_cast<int>(sym.rows());
  if (n == 1) return ball_of(sym(0, 0));
  double shift = gershgorin_hi(sym) + 1;
  MatX<double> inv_power = shift * MatX<double>::Identity(n, n) - approx_mat(sym);
  VecX<double> v = power_iterate(inv_power, 60);
  double hi = rayleigh(sym, v).hi();
  double lo = 0;
  for (int it = 0; it < 80 && hi - lo > 1e-14 * (1 + std::fabs(hi)); ++it) {
    double mid = lo + (hi - lo) / 2;
    Rat mu = Ball::rat_of_double(mid);
    if (above(sym, mu))
      lo = mid;
    else
      hi = mid;
  }
  return from_endpoints(lo, rayleigh(sym, v).hi());
}

}  // namespace detail

/// Largest singular value, as a certified enclosure.
template <class S>
Ball op_norm(const MatX<S>& a) {
  if constexpr (is_complex_v<S>) {
    using R = real_t<S>;
    const int n = static_cast<int>(a.rows());
    MatX<R> re(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        R x = a(i, j).real(), y = a(i, j).imag();
        re(i, j) = x;
        re(i, n + j) = -y;
        re(n + i, j) = y;
        re(n + i, n + j) = x;
      }
    return op_norm(re);
  } else {
    MatX<S> s = a.transpose() * a;
    return sqrt(detail::lambda_max_enclosure(s));
  }
}

/// Smallest singular value m(A); satisfies co_norm(A) = 1/op_norm(A^{-1}).
template <class S>
Ball co_norm(const MatX<S>& a) {
  if constexpr (is_complex_v<S>) {
    using R = real_t<S>;
    const int n = static_cast<int>(a.rows());
    MatX<R> re(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        R x = a(i, j).real(), y = a(i, j).imag();
        re(i, j) = x;
        re(i, n + j) = -y;
        re(n + i, j) = y;
        re(n + i, n + j) = x;
      }
    return co_norm(re);
  } else {
    MatX<S> s = a.transpose() * a;
    return sqrt(detail::lambda_min_enclosure(s));
  }
}

template <class S>
Ball op_norm(const AffineMap<S>& f) {
  return op_norm(f.linear);
}

/// Frobenius norm as a ball.
template <class S>
Ball frobenius(const MatX<S>& m) {
  return sqrt(ball_of(frobenius_sq(m)));
}

/// Max absolute row sum: the operator norm for the sup metric. Exact on
/// rationals.
template <class S>
real_t<S> inf_op_norm(const MatX<S>& m) {
  static_assert(!is_complex_v<S>);
  real_t<S> best = from_rat<S>(Rat(0));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    real_t<S> row = from_rat<S>(Rat(0));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row += abs(m(i, j));
    if (best < row) best = row;
  }
  return best;
}

/// exp(X) with a certified tail: requires ||X||_F < terms + 2.
inline MatX<Ball> matrix_exp(const MatX<Ball>& x, int terms = 24) {
  const int n = static_cast<int>(x.rows());
  double q = frobenius(x).hi();
  if (!(q < terms + 1)) throw std::domain_error("matrix_exp: norm too large for tail bound");
  MatX<Ball> sum = identity_mat<Ball>(n), pow = identity_mat<Ball>(n);
  double fact = 1;
  for (int k = 1; k <= terms; ++k) {
    pow = MatX<Ball>(pow * x);
    fact *= k;
    sum = MatX<Ball>(sum + pow / Ball(fact));
  }
  // tail <= q^{terms+1}/(terms+1)! * 1/(1 - q/(terms+2))
  double tail = std::pow(q, terms + 1) / (fact * (terms + 1)) / (1 - q / (terms + 2));
  tail = Ball::up(tail * (1 + 1e-10) + 1e-290);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sum(i, j) += Ball(0, tail);
  return sum;
}

/// log(M) for M near Id with a certified tail: requires ||M - Id||_F < 1.
inline MatX<Ball> matrix_log(const MatX<Ball>& m, int terms = 24) {
  const int n = static_cast<int>(m.rows());
  MatX<Ball> e = MatX<Ball>(m - identity_mat<Ball>(n));
  double q = frobenius(e).hi();
  if (!(q < 1)) throw std::domain_error("matrix_log: ||M - Id|| >= 1");
  MatX<Ball> sum = MatX<Ball>::Constant(n, n, Ball(0.0)), pow = identity_mat<Ball>(n);
  for (int k = 1; k <= terms; ++k) {
    pow = MatX<Ball>(pow * e);
    double coeff = (k % 2 == 1) ? 1.0 / k : -1.0 / k;
    sum = MatX<Ball>(sum + pow * Ball(coeff));
  }
  double tail = std::pow(q, terms + 1) / ((terms + 1) * (1 - q));
  tail = Ball::up(tail * (1 + 1e-10) + 1e-290);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sum(i, j) += Ball(0, tail);
  return sum;
}

template <class S>
MatX<Ball> to_ball_mat(const MatX<S>& m) {
  static_assert(!is_complex_v<S>);
  MatX<Ball> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = ball_of(m(i, j));
  return out;
}

template <class S>
VecX<Ball> to_ball_vec(const VecX<S>& v) {
  static_assert(!is_complex_v<S>);
  VecX<Ball> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = ball_of(v(i));
  return out;
}

}  // namespace cantor
