#pragma once

#include <complex>
#include <type_traits>

#include "cantor/ball.hpp"
#include "cantor/rational.hpp"

namespace cantor {

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using CRat = std::complex<Rat>;
using CBall = std::complex<Ball>;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
  static constexpr bool is_complex = false;
  static constexpr bool is_exact = true;
  using real_type = Rat;
  using complex_type = CRat;
  static Rat real(const Rat& x) { return x; }
  static Rat imag(const Rat&) { return Rat(0); }
  static Ball to_ball(const Rat& x) { return Ball::from_rat(x); }
  static double approx(const Rat& x) { return x.to_double(); }
  static Rat from_rat(const Rat& x) { return x; }
  static Rat abs2(const Rat& x) { return x * x; }
  static bool definitely_positive(const Rat& x) { return x.sign() > 0; }
  static bool definitely_nonzero(const Rat& x) { return x.sign() != 0; }
};

template <>
struct scalar_traits<Ball> {
  static constexpr bool is_complex = false;
  static constexpr bool is_exact = false;
  using real_type = Ball;
  using complex_type = CBall;
  static Ball real(const Ball& x) { return x; }
  static Ball imag(const Ball&) { return Ball(0.0); }
  static Ball to_ball(const Ball& x) { return x; }
  static double approx(const Ball& x) { return x.mid(); }
  static Ball from_rat(const Rat& x) { return Ball::from_rat(x); }
  static Ball abs2(const Ball& x) { return x * x; }
  static bool definitely_positive(const Ball& x) { return x.definitely_positive(); }
  static bool definitely_nonzero(const Ball& x) { return x.definitely_nonzero(); }
};

template <class R>
struct scalar_traits<std::complex<R>> {
  static constexpr bool is_complex = true;
  static constexpr bool is_exact = scalar_traits<R>::is_exact;
  using real_type = R;
  using complex_type = std::complex<R>;
  static R real(const std::complex<R>& x) { return x.real(); }
  static R imag(const std::complex<R>& x) { return x.imag(); }
  static CBall to_ball(const std::complex<R>& x) {
    return CBall(scalar_traits<R>::to_ball(x.real()), scalar_traits<R>::to_ball(x.imag()));
  }
  static std::complex<double> approx(const std::complex<R>& x) {
    return {scalar_traits<R>::approx(x.real()), scalar_traits<R>::approx(x.imag())};
  }
  static std::complex<R> from_rat(const Rat& x) {
    return std::complex<R>(scalar_traits<R>::from_rat(x), R(0));
  }
  static R abs2(const std::complex<R>& x) {
    return x.real() * x.real() + x.imag() * x.imag();
  }
  static bool definitely_positive(const std::complex<R>&) = delete;
  static bool definitely_nonzero(const std::complex<R>& x) {
    return scalar_traits<R>::definitely_positive(abs2(x));
  }
};

template <class S>
constexpr bool is_exact_v = scalar_traits<S>::is_exact;
template <class S>
constexpr bool is_complex_v = scalar_traits<S>::is_complex;
template <class S>
using real_t = typename scalar_traits<S>::real_type;

template <class S>
S from_rat(const Rat& x) {
  return scalar_traits<S>::from_rat(x);
}

template <class S>
MatX<S> mat_from_rat(const MatX<Rat>& m) {
  MatX<S> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = from_rat<S>(m(i, j));
  return out;
}

template <class S>
VecX<S> vec_from_rat(const VecX<Rat>& v) {
  VecX<S> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = from_rat<S>(v(i));
  return out;
}

template <class S>
VecX<double> vec_approx(const VecX<S>& v) {
  VecX<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = scalar_traits<real_t<S>>::approx(v(i));  // real scalars only
  return out;
}

/// Squared Euclidean norm in the scalar's own arithmetic (exact for Rat).
template <class S>
real_t<S> norm2_sq(const VecX<S>& v) {
  real_t<S> s = scalar_traits<real_t<S>>::from_rat(Rat(0));
  for (Eigen::Index i = 0; i < v.size(); ++i) s += scalar_traits<S>::abs2(v(i));
  return s;
}

template <class S>
real_t<S> frobenius_sq(const MatX<S>& m) {
  real_t<S> s = scalar_traits<real_t<S>>::from_rat(Rat(0));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += scalar_traits<S>::abs2(m(i, j));
  return s;
}

inline Ball ball_of(const Rat& x) { return Ball::from_rat(x); }
inline Ball ball_of(const Ball& x) { return x; }

}  // namespace cantor
