#pragma once

#include <stdexcept>

#include "cantor/scalar.hpp"

namespace cantor {

/// Gaussian elimination with partial pivoting, pivot scored by |.|^2 so the
/// same code path serves rational, ball and complex scalars. Row ops widen
/// ball radii automatically; a pivot whose |.|^2 is not certifiably nonzero is
/// treated as singular.
template <class S>
struct LU {
  MatX<S> lu;              // combined factors, row-permuted in place
  std::vector<int> perm;   // row permutation
  int sign = 1;
  bool singular = false;
};

template <class S>
LU<S> lu_decompose(MatX<S> a) {
  using T = scalar_traits<S>;
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("lu_decompose: square matrix required");
  LU<S> f;
  f.perm.resize(n);
  for (int i = 0; i < n; ++i) f.perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    auto best = T::abs2(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      auto score = T::abs2(a(i, k));
      if (best < score) { best = score; piv = i; }
    }
    if (!scalar_traits<real_t<S>>::definitely_positive(best)) {
      f.singular = true;
      f.lu = std::move(a);
      return f;
    }
    if (piv != k) {
      a.row(piv).swap(a.row(k));
      std::swap(f.perm[piv], f.perm[k]);
      f.sign = -f.sign;
    }
    for (int i = k + 1; i < n; ++i) {
      S m = a(i, k) / a(k, k);
      a(i, k) = m;
      for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

template <class S>
S lu_det(const LU<S>& f) {
  if (f.singular) return from_rat<S>(Rat(0));
  S d = from_rat<S>(Rat(f.sign));
  for (Eigen::Index k = 0; k < f.lu.rows(); ++k) d *= f.lu(k, k);
  return d;
}

template <class S>
VecX<S> lu_solve(const LU<S>& f, const VecX<S>& b) {
  if (f.singular) throw std::domain_error("lu_solve: singular matrix");
  const int n = static_cast<int>(f.lu.rows());
  VecX<S> y(n);
  for (int i = 0; i < n; ++i) {
    S s = b(f.perm[i]);
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * y(j);
    y(i) = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    S s = y(i);
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * y(j);
    y(i) = s / f.lu(i, i);
  }
  return y;
}

template <class S>
MatX<S> lu_inverse(const LU<S>& f) {
  const int n = static_cast<int>(f.lu.rows());
  MatX<S> inv(n, n);
  VecX<S> e = VecX<S>::Constant(n, from_rat<S>(Rat(0)));
  for (int j = 0; j < n; ++j) {
    e(j) = from_rat<S>(Rat(1));
    inv.col(j) = lu_solve(f, e);
    e(j) = from_rat<S>(Rat(0));
  }
  return inv;
}

template <class S>
S mat_det(const MatX<S>& a) {
  return lu_det(lu_decompose(a));
}

template <class S>
MatX<S> mat_inverse(const MatX<S>& a) {
  auto f = lu_decompose(a);
  if (f.singular) throw std::domain_error("mat_inverse: singular matrix");
  return lu_inverse(f);
}

template <class S>
VecX<S> mat_solve(const MatX<S>& a, const VecX<S>& b) {
  auto f = lu_decompose(a);
  if (f.singular) throw std::domain_error("mat_solve: singular matrix");
  return lu_solve(f, b);
}

template <class S>
MatX<S> identity_mat(int n) {
  MatX<S> m = MatX<S>::Constant(n, n, from_rat<S>(Rat(0)));
  for (int i = 0; i < n; ++i) m(i, i) = from_rat<S>(Rat(1));
  return m;
}

template <class S>
VecX<S> zero_vec(int n) {
  return VecX<S>::Constant(n, from_rat<S>(Rat(0)));
}

/// LDL^T pivots of a symmetric matrix, no pivoting (valid test for positive
/// definiteness): returns true iff every pivot is certifiably positive.
/// `inconclusive` reports a pivot whose sign could not be certified.
template <class S>
bool ldlt_positive(const MatX<S>& a, bool* inconclusive = nullptr) {
  static_assert(!is_complex_v<S>, "ldlt_positive: real symmetric input");
  const int n = static_cast<int>(a.rows());
  MatX<S> m = a;
  if (inconclusive) *inconclusive = false;
  for (int k = 0; k < n; ++k) {
    const S& p = m(k, k);
    if (!scalar_traits<S>::definitely_positive(p)) {
      if constexpr (!is_exact_v<S>) {
        if (inconclusive && !(ball_of(p).definitely_negative())) *inconclusive = true;
      }
      return false;
    }
    for (int i = k + 1; i < n; ++i) {
      S f = m(i, k) / p;
      for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return true;
}

}  // namespace cantor
