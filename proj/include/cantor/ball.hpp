#pragma once

#include <Eigen/Core>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "cantor/rational.hpp"

namespace cantor {

/// Floating scalar with a tracked absolute error radius: the value lies in
/// [mid - rad, mid + rad]. Every operation widens the radius outward by the
/// propagated input radii plus a rounding term, so predicates on balls that
/// exclude zero are sound. Radii are never negative.
class Ball {
 public:
  Ball() : mid_(0), rad_(0) {}
  Ball(double v) : mid_(v), rad_(0) {}  // NOLINT: doubles are exact binary values
  Ball(int v) : mid_(v), rad_(0) {}     // NOLINT
  Ball(double mid, double rad) : mid_(mid), rad_(rad) {
    if (!(rad >= 0) || !std::isfinite(mid) || !std::isfinite(rad))
      throw std::domain_error("Ball: bad midpoint/radius");
  }

  /// Sound conversion: the exact error |q - mid| is computed in rationals and
  /// rounded up.
  static Ball from_rat(const Rat& q) {
    double m = q.to_double();
    if (!std::isfinite(m)) throw std::domain_error("Ball: rational overflows double");
    Rat err = q - rat_of_double(m);
    double r = cantor::abs(err).to_double();
    return Ball(m, widen(r, m));
  }

  static Rat rat_of_double(double x) {
    mpq_class q(x);
    return Rat(q);
  }

  double mid() const { return mid_; }
  double rad() const { return rad_; }
  double lo() const { return mid_ - rad_; }
  double hi() const { return mid_ + rad_; }
  bool is_exact() const { return rad_ == 0; }

  bool definitely_positive() const { return lo() > 0; }
  bool definitely_negative() const { return hi() < 0; }
  bool definitely_nonzero() const { return definitely_positive() || definitely_negative(); }
  bool contains_zero() const { return !definitely_nonzero(); }

  Ball& operator+=(const Ball& o) { *this = *this + o; return *this; }
  Ball& operator-=(const Ball& o) { *this = *this - o; return *this; }
  Ball& operator*=(const Ball& o) { *this = *this * o; return *this; }
  Ball& operator/=(const Ball& o) { *this = *this / o; return *this; }

  friend Ball operator+(const Ball& a, const Ball& b) {
    double m = a.mid_ + b.mid_;
    return Ball(m, widen(a.rad_ + b.rad_, m));
  }
  friend Ball operator-(const Ball& a, const Ball& b) {
    double m = a.mid_ - b.mid_;
    return Ball(m, widen(a.rad_ + b.rad_, m));
  }
  friend Ball operator-(const Ball& a) { return Ball(-a.mid_, a.rad_); }
  friend Ball operator+(const Ball& a) { return a; }
  friend Ball operator*(const Ball& a, const Ball& b) {
    double m = a.mid_ * b.mid_;
    double r = std::fabs(a.mid_) * b.rad_ + std::fabs(b.mid_) * a.rad_ + a.rad_ * b.rad_;
    return Ball(m, widen(r, m));
  }
  friend Ball operator/(const Ball& a, const Ball& b) {
    double bl = std::fabs(b.mid_) - b.rad_;
    if (!(bl > 0)) throw std::domain_error("Ball: division by interval containing zero");
    double m = a.mid_ / b.mid_;
    // |x/y - am/bm| <= |x| |bm-y| / (|y||bm|) + |x-am|/|bm|
    //               <= ((|am|+ra) rb / bl + ra) / |bm|
    double r = ((std::fabs(a.mid_) + a.rad_) * b.rad_ / bl + a.rad_) / std::fabs(b.mid_);
    return Ball(m, widen(r, m));
  }

  // Midpoint order: used only for pivot selection, never for certified logic.
  friend bool operator<(const Ball& a, const Ball& b) { return a.mid_ < b.mid_; }
  friend bool operator>(const Ball& a, const Ball& b) { return a.mid_ > b.mid_; }
  friend bool operator<=(const Ball& a, const Ball& b) { return a.mid_ <= b.mid_; }
  friend bool operator>=(const Ball& a, const Ball& b) { return a.mid_ >= b.mid_; }
  friend bool operator==(const Ball& a, const Ball& b) {
    return a.mid_ == b.mid_ && a.rad_ == b.rad_;
  }
  friend bool operator!=(const Ball& a, const Ball& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Ball& b) {
    return os << b.mid_ << "±" << b.rad_;
  }

  static double up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
  }
  /// Outward rounding slack: covers the handful of nearest-rounded operations
  /// used to produce a midpoint/radius pair.
  static double widen(double rad, double mid) {
    return up(up(rad) + std::fabs(mid) * 1e-13 + 1e-290);
  }

 private:
  double mid_, rad_;
};

inline Ball abs(const Ball& a) {
  if (a.lo() >= 0) return a;
  if (a.hi() <= 0) return -a;
  double hi = std::max(-a.lo(), a.hi());
  return Ball(hi / 2, Ball::up(hi / 2));
}

inline Ball sqrt(const Ball& a) {
  if (a.lo() < 0) {
    if (a.hi() < 0) throw std::domain_error("Ball: sqrt of negative interval");
    double hi = std::sqrt(a.hi()) * (1 + 1e-13);
    return Ball(hi / 2, Ball::up(hi / 2));
  }
  double lo = std::sqrt(a.lo()) * (1 - 1e-13);
  double hi = std::sqrt(a.hi()) * (1 + 1e-13);
  return Ball((lo + hi) / 2, Ball::widen((hi - lo) / 2, hi));
}

inline Ball min(const Ball& a, const Ball& b) { return a.mid() < b.mid() ? a : b; }
inline Ball max(const Ball& a, const Ball& b) { return a.mid() < b.mid() ? b : a; }

inline Ball hull(const Ball& a, const Ball& b) {
  double lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  return Ball((lo + hi) / 2, Ball::widen((hi - lo) / 2, hi));
}

inline Ball from_endpoints(double lo, double hi) {
  return Ball((lo + hi) / 2, Ball::widen((hi - lo) / 2, hi));
}

}  // namespace cantor

namespace Eigen {
template <>
struct NumTraits<cantor::Ball> {
  using Real = cantor::Ball;
  using NonInteger = cantor::Ball;
  using Nested = cantor::Ball;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 4,
    MulCost = 8,
  };
  static inline Real epsilon() { return cantor::Ball(0.0); }
  static inline Real dummy_precision() { return cantor::Ball(0.0); }
  static inline int digits10() { return 12; }
};
}  // namespace Eigen
