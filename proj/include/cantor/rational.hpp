#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <iostream>
#include <stdexcept>
#include <string>

namespace cantor {

/// Exact rational scalar. Thin value wrapper over mpq_class; always canonical.
/// The wrapper exists so Eigen sees a plain type instead of gmpxx expression
/// templates.
class Rat {
 public:
  Rat() : q_(0) {}
  Rat(int n) : q_(n) {}                 // NOLINT: implicit by design
  Rat(long n) : q_(static_cast<signed long>(n)) {}
  Rat(double) = delete;  // no silent float entry into exact arithmetic
  Rat(int num, int den) : q_(num, den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    q_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }
  explicit Rat(const mpz_class& num, const mpz_class& den) : q_(num, den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    q_.canonicalize();
  }

  /// Accepts "p", "p/q", and decimal strings like "-0.125".
  static Rat parse(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      mpq_class q;
      if (q.set_str(s, 10) != 0) throw std::domain_error("Rat: bad literal '" + s + "'");
      q.canonicalize();
      return Rat(q);
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
    return Rat(num, den);
  }

  const mpq_class& raw() const { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  double to_double() const { return q_.get_d(); }

  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.q_)); }
  friend Rat operator+(const Rat& a) { return a; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.q_ >= b.q_; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  mpq_class q_;
};

inline Rat abs(const Rat& a) { return a.sign() < 0 ? -a : a; }
inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

inline Rat pow_int(const Rat& a, long e) {
  if (e < 0) return Rat(1) / pow_int(a, -e);
  Rat r(1), base = a;
  for (; e; e >>= 1, base *= base)
    if (e & 1) r *= base;
  return r;
}

/// Exact d-th root if |q|^(1/d) is rational; returns false otherwise.
/// For even d, q must be nonnegative.
inline bool exact_root(const Rat& q, unsigned d, Rat* out) {
  if (d == 0) throw std::domain_error("exact_root: d = 0");
  if (q.sign() < 0 && d % 2 == 0) return false;
  mpz_class n = q.num(), m = q.den(), rn, rm;
  bool negate = n < 0;
  if (negate) n = -n;
  int okn = mpz_root(rn.get_mpz_t(), n.get_mpz_t(), d);
  int okm = mpz_root(rm.get_mpz_t(), m.get_mpz_t(), d);
  if (!okn || !okm) return false;
  if (negate) rn = -rn;
  *out = Rat(rn, rm);
  return true;
}

}  // namespace cantor

namespace Eigen {
template <>
struct NumTraits<cantor::Rat> {
  using Real = cantor::Rat;
  using NonInteger = cantor::Rat;
  using Nested = cantor::Rat;
  using Literal = int;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 40,
    MulCost = 40,
  };
  static inline Real epsilon() { return cantor::Rat(0); }
  static inline Real dummy_precision() { return cantor::Rat(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
