#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cantor/scalar.hpp"

namespace cantor {

/// Alphabet {0..m-1} with a set of admissible transitions. Construction
/// verifies topological mixing: some power of the adjacency matrix is
/// strictly positive (Wielandt's bound (m-1)^2 + 1 caps the search).
class SymbolicType {
 public:
  static SymbolicType full_shift(int m) {
    SymbolicType t;
    t.m_ = m;
    t.adj_ = Eigen::MatrixXi::Ones(m, m);
    t.check_mixing();
    return t;
  }

  static SymbolicType subshift(int m, const std::vector<std::pair<int, int>>& pairs) {
    SymbolicType t = subshift_unvalidated(m, pairs);
    t.check_mixing();
    return t;
  }

  /// Skips the mixing check: for raw pair-set queries on graphs that are not
  /// valid Cantor-set types (e.g. purely periodic ones).
  static SymbolicType subshift_unvalidated(int m, const std::vector<std::pair<int, int>>& pairs) {
    SymbolicType t;
    t.m_ = m;
    t.adj_ = Eigen::MatrixXi::Zero(m, m);
    for (auto [a, b] : pairs) {
      if (a < 0 || a >= m || b < 0 || b >= m)
        throw std::invalid_argument("SymbolicType: letter out of range");
      t.adj_(a, b) = 1;
    }
    return t;
  }

  int alphabet_size() const { return m_; }
  bool full() const { return adj_.minCoeff() == 1; }
  bool admissible(int a, int b) const { return adj_(a, b) != 0; }
  const Eigen::MatrixXi& adjacency() const { return adj_; }

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < m_; ++a)
      for (int b = 0; b < m_; ++b)
        if (adj_(a, b)) out.emplace_back(a, b);
    return out;
  }

 private:
  void check_mixing() const {
    if (m_ < 1) throw std::invalid_argument("SymbolicType: empty alphabet");
    Eigen::MatrixXi reach = Eigen::MatrixXi::Identity(m_, m_);
    int cap = (m_ - 1) * (m_ - 1) + 1;
    for (int k = 1; k <= cap; ++k) {
      reach = (reach * adj_).unaryExpr([](int x) { return x > 0 ? 1 : 0; }).eval();
      if (reach.minCoeff() > 0) return;
    }
    throw std::domain_error("SymbolicType: transition graph is not topologically mixing");
  }

  int m_ = 0;
  Eigen::MatrixXi adj_;
};

/// Finite forward word (a_0, ..., a_n).
struct Word {
  std::vector<int> letters;

  int length() const { return static_cast<int>(letters.size()) - 1; }  // paper's length
  bool empty() const { return letters.empty(); }
  int front() const { return letters.front(); }
  int back() const { return letters.back(); }
};

/// Truncated left-infinite word (..., θ_{-1}, θ_0): most recent letter last.
/// Beyond the stored truncation an optional eventually-periodic tail
/// descriptor supplies letters; without one the word is a plain truncation.
struct LeftWord {
  std::vector<int> letters;  // θ_{-(k-1)}, ..., θ_{-1}, θ_0
  std::vector<int> period;   // repeated block extending to the left, may be empty

  int last() const { return letters.back(); }
  int known_length() const { return static_cast<int>(letters.size()); }
  bool has_tail() const { return !period.empty(); }

  /// θ_{-k}; for k beyond the truncation the periodic tail answers, else -1.
  int at(int k) const {
    int n = known_length();
    if (k < n) return letters[n - 1 - k];
    if (period.empty()) return -1;
    int p = static_cast<int>(period.size());
    int idx = (k - n) % p;
    return period[p - 1 - idx];
  }

  /// The truncation θ_{-(n-1)}..θ_0 with letters drawn from the tail as needed.
  std::vector<int> truncation(int n) const {
    std::vector<int> out(n);
    for (int k = 0; k < n; ++k) out[n - 1 - k] = at(k);
    return out;
  }
};

inline bool is_admissible(const Word& w, const SymbolicType& t) {
  for (int a : w.letters)
    if (a < 0 || a >= t.alphabet_size())
      throw std::invalid_argument("is_admissible: letter out of range");
  for (size_t i = 0; i + 1 < w.letters.size(); ++i)
    if (!t.admissible(w.letters[i], w.letters[i + 1])) return false;
  return true;
}

inline bool is_admissible(const LeftWord& w, const SymbolicType& t) {
  for (size_t i = 0; i + 1 < w.letters.size(); ++i)
    if (!t.admissible(w.letters[i], w.letters[i + 1])) return false;
  if (!w.period.empty()) {
    for (size_t i = 0; i + 1 < w.period.size(); ++i)
      if (!t.admissible(w.period[i], w.period[i + 1])) return false;
    if (!t.admissible(w.period.back(), w.period.front())) return false;
    if (!w.letters.empty() && !t.admissible(w.period.back(), w.letters.front())) return false;
  }
  return true;
}

/// θā: the paper requires θ_0 = a_0 and the duplicate anchor letter is
/// dropped, so the result ends with a_n.
inline LeftWord concat(const LeftWord& theta, const Word& a) {
  if (a.empty()) throw std::invalid_argument("concat: empty forward word");
  if (theta.letters.empty() || theta.last() != a.front())
    throw std::domain_error("concat: anchor letter mismatch (θ_0 != a_0)");
  LeftWord out = theta;
  out.letters.insert(out.letters.end(), a.letters.begin() + 1, a.letters.end());
  return out;
}

/// d(θ, θ') = a^k with k ≥ 0 the first disagreement depth. Equal truncations
/// return the upper bound a^(min known length).
template <class S>
S theta_metric(const LeftWord& t1, const LeftWord& t2, const S& a) {
  int n1 = t1.has_tail() ? INT_MAX : t1.known_length();
  int n2 = t2.has_tail() ? INT_MAX : t2.known_length();
  int depth = std::min(n1, n2);
  S val = from_rat<S>(Rat(1));
  for (int k = 0; k < depth; ++k) {
    if (k > 4096) break;  // periodic tails: cap the scan, metric is below a^4096
    if (t1.at(k) != t2.at(k)) return val;
    val = val * a;
  }
  return val;
}

inline std::vector<Word> enumerate_words(const SymbolicType& t, int n_letters) {
  std::vector<Word> out;
  if (n_letters <= 0) return out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == n_letters) {
      out.push_back(Word{cur});
      return;
    }
    for (int a = 0; a < t.alphabet_size(); ++a) {
      if (!cur.empty() && !t.admissible(cur.back(), a)) continue;
      cur.push_back(a);
      self(self, depth + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline long long count_words(const SymbolicType& t, int n_letters) {
  if (n_letters <= 0) return 0;
  const int m = t.alphabet_size();
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> p =
      t.adjacency().cast<long long>();
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> acc =
      Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Identity(m, m);
  for (int k = 0; k < n_letters - 1; ++k) acc = (acc * p).eval();
  return acc.sum();
}

}  // namespace cantor
