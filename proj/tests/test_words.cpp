#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cantor/words.hpp"

using namespace cantor;

TEST_CASE("symbolic type construction and mixing") {
  auto full = SymbolicType::full_shift(3);
  CHECK(full.full());
  CHECK(full.admissible(0, 2));
  // a reducible graph is rejected
  CHECK_THROWS(SymbolicType::subshift(2, {{0, 0}, {0, 1}, {1, 1}}));
  // a periodic (non-mixing) graph is rejected even though it is irreducible
  CHECK_THROWS(SymbolicType::subshift(2, {{0, 1}, {1, 0}}));
  // ... but raw pair queries on it remain possible
  auto flip = SymbolicType::subshift_unvalidated(2, {{0, 1}, {1, 0}});
  CHECK(is_admissible(Word{{0, 1, 0}}, flip));
  CHECK_FALSE(is_admissible(Word{{0, 0}}, flip));
}

TEST_CASE("word admissibility") {
  auto full = SymbolicType::full_shift(2);
  CHECK(is_admissible(Word{{0, 1, 0, 1, 1}}, full));
  auto t = SymbolicType::subshift(3, {{0, 1}, {1, 0}, {1, 2}, {2, 0}, {0, 0}});
  CHECK(is_admissible(Word{{0, 1, 0}}, t));
  CHECK_FALSE(is_admissible(Word{{1, 1}}, t));
  CHECK_THROWS(is_admissible(Word{{0, 9}}, t));
}

TEST_CASE("concat drops the duplicated anchor") {
  LeftWord theta{{0}, {}};
  auto out = concat(theta, Word{{0, 1}});
  CHECK(out.letters == std::vector<int>{0, 1});
  // length-0 extension leaves theta unchanged
  auto same = concat(theta, Word{{0}});
  CHECK(same.letters == theta.letters);
  CHECK_THROWS(concat(theta, Word{{1, 0}}));
}

TEST_CASE("theta metric: examples and truncation convention") {
  LeftWord t1{{0, 1}, {}}, t2{{0, 0}, {}};
  CHECK(theta_metric(t1, t2, Rat(1, 7)) == Rat(1));  // disagree at k=0
  LeftWord u1{{1, 0, 0}, {}}, u2{{0, 0, 0}, {}};     // agree at k=0,1, differ at k=2
  CHECK(theta_metric(u1, u2, Rat(1, 7)) == Rat(1, 49));
  LeftWord v1{{1, 0, 1, 1, 0}, {}}, v2{{1, 0, 1, 1, 0}, {}};
  CHECK(theta_metric(v1, v2, Rat(1, 2)) == Rat(1, 32));  // upper bound a^5
}

TEST_CASE("theta metric: symmetry and ultrametric inequality") {
  std::mt19937 rng(3);
  auto rnd = [&](int n) {
    LeftWord w;
    for (int i = 0; i < n; ++i) w.letters.push_back(static_cast<int>(rng() % 2));
    return w;
  };
  for (int t = 0; t < 200; ++t) {
    auto a = rnd(6), b = rnd(6), c = rnd(6);
    Rat q(1, 3);
    auto dab = theta_metric(a, b, q), dba = theta_metric(b, a, q);
    CHECK(dab == dba);
    auto dac = theta_metric(a, c, q), dbc = theta_metric(b, c, q);
    CHECK(dac <= max(dab, dbc));
  }
}

TEST_CASE("periodic tails answer beyond the truncation") {
  LeftWord w{{2}, {0, 1}};  // ... 0 1 0 1 2
  CHECK(w.at(0) == 2);
  CHECK(w.at(1) == 1);
  CHECK(w.at(2) == 0);
  CHECK(w.at(3) == 1);
  auto tr = w.truncation(5);
  CHECK(tr == std::vector<int>{0, 1, 0, 1, 2});
  auto t = SymbolicType::subshift(3, {{0, 1}, {1, 0}, {1, 2}, {2, 0}, {0, 0}});
  CHECK(is_admissible(w, t));
  LeftWord bad{{2}, {1, 0}};  // tail block 1,0 then 0->... 0 precedes 2? 0->2 not admissible
  CHECK_FALSE(is_admissible(bad, t));
}

TEST_CASE("enumerate counts match adjacency powers up to n = 8") {
  auto t = SymbolicType::subshift(3, {{0, 1}, {1, 0}, {1, 2}, {2, 0}, {0, 0}});
  for (int n = 1; n <= 8; ++n) {
    auto words = enumerate_words(t, n);
    CHECK(static_cast<long long>(words.size()) == count_words(t, n));
    for (const auto& w : words) CHECK(is_admissible(w, t));
  }
  auto full = SymbolicType::full_shift(2);
  CHECK(count_words(full, 8) == 256);
}
