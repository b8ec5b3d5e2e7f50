#include <doctest.h>

#include <cmath>

#include "vcs/rng.hpp"

using vcs::Rng;

TEST_CASE("same seed replays the exact stream") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(124);
  CHECK(Rng(123).next_u64() != c.next_u64());
}

TEST_CASE("uniform lies in [0,1) and has the right mean") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("normal moments") {
  Rng rng(11);
  const int n = 400000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s1 / n) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(s2 / n - 1.0) < 0.01);
  CHECK(std::abs(s4 / n - 3.0) < 0.08);
}

TEST_CASE("poisson and gamma means") {
  Rng rng(5);
  const int n = 100000;
  double sp = 0.0, sg = 0.0;
  for (int i = 0; i < n; ++i) {
    sp += static_cast<double>(rng.poisson(3.5));
    sg += rng.gamma(2.5);
  }
  CHECK(std::abs(sp / n - 3.5) < 0.05);
  CHECK(std::abs(sg / n - 2.5) < 0.05);
}

TEST_CASE("hash_combine is order sensitive and stable") {
  CHECK(vcs::hash_combine(1, 2) != vcs::hash_combine(2, 1));
  CHECK(vcs::hash_combine(42, 7) == vcs::hash_combine(42, 7));
}
