#include <doctest.h>

#include <cmath>
#include <vector>

#include "augmi/rng.hpp"

using augmi::RngStream;

TEST_CASE("identical (seed, stream) reproduces the sequence") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams differ") {
  RngStream a(42, 0), b(42, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
  CHECK(same == 0);
}

TEST_CASE("uniform01 stays strictly inside (0,1) and is roughly uniform") {
  RngStream rng(1, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("normal moments") {
  RngStream rng(3, 5);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.02);
}

TEST_CASE("fork is independent of consumption and repeatable") {
  RngStream a(9, 4);
  RngStream f1 = a.fork(2);
  a.next_u64();
  a.next_u64();
  RngStream f2 = a.fork(2);
  for (int i = 0; i < 100; ++i) CHECK(f1.next_u64() == f2.next_u64());

  RngStream g = a.fork(3);
  CHECK(g.next_u64() != a.fork(2).next_u64());
}

TEST_CASE("uniform_index bounds and coverage") {
  RngStream rng(11, 0);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) ++counts[rng.uniform_index(7)];
  for (int c : counts) CHECK(c > 700);
  CHECK_THROWS_AS(rng.uniform_index(0), std::invalid_argument);
}

TEST_CASE("categorical matches weights") {
  RngStream rng(13, 1);
  const std::vector<double> w{1.0, 3.0, 6.0};
  std::vector<int> counts(3, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++counts[rng.categorical(w)];
  CHECK(std::abs(counts[0] / double(n) - 0.1) < 0.01);
  CHECK(std::abs(counts[1] / double(n) - 0.3) < 0.015);
  CHECK(std::abs(counts[2] / double(n) - 0.6) < 0.015);
}

TEST_CASE("chi_square mean is df") {
  RngStream rng(17, 2);
  for (double df : {1.5, 4.0, 37.0}) {
    double sum = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) sum += rng.chi_square(df);
    CHECK(sum / n == doctest::Approx(df).epsilon(0.03));
  }
}
