#include "rankone/random.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using rankone::Rng;

TEST_SUITE("random") {

TEST_CASE("same seed, same draws") {
  Rng a(12345), b(12345);
  for (int k = 0; k < 1000; ++k) {
    REQUIRE(a.uniform() == b.uniform());
    REQUIRE(a.normal() == b.normal());
  }
  Rng s(7, 3), t(7, 3);
  for (int k = 0; k < 100; ++k) REQUIRE(s.complex_normal() == t.complex_normal());
}

TEST_CASE("streams differ") {
  Rng a(7, 0), b(7, 1), c(8, 0);
  const double x = a.uniform(), y = b.uniform(), z = c.uniform();
  CHECK(x != y);
  CHECK(x != z);
}

TEST_CASE("ranges") {
  Rng rng(1);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double v = rng.uniform(-2.0, 3.0);
    REQUIRE(v >= -2.0);
    REQUIRE(v < 3.0);
    const long i = rng.uniform_int(-3, 4);
    REQUIRE(i >= -3);
    REQUIRE(i <= 4);
    REQUIRE(std::abs(rng.in_disc(0.9)) <= 0.9);
    REQUIRE(std::abs(std::abs(rng.on_circle()) - 1.0) <= 1e-15);
  }
}

TEST_CASE("moments are roughly right") {
  Rng rng(2024);
  const int n = 200000;
  double sum = 0, sq = 0, csq = 0;
  for (int k = 0; k < n; ++k) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
    csq += std::norm(rng.complex_normal());
  }
  // five standard errors
  CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(sq / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(csq / n - 1.0) < 5.0 / std::sqrt(n));
}

TEST_CASE("in_disc fills the disc uniformly") {
  Rng rng(99);
  const int n = 100000;
  int inner = 0;
  for (int k = 0; k < n; ++k) inner += std::abs(rng.in_disc(1.0)) < 0.5 ? 1 : 0;
  // area fraction 1/4
  CHECK(std::abs(inner / double(n) - 0.25) < 5.0 * std::sqrt(0.25 * 0.75 / n));
}

}
