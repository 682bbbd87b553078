#include <catch2/catch_amalgamated.hpp>

#include "actis/rng.hpp"

using namespace actis;

TEST_CASE("counter rng is a pure function of its keys", "[rng]") {
  CHECK(rng::uniform01(42, 1, 2, 3) == rng::uniform01(42, 1, 2, 3));
  CHECK(rng::uniform01(42, 1, 2, 3) != rng::uniform01(43, 1, 2, 3));
  CHECK(rng::uniform01(42, 1, 2, 3) != rng::uniform01(42, 2, 2, 3));
}

TEST_CASE("uniform draws stay in range and look uniform", "[rng]") {
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng::uniform(-0.5, 0.5, 7, i);
    REQUIRE(u >= -0.5);
    REQUIRE(u < 0.5);
    sum += u;
  }
  CHECK(std::abs(sum / 20000.0) < 0.01);
}

TEST_CASE("normal pairs have unit variance", "[rng]") {
  double s1 = 0.0, s2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = rng::normal_pair(11, i);
    s1 += a + b;
    s2 += a * a + b * b;
  }
  CHECK(std::abs(s1 / (2 * n)) < 0.02);
  CHECK(s2 / (2 * n) == Catch::Approx(1.0).margin(0.03));
}
