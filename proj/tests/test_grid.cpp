#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "actis/grid.hpp"

using namespace actis;

TEST_CASE("regular 1-D grid enumerates the lattice", "[grid]") {
  const auto g = make_regular_grid<1>(2.0, 1.0);
  REQUIRE(g.nodes.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(g.nodes[i][0] == Catch::Approx(-2.0 + i));
  CHECK_FALSE(g.deformed);
}

TEST_CASE("regular 2-D grid has (2L/a+1)^2 nodes in row-major order", "[grid]") {
  const auto g = make_regular_grid<2>(2.0, 1.0);
  REQUIRE(g.nodes.size() == 25);
  CHECK(g.nodes[0][0] == Catch::Approx(-2.0));
  CHECK(g.nodes[0][1] == Catch::Approx(-2.0));
  CHECK(g.nodes[1][1] == Catch::Approx(-1.0));  // inner index is the second axis
  CHECK(g.nodes[5][0] == Catch::Approx(-1.0));
  CHECK(g.nodes[24][0] == Catch::Approx(2.0));
}

TEST_CASE("non-integral 2L/a is rejected", "[grid]") {
  try {
    make_regular_grid<1>(1.0, 0.3);
    FAIL("expected invalid grid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_grid);
  }
}

TEST_CASE("zero deformation is the identity", "[grid]") {
  const auto g = make_regular_grid<1>(3.0, 0.5);
  const auto d = deform_grid(g, 0.0, 99);
  REQUIRE(d.nodes.size() == g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    CHECK(d.nodes[i][0] == g.nodes[i][0]);
  CHECK_FALSE(d.deformed);
}

TEST_CASE("deformation is deterministic in the seed and bounded by delta", "[grid]") {
  const auto g = make_regular_grid<2>(2.0, 0.5);
  const double delta = 0.05;
  const auto a = deform_grid(g, delta, 42);
  const auto b = deform_grid(g, delta, 42);
  const auto c = deform_grid(g, delta, 43);
  bool any_differs = false;
  double max_disp = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (int d = 0; d < 2; ++d) {
      REQUIRE(a.nodes[i][d] == b.nodes[i][d]);
      if (a.nodes[i][d] != c.nodes[i][d]) any_differs = true;
      max_disp = std::max(max_disp, std::abs(a.nodes[i][d] - g.nodes[i][d]));
    }
  }
  CHECK(any_differs);
  CHECK(max_disp <= delta);
  CHECK(max_disp > 0.0);
  CHECK(a.deformed);
}

TEST_CASE("deformation at half the spacing is rejected", "[grid]") {
  const auto g = make_regular_grid<1>(2.0, 0.5);
  try {
    deform_grid(g, 0.25, 1);
    FAIL("expected overlap risk");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::overlap_risk);
  }
}

TEST_CASE("double deformation is rejected", "[grid]") {
  const auto g = make_regular_grid<1>(2.0, 0.5);
  const auto d = deform_grid(g, 0.05, 1);
  CHECK_THROWS_AS(deform_grid(d, 0.05, 2), Error);
}
