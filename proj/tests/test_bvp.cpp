#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "actis/action.hpp"
#include "actis/bvp.hpp"
#include "oracles.hpp"

using namespace actis;

namespace {
const SystemParams kSys1{1.0, 1.0, 1};
const SystemParams kSys2{1.0, 1.0, 2};
}  // namespace

TEST_CASE("harmonic quarter period: cos t solution has zero launch velocity", "[bvp]") {
  const auto pot = harmonic_potential_1d(1.0, 1.0);
  const auto traj = solve_trajectory_bvp<1>(kSys1, pot, {1.0}, {0.0}, M_PI / 2);
  CHECK(std::abs(traj.velocities.front()[0]) < 1e-8);
  CHECK(traj.residual < 1e-10);
  CHECK_FALSE(traj.caustic_warning);
}

TEST_CASE("free particle shoots straight", "[bvp]") {
  const PolynomialPotential<1> zero;
  const auto traj = solve_trajectory_bvp<1>(kSys1, zero, {0.0}, {2.0}, 1.0);
  CHECK(traj.velocities.front()[0] == Catch::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("2-D coupled quartic launch velocity matches the sweep oracle", "[bvp]") {
  const auto pot = coupled_quartic_2d(1.0, 1.0, 0.05);
  const auto traj = solve_trajectory_bvp<2>(kSys2, pot, {1.0, 0.0}, {0.0, 1.0}, 1.0);
  REQUIRE(traj.residual < 1e-10);
  const auto v_oracle =
      oracle::velocity_sweep<2>(pot, 1.0, {1.0, 0.0}, {0.0, 1.0}, 1.0, 4.0, 16, 1024);
  CHECK(traj.velocities.front()[0] == Catch::Approx(v_oracle[0]).margin(1e-6));
  CHECK(traj.velocities.front()[1] == Catch::Approx(v_oracle[1]).margin(1e-6));
}

TEST_CASE("endpoint samples honor the boundary conditions", "[bvp]") {
  const auto pot = quartic_potential_1d(1.0, 1.0, 0.1);
  const auto traj = solve_trajectory_bvp<1>(kSys1, pot, {-2.0}, {1.3}, 1.7);
  CHECK(traj.positions.front()[0] == -2.0);
  CHECK(std::abs(traj.positions.back()[0] - 1.3) <= traj.residual + 1e-15);
  REQUIRE(traj.times.size() == traj.positions.size());
  for (std::size_t i = 1; i < traj.times.size(); ++i)
    REQUIRE(traj.times[i] > traj.times[i - 1]);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == Catch::Approx(1.7));
}

TEST_CASE("homotopy rescues strongly anharmonic far endpoints", "[bvp]") {
  const auto pot = quartic_potential_1d(1.0, 1.0, 0.1);
  const auto traj = solve_trajectory_bvp<1>(kSys1, pot, {-6.0}, {6.0}, 1.0);
  CHECK(traj.residual < 1e-10);
  // stored samples describe a genuine orbit: velocities consistent with
  // centered differences of positions
  const double h = traj.times[1] - traj.times[0];
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.positions.size(); ++i) {
    const double fd = (traj.positions[i + 1][0] - traj.positions[i - 1][0]) / (2 * h);
    worst = std::max(worst, std::abs(fd - traj.velocities[i][0]));
  }
  CHECK(worst < 1e-2 * std::abs(traj.velocities.front()[0]));
}

TEST_CASE("harmonic oracle: bvp + action reproduces the closed form", "[bvp]") {
  const auto pot = harmonic_potential_1d(1.0, 1.0);
  for (const double T : {0.5, 1.0}) {
    for (double xa = -3.0; xa <= 3.0; xa += 1.5) {
      for (double xb = xa; xb <= 3.0; xb += 1.5) {
        const auto traj = solve_trajectory_bvp<1>(kSys1, pot, {xa}, {xb}, T);
        const double s = evaluate_action(kSys1, pot, traj).value;
        const double ref = harmonic_action_analytic<1>(kSys1, 1.0, {xa}, {xb}, T);
        const double scale = std::max(1e-6, std::abs(ref));
        INFO("xa=" << xa << " xb=" << xb << " T=" << T);
        CHECK(std::abs(s - ref) / scale < 1e-8);
      }
    }
  }
}

TEST_CASE("near-conjugate travel time raises the caustic flag", "[bvp]") {
  const auto pot = harmonic_potential_1d(1.0, 1.0);
  const auto traj = solve_trajectory_bvp<1>(kSys1, pot, {0.4}, {-0.39}, M_PI - 1e-3);
  CHECK(traj.caustic_warning);
  CHECK(traj.shooting_sensitivity > 1e3);
}

TEST_CASE("unreachable endpoint at the caustic fails with best residual", "[bvp]") {
  // At T = pi every harmonic trajectory lands at -q_in, so q_fi = 0.3 is
  // unreachable from q_in = 1 no matter the launch velocity.
  const auto pot = harmonic_potential_1d(1.0, 1.0);
  try {
    solve_trajectory_bvp<1>(kSys1, pot, {1.0}, {0.3}, M_PI);
    FAIL("expected bvp failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::bvp_failure);
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("invalid inputs are rejected", "[bvp]") {
  const auto pot = harmonic_potential_1d(1.0, 1.0);
  CHECK_THROWS_AS(solve_trajectory_bvp<1>(kSys1, pot, {0.0}, {1.0}, -1.0), Error);
  PolynomialPotential<1> inverted({{{4}, -1.0}});
  CHECK_THROWS_AS(solve_trajectory_bvp<1>(kSys1, inverted, {0.0}, {1.0}, 1.0), Error);
}
