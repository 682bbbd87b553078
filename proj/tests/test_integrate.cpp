#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "actis/integrate.hpp"

using namespace actis;

namespace {
const SystemParams kSys1{1.0, 1.0, 1};
const SystemParams kSys2{1.0, 1.0, 2};
}  // namespace

TEST_CASE("harmonic orbit closes after one period", "[integrate]") {
  const auto pot = harmonic_potential_1d(1.0, 1.0);
  const auto path = integrate_hamiltonian<1>(kSys1, pot, {{1.0}, {0.0}}, 2.0 * M_PI,
                                             1e-3, Scheme::yoshida4, 1000);
  const auto& last = path.states.back();
  CHECK(std::abs(last.q[0] - 1.0) < 1e-6);
  CHECK(std::abs(last.p[0] - 0.0) < 1e-6);
}

TEST_CASE("free motion is exact up to rounding", "[integrate]") {
  const PolynomialPotential<1> zero;
  const auto path =
      integrate_hamiltonian<1>(kSys1, zero, {{0.0}, {1.0}}, 3.0, 1e-3, Scheme::yoshida4, 100);
  CHECK(path.states.back().q[0] == Catch::Approx(3.0).epsilon(1e-12));
  CHECK(path.states.back().p[0] == 1.0);
}

TEST_CASE("energy drift stays below 1e-7 over t=1e3 for the 2-D quartic at E=1",
          "[integrate]") {
  const auto pot = coupled_quartic_2d(1.0, 1.0, 1.0);
  PhaseState<2> s{{0.8, 0.0}, {0.6, 0.0}};
  const double e_target = 1.0;
  const double v = pot.value(s.q);
  s.p[1] = std::sqrt(2.0 * (e_target - v) - s.p[0] * s.p[0]);
  const double e0 = total_energy(kSys2, pot, s);
  REQUIRE(e0 == Catch::Approx(1.0));

  SymplecticStepper<2> stepper(pot, 1.0, Scheme::yoshida4);
  const double dt = 1e-3;
  double max_drift = 0.0;
  for (long n = 0; n < 1000000; ++n) {
    stepper.step(s, dt);
    if (n % 1000 == 999)
      max_drift = std::max(max_drift, std::abs(total_energy(kSys2, pot, s) - e0));
  }
  CHECK(max_drift / std::abs(e0) < 1e-7);
}

TEST_CASE("step-halving cuts the energy error like an order-4 scheme", "[integrate]") {
  const auto pot = coupled_quartic_2d(1.0, 1.0, 0.1);
  PhaseState<2> s0{{2.0, 1.0}, {1.5, -0.5}};  // E ~ 10 region
  const double e0 = total_energy(kSys2, pot, s0);

  auto worst_drift = [&](double dt) {
    PhaseState<2> s = s0;
    SymplecticStepper<2> stepper(pot, 1.0, Scheme::yoshida4);
    double worst = 0.0;
    const long n = std::lround(20.0 / dt);
    for (long i = 0; i < n; ++i) {
      stepper.step(s, dt);
      worst = std::max(worst, std::abs(total_energy(kSys2, pot, s) - e0));
    }
    return worst;
  };
  const double coarse = worst_drift(4e-3);
  const double fine = worst_drift(2e-3);
  CHECK(coarse / fine > 8.0);   // order >= 3 observed
  CHECK(coarse / fine < 40.0);  // and not accidentally exact
}

TEST_CASE("blow-up is reported with the last valid time", "[integrate]") {
  const auto pot = quartic_potential_1d(1.0, 1.0, 1e8);
  try {
    integrate_hamiltonian<1>(kSys1, pot, {{10.0}, {0.0}}, 10.0, 0.5);
    FAIL("expected blow-up");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::blow_up);
    CHECK(std::string(e.what()).find("last valid time") != std::string::npos);
  }
}

TEST_CASE("verlet2 is symplectic too but less accurate", "[integrate]") {
  const auto pot = harmonic_potential_1d(1.0, 1.0);
  PhaseState<1> s{{1.0}, {0.0}};
  SymplecticStepper<1> stepper(pot, 1.0, Scheme::verlet2);
  const double dt = 1e-2;
  double worst = 0.0;
  for (long i = 0; i < 10000; ++i) {
    stepper.step(s, dt);
    worst = std::max(worst, std::abs(total_energy(kSys1, pot, s) - 0.5));
  }
  CHECK(worst < 1e-4);  // bounded oscillation, no secular growth
  CHECK(worst > 1e-8);  // visibly order 2
}
