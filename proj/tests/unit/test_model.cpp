#include "doctest.h"

#include <cmath>

#include "combtangle/errors.hpp"
#include "combtangle/model.hpp"

using namespace combtangle;

TEST_CASE("unit conversions are inverse") {
  CHECK(to_MHz(from_MHz(12.5)) == doctest::Approx(12.5).epsilon(1e-15));
  CHECK(to_GHz(from_GHz(80.0)) == doctest::Approx(80.0).epsilon(1e-15));
  CHECK(constants::G0 == doctest::Approx(from_MHz(15.0)).epsilon(1e-15));
}

TEST_CASE("thermal occupation, mpmath reference values") {
  CHECK(thermal_occupation(from_GHz(8.0), 0.02) ==
        doctest::Approx(4.60109150868820e-9).epsilon(1e-12));
  CHECK(thermal_occupation(from_GHz(72.0), 2.5) ==
        doctest::Approx(0.335167329939017).epsilon(1e-12));
  CHECK(thermal_occupation(from_GHz(8.0), 2.5) ==
        doctest::Approx(6.02423643359003).epsilon(1e-12));
  CHECK(thermal_occupation(from_GHz(88.0), 0.02) ==
        doctest::Approx(1.956e-92).epsilon(1e-3));
  CHECK(thermal_occupation(from_GHz(8.0), 0.0) == 0.0);
  CHECK_THROWS_AS(thermal_occupation(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(thermal_occupation(from_GHz(8.0), -1.0), DomainError);
}

TEST_CASE("high-temperature limit of the Bose factor") {
  const double w = from_GHz(1.0), T = 300.0;
  const double classical = constants::k_B * T / (constants::hbar * w);
  CHECK(thermal_occupation(w, T) == doctest::Approx(classical - 0.5).epsilon(1e-6));
}

TEST_CASE("baseline defaults") {
  const auto p = PhysicalParams::baseline();
  CHECK(to_GHz(p.omega_p()) == doctest::Approx(88.0));
  CHECK(to_GHz(p.omega_q()) == doctest::Approx(72.0));
  CHECK(std::abs(p.drive()) / p.kappa_k == doctest::Approx(1.5e4));
  CHECK(p.g_p * 1.5e4 == doctest::Approx(constants::G0));
  const Detunings d = derived_detunings(p);
  CHECK(d.k == 0.0);
  CHECK(d.p == doctest::Approx(p.omega_r));
  CHECK(d.q == doctest::Approx(-p.omega_r));
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("parameter validation") {
  auto p = PhysicalParams::baseline();
  SUBCASE("negative damping") { p.kappa_p = -1.0; }
  SUBCASE("zero damping") { p.kappa_r = 0.0; }
  SUBCASE("difference tooth below zero") { p.omega_r = p.omega_k + 1.0; }
  SUBCASE("negative temperature") { p.temperature = -0.1; }
  SUBCASE("non-finite coupling") { p.g_q = std::nan(""); }
  CHECK_THROWS_AS(p.validate(), SpecError);
}

TEST_CASE("effective couplings use the pump modulus") {
  const auto p = PhysicalParams::baseline();
  const auto eff = effective_couplings(p, std::polar(2.0e4, 1.3));
  CHECK(eff.G_p == doctest::Approx(p.g_p * 2.0e4));
  CHECK(eff.G_q == doctest::Approx(p.g_q * 2.0e4));
}

TEST_CASE("bath occupations follow each mode frequency") {
  auto p = PhysicalParams::baseline();
  p.temperature = 2.5;
  const auto n = bath_occupations(p);
  CHECK(n.r == doctest::Approx(thermal_occupation(p.omega_r, 2.5)));
  CHECK(n.q == doctest::Approx(0.335167329939017).epsilon(1e-12));
  CHECK(n[Mode::p] < n[Mode::q]);
}

TEST_CASE("mode names round-trip") {
  for (Mode m : {Mode::k, Mode::r, Mode::p, Mode::q}) CHECK(parse_mode(mode_name(m)) == m);
  CHECK_FALSE(parse_mode("x").has_value());
}
