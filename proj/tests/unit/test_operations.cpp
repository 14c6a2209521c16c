#include <doctest.h>

#include "fabric/error.hpp"
#include "fabric/operations.hpp"

using namespace fabric;

namespace {

CharacterizationTable ap_table() {
  CharacterizationTable t;
  t.set("SO2", ImpactCategory::AP, 1.0);
  t.set("NOX", ImpactCategory::AP, 0.7);
  t.set("NOX", ImpactCategory::EP, 0.13);
  return t;
}

RegionGrid grid(double so2_g, double nox_g, int year = 2021) {
  return RegionGrid{"R", year, {{"SO2", so2_g / 1000.0}, {"NOX", nox_g / 1000.0}, {"NH3", 0.0}}, 0.4};
}

}  // namespace

TEST_CASE("use midpoints from grid factors") {
  const auto t = ap_table();
  CHECK(use_midpoints(0.0, grid(0.4, 0.3), t).is_zero());
  CHECK(use_midpoints(100.0, grid(0.4, 0.3), t).ap() == doctest::Approx(0.061));
  const auto a = use_midpoints(100.0, grid(0.4, 0.3), t);
  const auto b = use_midpoints(100.0, grid(0.8, 0.6), t);
  CHECK(b.ap() == doctest::Approx(2 * a.ap()));
  CHECK(b.ep() == doctest::Approx(2 * a.ep()));
}

TEST_CASE("duty model energy") {
  CHECK(EnergyDraw::duty_model(700, 0, 1.0, 1.0).energy_kwh == doctest::Approx(0.7));
  CHECK(EnergyDraw::duty_model(700, 0, 1.0, 0.0).energy_kwh == 0.0);
  CHECK(EnergyDraw::duty_model(400, 120, 0.5, 10.0).energy_kwh == doctest::Approx(2.6));
  CHECK(EnergyDraw::duty_model(400, 120, 0.5, 10.0, 1.5).energy_kwh == doctest::Approx(3.9));
  CHECK_THROWS_AS(EnergyDraw::duty_model(400, 0, 1.2, 1.0), ValidationError);
  CHECK_THROWS_AS(EnergyDraw::duty_model(400, 0, 0.5, 1.0, 0.9), ValidationError);
  CHECK_THROWS_AS(EnergyDraw::duty_model(400, 500, 0.5, 1.0), ValidationError);
  CHECK_THROWS_AS(EnergyDraw::measured(-1.0), ValidationError);
}

TEST_CASE("grid catalog resolution") {
  GridCatalog c;
  c.add(grid(0.4, 0.3, 2018));
  c.add(grid(0.2, 0.2, 2021));
  CHECK_THROWS_AS(c.add(grid(0.1, 0.1, 2021)), ValidationError);
  Notes notes;
  CHECK(c.resolve("R", 2019, 3, &notes).year == 2018);
  CHECK(notes.size() == 1);
  CHECK(c.resolve("R", 2024, 3).year == 2021);
  CHECK_THROWS_AS(c.resolve("R", 2030, 3), ResolutionError);
  try {
    c.resolve("NOPE", 2020);
    FAIL("expected ResolutionError");
  } catch (const ResolutionError& e) {
    REQUIRE(e.candidates().size() == 1);
    CHECK(e.candidates()[0] == "R");
  }
}

TEST_CASE("endpoint intensity is the per-kWh endpoint") {
  const EndpointTable phi("p", 2e-7, 1e-7, 1e-9);
  const auto g = grid(0.4, 0.3);
  const double per_kwh = endpoint_intensity(g, ap_table(), phi);
  const auto e = to_endpoint(use_midpoints(1000.0, g, ap_table()), phi);
  CHECK(e.value == doctest::Approx(1000.0 * per_kwh).epsilon(1e-12));
}

TEST_CASE("device OBI uses the affine power model") {
  DeviceSpec s;
  s.id = "gpu";
  s.tdp_w = 700.0;
  s.idle_power_w = 0.0;
  const EndpointTable phi("p", 1.0, 1.0, 1.0);
  const auto obi = device_obi(s, 1.0, 1.0, grid(1000.0, 0.0), ap_table(), phi);
  CHECK(obi.value == doctest::Approx(0.7));
}
