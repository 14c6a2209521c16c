#include <doctest.h>

#include "fabric/error.hpp"
#include "fabric/logistics.hpp"

using namespace fabric;

namespace {

CharacterizationTable ap_table() {
  CharacterizationTable t;
  t.set("SO2", ImpactCategory::AP, 1.0);
  t.set("NOX", ImpactCategory::AP, 0.7);
  return t;
}

TransportFactorTable factors() {
  TransportFactorTable f;
  f.set(TransportMode::Truck, 2020, "NOX", 4e-4);
  f.set(TransportMode::Ship, 2016, "SO2", 5e-4);
  f.set(TransportMode::Ship, 2020, "SO2", 1e-4);
  return f;
}

EolProfile mix(double r, double i, double l) {
  EolProfile p;
  p.id = "mix";
  p.recycle = r;
  p.incinerate = i;
  p.landfill = l;
  p.ash_yield = 0.2;
  p.f_recycle = {1, 0, 0};
  p.f_incinerate = {2, 0, 0};
  p.f_ash = {0.5, 0, 0};
  p.f_landfill = {0.1, 0, 0};
  return p;
}

}  // namespace

TEST_CASE("tonne-km on the default route") {
  const auto legs = default_transport_legs();
  const auto tkm = leg_tonne_km(30.0, legs);
  REQUIRE(tkm.size() == 2);
  CHECK(tkm[0] == doctest::Approx(6.0));
  CHECK(tkm[1] == doctest::Approx(420.0));
  CHECK(transport_midpoints(0.0, legs, factors(), 2020, ap_table()).is_zero());
}

TEST_CASE("transport factors are taken at the resolved year") {
  const auto legs = default_transport_legs();
  const auto m = transport_midpoints(1000.0, legs, factors(), 2021, ap_table());
  CHECK(m.ap() == doctest::Approx(200 * 4e-4 * 0.7 + 14000 * 1e-4).epsilon(1e-12));
  const auto old = transport_midpoints(1000.0, legs, factors(), 2017, ap_table());
  CHECK(old.ap() == doctest::Approx(200 * 4e-4 * 0.7 + 14000 * 5e-4).epsilon(1e-12));
  CHECK_THROWS_AS(transport_midpoints(1.0, legs, factors(), 2010, ap_table()), ResolutionError);
  const std::vector<TransportLeg> air{{TransportMode::Air, 100}};
  CHECK_THROWS_AS(transport_midpoints(1.0, air, factors(), 2020, ap_table()), ResolutionError);
}

TEST_CASE("EoL pathway mixture") {
  auto single = mix(1, 0, 0);
  CHECK(eol_midpoints(3.0, single) == single.f_recycle.scaled(3.0));
  const auto m = eol_midpoints(30.0, mix(0.8, 0.15, 0.05));
  CHECK(m.ap() == doctest::Approx(33.6).epsilon(1e-12));
  CHECK(eol_midpoints(0.0, mix(0.8, 0.15, 0.05)).is_zero());
}

TEST_CASE("EoL mixture must sum to one") {
  try {
    eol_midpoints(1.0, mix(0.5, 0.3, 0.1));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("0.9") != std::string::npos);
    CHECK(msg.find("mix") != std::string::npos);
  }
  CHECK_THROWS_AS(mix(1.2, -0.2, 0).validate(), ValidationError);
}

TEST_CASE("mass proxy") {
  const MassProxy proxy("phone", {0.002, 1e-5, 3e-4}, 0.212);
  CHECK(eol_midpoints_proxy(0.212, proxy) == proxy.reference());
  CHECK(eol_midpoints_proxy(0.0, proxy).is_zero());
  const auto twice = eol_midpoints_proxy(0.424, proxy);
  CHECK(twice.ap() == doctest::Approx(0.004).epsilon(1e-12));
  CHECK(twice.fetp() == doctest::Approx(6e-4).epsilon(1e-12));
  CHECK_THROWS_AS(MassProxy("bad", {1, 1, 1}, 0.0), ValidationError);
}
