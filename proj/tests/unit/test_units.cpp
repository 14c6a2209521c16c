#include <doctest.h>

#include "fabric/error.hpp"
#include "fabric/units.hpp"

using namespace fabric;
using units::Dimension;

TEST_CASE("unit conversion to canonical units") {
  CHECK(units::to_canonical(250.0, "g", Dimension::Mass) == doctest::Approx(0.25));
  CHECK(units::to_canonical(2.0, "MWh", Dimension::Energy) == doctest::Approx(2000.0));
  CHECK(units::to_canonical(1.5, "PB", Dimension::Capacity) == doctest::Approx(1.5e6));
  CHECK(units::to_canonical(0.4, "g/kWh", Dimension::MassPerEnergy) == doctest::Approx(4e-4));
  CHECK(units::to_canonical(35.0, "g/tkm", Dimension::MassPerTransport) == doctest::Approx(0.035));
  CHECK(units::to_canonical(50.0, "%", Dimension::Fraction) == doctest::Approx(0.5));
  CHECK(units::to_canonical(1.0, "yr", Dimension::Time) == doctest::Approx(8760.0));
  CHECK(units::to_canonical(1.0, "lb", Dimension::Mass) == doctest::Approx(0.45359237));
}

TEST_CASE("a unit from another dimension is rejected") {
  CHECK_THROWS_AS(units::to_canonical(1.0, "kWh", Dimension::Mass), ValidationError);
  CHECK_THROWS_AS(units::to_canonical(1.0, "g/kWh", Dimension::MassPerTransport), ValidationError);
  CHECK_THROWS_AS(units::to_canonical(1.0, "furlong", Dimension::Length), ValidationError);
}

TEST_CASE("canonical labels") {
  CHECK(units::canonical_label(Dimension::Mass) == "kg");
  CHECK(units::canonical_label(Dimension::MassPerTransport) == "kg/tkm");
  CHECK(units::canonical_label(Dimension::BitDensity) == "Gb/mm2");
}
