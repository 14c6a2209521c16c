#include "fabric/units.hpp"

#include <array>
#include <utility>

#include "fabric/error.hpp"

namespace fabric::units {
namespace {

struct UnitEntry {
  Dimension dim;
  std::string_view label;
  double scale;
};

constexpr double kPound = 0.45359237;

// Mass-per-X units use the numerator mass scale over the denominator scale.
constexpr std::array kUnits = {
    UnitEntry{Dimension::Mass, "kg", 1.0},
    UnitEntry{Dimension::Mass, "g", 1e-3},
    UnitEntry{Dimension::Mass, "mg", 1e-6},
    UnitEntry{Dimension::Mass, "t", 1e3},
    UnitEntry{Dimension::Mass, "lb", kPound},
    UnitEntry{Dimension::Energy, "kWh", 1.0},
    UnitEntry{Dimension::Energy, "Wh", 1e-3},
    UnitEntry{Dimension::Energy, "MWh", 1e3},
    UnitEntry{Dimension::Energy, "GWh", 1e6},
    UnitEntry{Dimension::Energy, "TWh", 1e9},
    UnitEntry{Dimension::Area, "mm2", 1.0},
    UnitEntry{Dimension::Area, "cm2", 1e2},
    UnitEntry{Dimension::Capacity, "GB", 1.0},
    UnitEntry{Dimension::Capacity, "TB", 1e3},
    UnitEntry{Dimension::Capacity, "PB", 1e6},
    UnitEntry{Dimension::Capacity, "MB", 1e-3},
    UnitEntry{Dimension::Time, "h", 1.0},
    UnitEntry{Dimension::Time, "yr", kHoursPerYear},
    UnitEntry{Dimension::Time, "s", 1.0 / 3600.0},
    UnitEntry{Dimension::Power, "W", 1.0},
    UnitEntry{Dimension::Power, "kW", 1e3},
    UnitEntry{Dimension::Power, "MW", 1e6},
    UnitEntry{Dimension::Length, "km", 1.0},
    UnitEntry{Dimension::Length, "mm", 1e-6},
    UnitEntry{Dimension::Length, "m", 1e-3},
    UnitEntry{Dimension::Fraction, "fraction", 1.0},
    UnitEntry{Dimension::Fraction, "%", 1e-2},
    UnitEntry{Dimension::MassPerEnergy, "kg/kWh", 1.0},
    UnitEntry{Dimension::MassPerEnergy, "g/kWh", 1e-3},
    UnitEntry{Dimension::MassPerEnergy, "kg/MWh", 1e-3},
    UnitEntry{Dimension::MassPerEnergy, "lb/MWh", kPound * 1e-3},
    UnitEntry{Dimension::MassPerTransport, "kg/tkm", 1.0},
    UnitEntry{Dimension::MassPerTransport, "g/tkm", 1e-3},
    UnitEntry{Dimension::MassPerMass, "kg/kg", 1.0},
    UnitEntry{Dimension::MassPerMass, "g/kg", 1e-3},
    UnitEntry{Dimension::BitDensity, "Gb/mm2", 1.0},
    UnitEntry{Dimension::Count, "count", 1.0},
    UnitEntry{Dimension::Count, "wafer/yr", 1.0},
    UnitEntry{Dimension::Rate, "1/yr", 1.0},
};

constexpr std::array<std::pair<Dimension, std::string_view>, 14> kCanonical = {{
    {Dimension::Mass, "kg"},
    {Dimension::Energy, "kWh"},
    {Dimension::Area, "mm2"},
    {Dimension::Capacity, "GB"},
    {Dimension::Time, "h"},
    {Dimension::Power, "W"},
    {Dimension::Length, "km"},
    {Dimension::Fraction, "fraction"},
    {Dimension::MassPerEnergy, "kg/kWh"},
    {Dimension::MassPerTransport, "kg/tkm"},
    {Dimension::MassPerMass, "kg/kg"},
    {Dimension::BitDensity, "Gb/mm2"},
    {Dimension::Count, "count"},
    {Dimension::Rate, "1/yr"},
}};

}  // namespace

double scale_to_canonical(std::string_view unit, Dimension dim) {
  for (const auto& entry : kUnits) {
    if (entry.dim == dim && entry.label == unit) return entry.scale;
  }
  throw ValidationError("unit '" + std::string(unit) + "' is not a valid " +
                        std::string(canonical_label(dim)) + "-compatible unit");
}

std::string_view canonical_label(Dimension dim) {
  for (const auto& [d, label] : kCanonical) {
    if (d == dim) return label;
  }
  return "?";
}

}  // namespace fabric::units
