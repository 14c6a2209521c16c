#pragma once

#include <string>
#include <string_view>

namespace fabric::units {

// Canonical internal units: kg (mass), kWh (energy), tonne-km (transport),
// mm^2 (area), GB (capacity), hours (time), W (power).

enum class Dimension {
  Mass,
  Energy,
  Area,
  Capacity,
  Time,
  Power,
  Length,
  Fraction,
  MassPerEnergy,     // kg/kWh
  MassPerTransport,  // kg/tkm
  MassPerMass,       // kg/kg
  BitDensity,        // Gb/mm^2
  Count,
  Rate,              // per year
};

/// Multiplier converting a value in `unit` to the canonical unit of `dim`.
/// Throws ValidationError for units that do not belong to `dim`.
double scale_to_canonical(std::string_view unit, Dimension dim);

inline double to_canonical(double value, std::string_view unit, Dimension dim) {
  return value * scale_to_canonical(unit, dim);
}

std::string_view canonical_label(Dimension dim);

constexpr double kHoursPerYear = 8760.0;

}  // namespace fabric::units
