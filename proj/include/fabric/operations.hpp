#pragma once

// Use-stage (operational) impacts from electricity and regional grid
// emission factors.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fabric/device.hpp"
#include "fabric/impact.hpp"
#include "fabric/years.hpp"

namespace fabric {

struct RegionGrid {
  std::string region;
  int year = 0;
  std::map<std::string, double> kg_per_kwh;  // SO2, NOX, NH3 ...
  std::optional<double> co2_kg_per_kwh;

  /// Loads emitted by `energy_kwh` of generation on this grid.
  std::vector<PollutantLoad> loads(double energy_kwh) const;
  bool operator==(const RegionGrid&) const = default;
};

/// All grids of a bundle, keyed by (region, year).
class GridCatalog {
 public:
  /// Throws ValidationError on a duplicate (region, year) or a negative factor.
  void add(RegionGrid grid);

  /// Nearest year within the window. Unknown regions throw ResolutionError
  /// with the list of available regions.
  const RegionGrid& resolve(const std::string& region, int year, int window = kDefaultYearWindow,
                            Notes* notes = nullptr) const;

  std::vector<std::string> regions() const;
  std::set<int> years(const std::string& region) const;
  bool has_region(const std::string& region) const;

  const std::map<std::string, std::map<int, RegionGrid>>& grids() const noexcept { return grids_; }

 private:
  std::map<std::string, std::map<int, RegionGrid>> grids_;
};

enum class EnergySource { Measured, DutyModel };

struct EnergyDraw {
  double energy_kwh = 0.0;
  EnergySource source = EnergySource::Measured;
  std::optional<double> duty;
  double hours = 0.0;

  static EnergyDraw measured(double kwh, double hours = 0.0);
  /// Affine power between idle and TDP: hours * (idle + duty*(tdp-idle)) / 1000,
  /// multiplied by `pue` (>= 1).
  static EnergyDraw duty_model(double tdp_w, double idle_w, double duty, double hours,
                               double pue = 1.0);
};

MidpointVector use_midpoints(double energy_kwh, const RegionGrid& grid,
                             const CharacterizationTable& table);

/// Endpoint species*yr per kWh on `grid`.
double endpoint_intensity(const RegionGrid& grid, const CharacterizationTable& table,
                          const EndpointTable& phi);

/// Default idle fraction of TDP when a device leaves idle power unspecified.
inline constexpr double kDefaultIdleFraction = 0.3;

EndpointImpact device_obi(const DeviceSpec& spec, double duty, double hours,
                          const RegionGrid& grid, const CharacterizationTable& table,
                          const EndpointTable& phi, double pue = 1.0,
                          double idle_fraction = kDefaultIdleFraction);

}  // namespace fabric
