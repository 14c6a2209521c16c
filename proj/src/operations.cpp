#include "fabric/operations.hpp"

#include <cmath>
#include <sstream>

#include "fabric/error.hpp"

namespace fabric {

std::vector<PollutantLoad> RegionGrid::loads(double energy_kwh) const {
  if (!std::isfinite(energy_kwh) || energy_kwh < 0.0) {
    std::ostringstream os;
    os << "energy must be >= 0 kWh (got " << energy_kwh << ")";
    throw ValidationError(os.str());
  }
  std::vector<PollutantLoad> out;
  out.reserve(kg_per_kwh.size());
  for (const auto& [pollutant, factor] : kg_per_kwh) out.push_back({pollutant, energy_kwh * factor});
  return out;
}

void GridCatalog::add(RegionGrid grid) {
  for (const auto& [pollutant, factor] : grid.kg_per_kwh) {
    if (!std::isfinite(factor) || factor < 0.0) {
      throw ValidationError("grid " + grid.region + "/" + std::to_string(grid.year) +
                            " has a negative factor for " + pollutant);
    }
  }
  if (grid.co2_kg_per_kwh && *grid.co2_kg_per_kwh < 0.0) {
    throw ValidationError("grid " + grid.region + " has a negative CO2 intensity");
  }
  auto& by_year = grids_[grid.region];
  if (by_year.count(grid.year)) {
    throw ValidationError("duplicate grid " + grid.region + "/" + std::to_string(grid.year));
  }
  by_year.emplace(grid.year, std::move(grid));
}

const RegionGrid& GridCatalog::resolve(const std::string& region, int year, int window,
                                       Notes* notes) const {
  auto it = grids_.find(region);
  if (it == grids_.end()) {
    std::string listing;
    for (const auto& r : regions()) listing += (listing.empty() ? "" : ", ") + r;
    throw ResolutionError("unknown grid region '" + region + "' (available: " + listing + ")",
                          regions());
  }
  std::set<int> years;
  for (const auto& [y, _] : it->second) years.insert(y);
  const auto res = resolve_year(years, year, window, "grid " + region);
  if (!res.exact()) {
    add_note(notes, "grid " + region + ": year " + std::to_string(year) + " resolved to " +
                        std::to_string(res.resolved));
  }
  return it->second.at(res.resolved);
}

std::vector<std::string> GridCatalog::regions() const {
  std::vector<std::string> out;
  for (const auto& [r, _] : grids_) out.push_back(r);
  return out;
}

std::set<int> GridCatalog::years(const std::string& region) const {
  std::set<int> out;
  if (auto it = grids_.find(region); it != grids_.end()) {
    for (const auto& [y, _] : it->second) out.insert(y);
  }
  return out;
}

bool GridCatalog::has_region(const std::string& region) const { return grids_.count(region) > 0; }

EnergyDraw EnergyDraw::measured(double kwh, double hours) {
  if (!std::isfinite(kwh) || kwh < 0.0) throw ValidationError("measured energy must be >= 0");
  return {kwh, EnergySource::Measured, std::nullopt, hours};
}

EnergyDraw EnergyDraw::duty_model(double tdp_w, double idle_w, double duty, double hours,
                                  double pue) {
  if (!(duty >= 0.0 && duty <= 1.0)) {
    std::ostringstream os;
    os << "duty must lie in [0, 1] (got " << duty << ")";
    throw ValidationError(os.str());
  }
  if (!(hours >= 0.0)) throw ValidationError("hours must be >= 0");
  if (!(pue >= 1.0)) throw ValidationError("PUE must be >= 1.0");
  if (!(idle_w >= 0.0 && idle_w <= tdp_w)) throw ValidationError("idle power must lie in [0, tdp]");
  const double watts = idle_w + duty * (tdp_w - idle_w);
  return {hours * watts / 1000.0 * pue, EnergySource::DutyModel, duty, hours};
}

MidpointVector use_midpoints(double energy_kwh, const RegionGrid& grid,
                             const CharacterizationTable& table) {
  const auto loads = grid.loads(energy_kwh);
  return characterize(loads, table);
}

double endpoint_intensity(const RegionGrid& grid, const CharacterizationTable& table,
                          const EndpointTable& phi) {
  return to_endpoint(use_midpoints(1.0, grid, table), phi).value;
}

EndpointImpact device_obi(const DeviceSpec& spec, double duty, double hours,
                          const RegionGrid& grid, const CharacterizationTable& table,
                          const EndpointTable& phi, double pue, double idle_fraction) {
  const auto draw =
      EnergyDraw::duty_model(spec.tdp_w, spec.idle_power(idle_fraction), duty, hours, pue);
  return to_endpoint(use_midpoints(draw.energy_kwh, grid, table), phi);
}

}  // namespace fabric
