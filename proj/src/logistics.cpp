#include "fabric/logistics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fabric/error.hpp"

namespace fabric {
namespace {

void require_mass(double mass_kg) {
  if (!std::isfinite(mass_kg) || mass_kg < 0.0) {
    std::ostringstream os;
    os << "mass must be >= 0 kg (got " << mass_kg << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

std::vector<TransportLeg> default_transport_legs() {
  return {{TransportMode::Truck, 200.0}, {TransportMode::Ship, 14000.0}};
}

void TransportFactorTable::set(TransportMode mode, int year, std::string_view pollutant,
                               double kg_per_tkm) {
  if (!std::isfinite(kg_per_tkm) || kg_per_tkm < 0.0) {
    throw ValidationError("transport factor for " + std::string(to_string(mode)) + "/" +
                          std::string(pollutant) + " must be >= 0");
  }
  factors_[mode][year][normalize_pollutant_id(pollutant)] = kg_per_tkm;
}

std::set<int> TransportFactorTable::years(TransportMode mode) const {
  std::set<int> out;
  if (auto it = factors_.find(mode); it != factors_.end()) {
    for (const auto& [y, _] : it->second) out.insert(y);
  }
  return out;
}

const std::map<std::string, double>& TransportFactorTable::row(TransportMode mode, int year,
                                                               int window, Notes* notes) const {
  auto it = factors_.find(mode);
  if (it == factors_.end()) {
    throw ResolutionError("no transport factors for mode '" + std::string(to_string(mode)) + "'");
  }
  const auto res =
      resolve_year(years(mode), year, window, "transport " + std::string(to_string(mode)));
  if (!res.exact()) {
    add_note(notes, "transport " + std::string(to_string(mode)) + ": year " +
                        std::to_string(year) + " resolved to " + std::to_string(res.resolved));
  }
  return it->second.at(res.resolved);
}

std::vector<double> leg_tonne_km(double mass_kg, std::span<const TransportLeg> legs) {
  require_mass(mass_kg);
  std::vector<double> out;
  out.reserve(legs.size());
  for (const auto& leg : legs) {
    if (!(leg.distance_km >= 0.0)) throw ValidationError("transport distance must be >= 0");
    out.push_back(mass_kg / 1000.0 * leg.distance_km);
  }
  return out;
}

MidpointVector transport_midpoints(double mass_kg, std::span<const TransportLeg> legs,
                                   const TransportFactorTable& factors, int year,
                                   const CharacterizationTable& table, int window,
                                   Notes* notes) {
  if (legs.empty()) throw ValidationError("transport profile needs at least one leg");
  const auto tkm = leg_tonne_km(mass_kg, legs);
  std::vector<ProcessThroughput> processes;
  processes.reserve(legs.size());
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const auto& row = factors.row(legs[i].mode, year, window, notes);
    processes.push_back({tkm[i], "tkm", FactorRow{"tkm", row}});
  }
  return midpoint_from_processes(processes, table);
}

void EolProfile::validate() const {
  for (double f : {recycle, incinerate, landfill}) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw ValidationError("EoL profile '" + id + "': pathway fractions must lie in [0, 1]");
    }
  }
  const double sum = recycle + incinerate + landfill;
  if (std::abs(sum - 1.0) > kEolMixTolerance) {
    std::ostringstream os;
    os.precision(12);
    os << "EoL profile '" << id << "': R+I+L must equal 1 (sum = " << sum << ")";
    throw ValidationError(os.str());
  }
  if (!(ash_yield >= 0.0 && ash_yield <= 1.0)) {
    throw ValidationError("EoL profile '" + id + "': ash yield must lie in [0, 1]");
  }
}

MassProxy::MassProxy(std::string label, const MidpointVector& reference, double reference_mass_kg)
    : label_(std::move(label)), reference_(reference), reference_mass_kg_(reference_mass_kg) {
  if (!(reference_mass_kg > 0.0) || !std::isfinite(reference_mass_kg)) {
    throw ValidationError("mass proxy '" + label_ + "' needs a strictly positive reference mass");
  }
  per_kg_ = reference.scaled(1.0 / reference_mass_kg);
}

MidpointVector eol_midpoints(double mass_kg, const EolProfile& p) {
  require_mass(mass_kg);
  p.validate();
  std::array<double, 3> v{};
  for (auto c : kCategories) {
    // R*F_rec + I*(F_inc + p_ash*F_ash) + L*F_land with R written as 1-I-L, so
    // identical pathway vectors reduce to F_rec bit-for-bit.
    const double per_kg = p.f_recycle[c] + p.incinerate * (p.f_incinerate[c] - p.f_recycle[c]) +
                          p.landfill * (p.f_landfill[c] - p.f_recycle[c]) +
                          p.incinerate * p.ash_yield * p.f_ash[c];
    v[static_cast<std::size_t>(c)] = mass_kg * std::max(per_kg, 0.0);
  }
  return {v[0], v[1], v[2]};
}

MidpointVector eol_midpoints_proxy(double mass_kg, const MassProxy& proxy) {
  require_mass(mass_kg);
  if (mass_kg == proxy.reference_mass_kg()) return proxy.reference();
  return proxy.per_kg().scaled(mass_kg);
}

}  // namespace fabric
