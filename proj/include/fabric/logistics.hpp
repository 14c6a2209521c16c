#pragma once

// Stage-Trans (tonne-km transport model) and stage-EoL (pathway mix or
// per-kg mass proxy) midpoints.

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fabric/device.hpp"
#include "fabric/impact.hpp"
#include "fabric/years.hpp"

namespace fabric {

/// Default route: 200 km by truck and 14 000 km by ship.
std::vector<TransportLeg> default_transport_legs();

/// Per-mode emission factors, kg pollutant per tonne-km, keyed by year.
class TransportFactorTable {
 public:
  void set(TransportMode mode, int year, std::string_view pollutant, double kg_per_tkm);

  /// Factor row for `mode` at the nearest year within `window`; a mode with
  /// no row in the window throws ResolutionError.
  const std::map<std::string, double>& row(TransportMode mode, int year, int window,
                                           Notes* notes = nullptr) const;
  std::set<int> years(TransportMode mode) const;

  const std::map<TransportMode, std::map<int, std::map<std::string, double>>>& entries() const {
    return factors_;
  }
  bool operator==(const TransportFactorTable&) const = default;

 private:
  std::map<TransportMode, std::map<int, std::map<std::string, double>>> factors_;
};

struct TransportProfile {
  std::vector<TransportLeg> legs = default_transport_legs();
  TransportFactorTable factors;
};

/// Tonne-km per leg for `mass_kg`, in leg order.
std::vector<double> leg_tonne_km(double mass_kg, std::span<const TransportLeg> legs);

MidpointVector transport_midpoints(double mass_kg, std::span<const TransportLeg> legs,
                                   const TransportFactorTable& factors, int year,
                                   const CharacterizationTable& table,
                                   int window = kDefaultYearWindow, Notes* notes = nullptr);

inline MidpointVector transport_midpoints(double mass_kg, const TransportProfile& profile,
                                          int year, const CharacterizationTable& table,
                                          int window = kDefaultYearWindow,
                                          Notes* notes = nullptr) {
  return transport_midpoints(mass_kg, profile.legs, profile.factors, year, table, window, notes);
}

/// Recycling / incineration / landfill mix with per-kg pathway vectors.
struct EolProfile {
  std::string id;
  double recycle = 0.0;
  double incinerate = 0.0;
  double landfill = 0.0;
  double ash_yield = 0.0;  // kg bottom ash per kg incinerated
  MidpointVector f_recycle;
  MidpointVector f_incinerate;
  MidpointVector f_ash;
  MidpointVector f_landfill;

  /// Throws ValidationError reporting the R+I+L sum when it is not 1.
  void validate() const;
  bool operator==(const EolProfile&) const = default;
};

inline constexpr double kEolMixTolerance = 1e-9;

/// Per-kg EoL vector derived from one reference device's EoL midpoints.
class MassProxy {
 public:
  MassProxy() = default;
  /// Throws ValidationError unless reference_mass_kg > 0.
  MassProxy(std::string label, const MidpointVector& reference, double reference_mass_kg);

  const std::string& label() const noexcept { return label_; }
  const MidpointVector& reference() const noexcept { return reference_; }
  double reference_mass_kg() const noexcept { return reference_mass_kg_; }
  const MidpointVector& per_kg() const noexcept { return per_kg_; }

  bool operator==(const MassProxy&) const = default;

 private:
  std::string label_;
  MidpointVector reference_;
  double reference_mass_kg_ = 1.0;
  MidpointVector per_kg_;
};

MidpointVector eol_midpoints(double mass_kg, const EolProfile& profile);
MidpointVector eol_midpoints_proxy(double mass_kg, const MassProxy& proxy);

}  // namespace fabric
