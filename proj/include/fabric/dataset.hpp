#pragma once

// Versioned, validated bundle of every factor table and registry the engine
// consumes. A bundle is a directory of CSV tables plus a key/value manifest.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fabric/device.hpp"
#include "fabric/impact.hpp"
#include "fabric/logistics.hpp"
#include "fabric/manufacturing.hpp"
#include "fabric/operations.hpp"

namespace fabric {

struct DeviceRegistryEntry {
  DeviceSpec spec;
  double fp64_tflops = 0.0;
  double shipping_mass_kg = 0.0;
  int deploy_year = 0;
  bool operator==(const DeviceRegistryEntry&) const = default;
};

/// A device and how many of it; fractional counts express capacity shares
/// (e.g. 100 GB of a 20 TB drive) or slices of a shared part.
struct Component {
  std::string device;
  double count = 1.0;
  bool operator==(const Component&) const = default;
};

struct SystemSpec {
  std::string id;
  std::string region;
  int year = 0;
  std::vector<Component> components;
  bool operator==(const SystemSpec&) const = default;
};

struct BundleDefaults {
  std::string region = "US-avg";
  double wafer_diameter_mm = 300.0;
  double yield = kDefaultYield;
  double lifetime_h = 43800.0;
  double idle_fraction = kDefaultIdleFraction;
  double duty = 0.7;
  double pue = 1.0;
  int year_window = kDefaultYearWindow;
  std::vector<TransportLeg> transport_legs = default_transport_legs();
  std::string eol_profile;
};

struct TableInfo {
  std::string file;
  Provenance provenance;
};

/// Names of the tabular files, in load order.
inline constexpr std::array<std::string_view, 10> kBundleTables = {
    "devices", "grids", "gamma", "phi", "fab_profiles", "allocation",
    "hdd_scores", "transport", "eol", "systems"};

using AllocationMap =
    std::map<std::pair<std::string, DeviceClass>, std::map<int, AllocationInputs>>;

struct DatasetBundle {
  std::string name;
  std::string edition;
  BundleDefaults defaults;
  std::map<std::string, TableInfo> tables;

  CharacterizationTable characterization;
  std::map<std::string, Phase> pollutant_phases;
  EndpointTable endpoint;
  std::map<ImpactCategory, std::string> endpoint_rows;  // which published row feeds each factor
  std::map<std::string, FabProfile> fab_profiles;
  AllocationMap allocations;
  HddScoreTable hdd_scores;
  TransportFactorTable transport;
  std::map<std::string, EolProfile> eol_profiles;
  std::map<std::string, MassProxy> mass_proxies;
  GridCatalog grids;
  std::map<std::string, DeviceRegistryEntry> devices;
  std::map<std::string, SystemSpec> systems;

  /// Hex SHA-256 of the canonicalized content; set by load_bundle.
  std::string version;

  ManufacturingContext manufacturing_context() const;

  /// Throws ResolutionError carrying the known ids as candidates.
  const DeviceRegistryEntry& device(const std::string& id) const;
  const SystemSpec& system(const std::string& id) const;
};

/// Loads and validates a bundle directory. Every problem found (schema,
/// units, references, EoL mix) is reported together in a DatasetError.
DatasetBundle load_bundle(const std::filesystem::path& dir);

/// Writes the bundle in canonical form; load_bundle of the result yields
/// the same content and version.
void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);

/// table -> canonical key -> canonical value. Independent of row order.
using FlatTables = std::map<std::string, std::map<std::string, std::string>>;
FlatTables flatten(const DatasetBundle& bundle);

/// Hex SHA-256 over flatten(bundle).
std::string content_hash(const DatasetBundle& bundle);

inline bool same_content(const DatasetBundle& a, const DatasetBundle& b) {
  return flatten(a) == flatten(b);
}

struct DiffEntry {
  enum class Kind { Added, Removed, Changed };
  std::string table;
  std::string key;
  Kind kind = Kind::Changed;
  std::string old_value;
  std::string new_value;
};

std::string_view to_string(DiffEntry::Kind k);

std::vector<DiffEntry> diff_bundles(const DatasetBundle& a, const DatasetBundle& b);

}  // namespace fabric
