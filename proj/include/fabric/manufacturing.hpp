#pragma once

// Stage-Mfg midpoints: wafer-mask-layer throughput for logic, economic-value
// allocation for DRAM/SSD (and GPU HBM), per-drive LCA scores for HDDs.

#include <array>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "fabric/device.hpp"
#include "fabric/impact.hpp"
#include "fabric/operations.hpp"
#include "fabric/years.hpp"

namespace fabric {

inline constexpr double kDefaultYield = 0.875;

struct WaferGeometry {
  double diameter_mm = 300.0;
  double area_mm2() const { return std::numbers::pi * diameter_mm * diameter_mm / 4.0; }
};

/// Photolithography mask layers for the supported logic nodes.
struct NodeLayers {
  double node_nm = 0.0;  // node used for the count
  int layers = 0;
  bool mapped = false;   // true when the input node was not one of 14/10/7/5
};

/// 14 nm -> 67, 10 nm -> 78, 7 nm -> 87, 5 nm -> 81. Other nodes take the
/// nearest listed node; equidistant nodes take the one with fewer layers
/// (12 nm -> 14 nm, 6 nm -> 5 nm).
NodeLayers layers_for_node(double node_nm);

enum class ProductionUnit { WaferMaskLayer, Wafer };

std::string_view to_string(ProductionUnit u);

struct FabProfileRow {
  std::map<std::string, double> kg_per_unit;  // pollutant -> kg per production unit
  double kwh_per_unit = 0.0;
  bool operator==(const FabProfileRow&) const = default;
};

struct FabProfile {
  std::string id;
  std::string region;
  ProductionUnit unit = ProductionUnit::WaferMaskLayer;
  std::map<int, FabProfileRow> rows;

  std::set<int> years() const;
  bool operator==(const FabProfile&) const = default;
};

/// Fab-level inputs for allocating a memory vendor's annual emissions to
/// one product class (DRAM or SSD/NAND) per wafer.
struct AllocationInputs {
  std::string vendor;
  std::string region;  // fab region, for electricity emissions
  DeviceClass product = DeviceClass::DRAM;
  int year = 0;
  double revenue_share = 0.0;
  std::map<std::string, double> annual_emission_kg;
  double annual_electricity_kwh = 0.0;
  double wafer_capacity_per_yr = 0.0;
  double bit_density_gb_per_mm2 = 0.0;  // gigabits
  double wafer_area_mm2 = WaferGeometry{}.area_mm2();
  double yield = kDefaultYield;

  void validate() const;
  bool operator==(const AllocationInputs&) const = default;
};

/// Per-drive HDD midpoint scores by (class, year) plus per-category annual
/// reduction rates used to extrapolate outside the covered years.
struct HddScoreTable {
  std::map<std::pair<std::string, int>, MidpointVector> scores;
  std::array<double, 3> annual_reduction{0.0, 0.0, 0.0};

  std::set<int> years(const std::string& score_class) const;
  bool operator==(const HddScoreTable&) const = default;
};

struct HddLookup {
  MidpointVector value;
  int source_year = 0;
  bool estimated = false;  // extrapolated or nearest-year fallback
};

/// Years inside the class's covered range use the table directly (nearest
/// year if not exact). Outside, the nearest edge is scaled by (1 - r)^dyear.
HddLookup hdd_lookup(const HddScoreTable& table, const std::string& score_class, int year);

/// Die / (wafer area * yield) * layers(node), in wafer-mask-layers.
double logic_mfg_throughput(const DeviceSpec& spec, const WaferGeometry& wafer, double yield,
                            Notes* notes = nullptr);

/// capacity / (wafer area * bit_density / 8) / yield, in wafers.
double memory_mfg_throughput(double capacity_gb, const AllocationInputs& alloc);
double memory_mfg_throughput(const DeviceSpec& spec, const AllocationInputs& alloc);

/// revenue_share * annual_emission_k / wafer_capacity, kg per wafer.
double allocated_wafer_factor(const AllocationInputs& alloc, std::string_view pollutant);
double allocated_wafer_electricity(const AllocationInputs& alloc);

/// Everything mfg_midpoints needs, borrowed from a loaded bundle.
struct ManufacturingContext {
  const std::map<std::string, FabProfile>* fab_profiles = nullptr;
  /// (vendor, product) -> year -> inputs
  const std::map<std::pair<std::string, DeviceClass>, std::map<int, AllocationInputs>>*
      allocations = nullptr;
  const HddScoreTable* hdd_scores = nullptr;
  const GridCatalog* grids = nullptr;
  const CharacterizationTable* characterization = nullptr;
  WaferGeometry wafer{};
  double default_yield = kDefaultYield;
  int year_window = kDefaultYearWindow;
};

const AllocationInputs& resolve_allocation(const ManufacturingContext& ctx,
                                           const std::string& vendor, DeviceClass product,
                                           int year, Notes* notes = nullptr);

/// Logic die only (GPU HBM excluded).
MidpointVector logic_mfg_midpoints(const DeviceSpec& spec, const ManufacturingContext& ctx,
                                   Notes* notes = nullptr);
/// HBM stack of a GPU via the DRAM allocation; zero when hbm_capacity is 0.
MidpointVector hbm_mfg_midpoints(const DeviceSpec& spec, const ManufacturingContext& ctx,
                                 Notes* notes = nullptr);
/// Wafers of `capacity_gb` for a DRAM/SSD product of `vendor`.
MidpointVector memory_mfg_midpoints(double capacity_gb, const std::string& vendor,
                                    DeviceClass product, int year, const std::string& fab_region,
                                    const ManufacturingContext& ctx, Notes* notes = nullptr);

MidpointVector mfg_midpoints(const DeviceSpec& spec, const ManufacturingContext& ctx,
                             Notes* notes = nullptr);

}  // namespace fabric
