#include "fabric/manufacturing.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "fabric/error.hpp"

namespace fabric {
namespace {

struct LayerEntry {
  double node_nm;
  int layers;
};

constexpr std::array<LayerEntry, 4> kLayerTable = {{{14, 67}, {10, 78}, {7, 87}, {5, 81}}};

std::string fmt_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

MidpointVector wafer_processing(double units, const FabProfileRow& row, const std::string& unit,
                                const RegionGrid& grid, const CharacterizationTable& table) {
  ProcessThroughput direct{units, unit, FactorRow{unit, row.kg_per_unit}};
  auto m = midpoint_from_processes(std::span(&direct, 1), table);
  m += use_midpoints(units * row.kwh_per_unit, grid, table);
  return m;
}

void require_context(const ManufacturingContext& ctx) {
  if (!ctx.characterization || !ctx.grids) {
    throw ConfigurationError("manufacturing context lacks characterization or grid tables");
  }
}

}  // namespace

NodeLayers layers_for_node(double node_nm) {
  if (!(node_nm > 0.0)) throw ValidationError("process node must be > 0 nm");
  const LayerEntry* best = nullptr;
  double best_d = 0.0;
  for (const auto& e : kLayerTable) {
    const double d = std::abs(e.node_nm - node_nm);
    if (!best || d < best_d || (d == best_d && e.layers < best->layers)) {
      best = &e;
      best_d = d;
    }
  }
  return {best->node_nm, best->layers, best_d != 0.0};
}

std::string_view to_string(ProductionUnit u) {
  return u == ProductionUnit::WaferMaskLayer ? "wafer-mask-layer" : "wafer";
}

std::set<int> FabProfile::years() const {
  std::set<int> out;
  for (const auto& [y, _] : rows) out.insert(y);
  return out;
}

void AllocationInputs::validate() const {
  std::vector<std::string> problems;
  if (!(revenue_share >= 0.0 && revenue_share <= 1.0)) problems.emplace_back("revenue_share must lie in [0, 1]");
  if (!(yield > 0.0 && yield <= 1.0)) problems.emplace_back("yield must lie in (0, 1]");
  if (!(bit_density_gb_per_mm2 > 0.0)) problems.emplace_back("bit_density must be > 0");
  if (!(wafer_capacity_per_yr > 0.0)) problems.emplace_back("wafer_production_capacity must be > 0");
  if (!(wafer_area_mm2 > 0.0)) problems.emplace_back("wafer_area must be > 0");
  if (!(annual_electricity_kwh >= 0.0)) problems.emplace_back("annual electricity must be >= 0");
  for (const auto& [k, v] : annual_emission_kg) {
    if (!(v >= 0.0)) problems.push_back("annual emission of " + k + " must be >= 0");
  }
  if (problems.empty()) return;
  std::string msg = "allocation inputs " + vendor + "/" + std::string(to_string(product)) + "/" +
                    std::to_string(year) + " invalid:";
  for (const auto& p : problems) msg += " " + p + ";";
  throw ValidationError(msg);
}

std::set<int> HddScoreTable::years(const std::string& score_class) const {
  std::set<int> out;
  for (const auto& [key, _] : scores) {
    if (key.first == score_class) out.insert(key.second);
  }
  return out;
}

HddLookup hdd_lookup(const HddScoreTable& table, const std::string& score_class, int year) {
  const auto years = table.years(score_class);
  if (years.empty()) {
    throw ResolutionError("no HDD scores for class '" + score_class + "'");
  }
  const int first = *years.begin();
  const int last = *years.rbegin();
  if (year >= first && year <= last) {
    const auto res = resolve_year(years, year, last - first, "HDD scores " + score_class);
    return {table.scores.at({score_class, res.resolved}), res.resolved, !res.exact()};
  }
  const int edge = year < first ? first : last;
  const double dyear = static_cast<double>(year - edge);
  const auto& base = table.scores.at({score_class, edge});
  std::array<double, 3> v{};
  for (auto c : kCategories) {
    const auto i = static_cast<std::size_t>(c);
    v[i] = base[c] * std::pow(1.0 - table.annual_reduction[i], dyear);
  }
  return {MidpointVector(v[0], v[1], v[2]), edge, true};
}

double logic_mfg_throughput(const DeviceSpec& spec, const WaferGeometry& wafer, double yield,
                            Notes* notes) {
  if (!is_logic(spec.cls)) {
    throw ValidationError("device '" + spec.id + "' is not a logic device");
  }
  if (!(spec.die_size_mm2 >= 0.0) || !std::isfinite(spec.die_size_mm2)) {
    throw ValidationError("device '" + spec.id + "' is missing a valid die size");
  }
  if (!spec.node_nm) throw ValidationError("device '" + spec.id + "' is missing a process node");
  if (!(yield > 0.0 && yield <= 1.0)) throw ValidationError("yield must lie in (0, 1]");
  const auto layers = layers_for_node(*spec.node_nm);
  if (layers.mapped) {
    add_note(notes, spec.id + ": node " + fmt_double(*spec.node_nm) + " nm uses " +
                        fmt_double(layers.node_nm) + " nm layer count (" +
                        std::to_string(layers.layers) + ")");
  }
  return spec.die_size_mm2 / (wafer.area_mm2() * yield) * layers.layers;
}

double memory_mfg_throughput(double capacity_gb, const AllocationInputs& alloc) {
  if (!(alloc.bit_density_gb_per_mm2 > 0.0)) {
    throw ValidationError("bit density must be > 0 for " + alloc.vendor);
  }
  if (!(alloc.yield > 0.0 && alloc.yield <= 1.0)) throw ValidationError("yield must lie in (0, 1]");
  if (!(capacity_gb >= 0.0)) throw ValidationError("capacity must be >= 0");
  const double gb_per_wafer = alloc.wafer_area_mm2 * alloc.bit_density_gb_per_mm2 / 8.0;
  return capacity_gb / gb_per_wafer / alloc.yield;
}

double memory_mfg_throughput(const DeviceSpec& spec, const AllocationInputs& alloc) {
  if (!is_memory(spec.cls)) {
    throw ValidationError("device '" + spec.id + "' is not a DRAM/SSD device");
  }
  return memory_mfg_throughput(spec.capacity_gb, alloc);
}

double allocated_wafer_factor(const AllocationInputs& alloc, std::string_view pollutant) {
  if (!(alloc.wafer_capacity_per_yr > 0.0)) {
    throw ValidationError("wafer production capacity must be > 0 for " + alloc.vendor);
  }
  auto it = alloc.annual_emission_kg.find(normalize_pollutant_id(pollutant));
  const double annual = it == alloc.annual_emission_kg.end() ? 0.0 : it->second;
  return alloc.revenue_share * annual / alloc.wafer_capacity_per_yr;
}

double allocated_wafer_electricity(const AllocationInputs& alloc) {
  if (!(alloc.wafer_capacity_per_yr > 0.0)) {
    throw ValidationError("wafer production capacity must be > 0 for " + alloc.vendor);
  }
  return alloc.revenue_share * alloc.annual_electricity_kwh / alloc.wafer_capacity_per_yr;
}

const AllocationInputs& resolve_allocation(const ManufacturingContext& ctx,
                                           const std::string& vendor, DeviceClass product,
                                           int year, Notes* notes) {
  if (!ctx.allocations) throw ConfigurationError("no allocation tables configured");
  auto it = ctx.allocations->find({vendor, product});
  if (it == ctx.allocations->end()) {
    throw ResolutionError("no allocation inputs for " + vendor + "/" +
                          std::string(to_string(product)));
  }
  std::set<int> years;
  for (const auto& [y, _] : it->second) years.insert(y);
  const auto res = resolve_year(years, year, ctx.year_window,
                                "allocation " + vendor + "/" + std::string(to_string(product)));
  if (!res.exact()) {
    add_note(notes, "allocation " + vendor + "/" + std::string(to_string(product)) + ": year " +
                        std::to_string(year) + " resolved to " + std::to_string(res.resolved));
  }
  return it->second.at(res.resolved);
}

MidpointVector logic_mfg_midpoints(const DeviceSpec& spec, const ManufacturingContext& ctx,
                                   Notes* notes) {
  require_context(ctx);
  if (!ctx.fab_profiles) throw ConfigurationError("no fab profiles configured");
  auto it = ctx.fab_profiles->find(spec.fab_profile);
  if (it == ctx.fab_profiles->end()) {
    throw ResolutionError("device '" + spec.id + "' references unknown fab profile '" +
                          spec.fab_profile + "'");
  }
  const auto& profile = it->second;
  if (profile.unit != ProductionUnit::WaferMaskLayer) {
    throw ConfigurationError("fab profile '" + profile.id +
                             "' must be per wafer-mask-layer for logic devices");
  }
  const auto res = resolve_year(profile.years(), spec.year, ctx.year_window,
                                "fab profile " + profile.id);
  if (!res.exact()) {
    add_note(notes, spec.id + ": fab profile " + profile.id + " year " +
                        std::to_string(spec.year) + " resolved to " +
                        std::to_string(res.resolved));
  }
  const double yield = spec.yield.value_or(ctx.default_yield);
  const double units = logic_mfg_throughput(spec, ctx.wafer, yield, notes);
  const std::string region = spec.fab_region.empty() ? profile.region : spec.fab_region;
  const auto& grid = ctx.grids->resolve(region, res.resolved, ctx.year_window, notes);
  return wafer_processing(units, profile.rows.at(res.resolved), "wafer-mask-layer", grid,
                          *ctx.characterization);
}

MidpointVector memory_mfg_midpoints(double capacity_gb, const std::string& vendor,
                                    DeviceClass product, int year, const std::string& fab_region,
                                    const ManufacturingContext& ctx, Notes* notes) {
  require_context(ctx);
  const auto& alloc = resolve_allocation(ctx, vendor, product, year, notes);
  const double wafers = memory_mfg_throughput(capacity_gb, alloc);
  FabProfileRow row;
  for (const auto& [k, _] : alloc.annual_emission_kg) row.kg_per_unit[k] = allocated_wafer_factor(alloc, k);
  row.kwh_per_unit = allocated_wafer_electricity(alloc);
  const std::string region = fab_region.empty() ? alloc.region : fab_region;
  const auto& grid = ctx.grids->resolve(region, alloc.year, ctx.year_window, notes);
  return wafer_processing(wafers, row, "wafer", grid, *ctx.characterization);
}

MidpointVector hbm_mfg_midpoints(const DeviceSpec& spec, const ManufacturingContext& ctx,
                                 Notes* notes) {
  if (spec.cls != DeviceClass::LogicGPU || spec.hbm_capacity_gb == 0.0) return {};
  if (spec.hbm_profile.empty()) {
    throw ResolutionError("GPU '" + spec.id + "' has HBM but no HBM allocation vendor");
  }
  return memory_mfg_midpoints(spec.hbm_capacity_gb, spec.hbm_profile, DeviceClass::DRAM,
                              spec.year, "", ctx, notes);
}

MidpointVector mfg_midpoints(const DeviceSpec& spec, const ManufacturingContext& ctx,
                             Notes* notes) {
  switch (spec.cls) {
    case DeviceClass::LogicCPU:
      return logic_mfg_midpoints(spec, ctx, notes);
    case DeviceClass::LogicGPU:
      return logic_mfg_midpoints(spec, ctx, notes) + hbm_mfg_midpoints(spec, ctx, notes);
    case DeviceClass::DRAM:
    case DeviceClass::SSD:
      return memory_mfg_midpoints(spec.capacity_gb, spec.fab_profile, spec.cls, spec.year,
                                  spec.fab_region, ctx, notes);
    case DeviceClass::HDD: {
      if (!ctx.hdd_scores) throw ConfigurationError("no HDD score table configured");
      const auto cls = spec.score_class.empty() ? spec.id : spec.score_class;
      const auto hit = hdd_lookup(*ctx.hdd_scores, cls, spec.year);
      if (hit.estimated) {
        add_note(notes, spec.id + ": HDD score for " + std::to_string(spec.year) +
                            " estimated from " + std::to_string(hit.source_year));
      }
      return hit.value;
    }
  }
  throw ValidationError("device '" + spec.id + "' has an unknown device class");
}

}  // namespace fabric
