#include "fabric/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "fabric/error.hpp"
#include "fabric/units.hpp"
#include "tabular.hpp"

namespace fabric {
namespace {

namespace fs = std::filesystem;
using tabular::CsvRow;
using tabular::CsvTable;
using tabular::Problems;
using tabular::format_double;
using tabular::parse_double;
using tabular::parse_int;
using units::Dimension;

// Shared row-level helpers. Each records a problem and returns nullopt
// instead of throwing so the loader can report everything at once.
struct RowReader {
  const CsvTable& table;
  const CsvRow& row;
  Problems& problems;

  const std::string& text(std::string_view col) const { return table.cell(row, col); }

  std::optional<std::string> required(std::string_view col) const {
    const auto& v = text(col);
    if (v.empty()) {
      problems.push_back(table.where(row) + ": '" + std::string(col) + "' is required");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> number(std::string_view col, bool optional = false) const {
    const auto& v = text(col);
    if (v.empty()) {
      if (!optional) problems.push_back(table.where(row) + ": '" + std::string(col) + "' is required");
      return std::nullopt;
    }
    auto d = parse_double(v);
    if (!d) problems.push_back(table.where(row) + ": '" + std::string(col) + "' is not a number: " + v);
    return d;
  }

  std::optional<int> integer(std::string_view col) const {
    const auto& v = text(col);
    auto i = parse_int(v);
    if (!i) problems.push_back(table.where(row) + ": '" + std::string(col) + "' is not an integer: " + v);
    return i;
  }

  /// value * scale(unit column) into the canonical unit of `dim`.
  std::optional<double> quantity(std::string_view value_col, std::string_view unit_col,
                                 Dimension dim) const {
    auto v = number(value_col);
    const auto& unit = text(unit_col);
    if (!v) return std::nullopt;
    try {
      return units::to_canonical(*v, unit, dim);
    } catch (const ValidationError& e) {
      problems.push_back(table.where(row) + ": unit mismatch: " + e.what());
      return std::nullopt;
    }
  }

  void error(const std::string& msg) const { problems.push_back(table.where(row) + ": " + msg); }
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string category_unit_per_kg(ImpactCategory c) { return std::string(unit_label(c)) + "/kg"; }

// Mass per production unit: "g/unit" -> g.
std::optional<double> per_unit_quantity(const RowReader& r, Dimension dim) {
  auto unit = r.text("unit");
  const std::string suffix = "/unit";
  if (unit.size() <= suffix.size() || unit.compare(unit.size() - suffix.size(), suffix.size(), suffix) != 0) {
    r.error("unit mismatch: per-production-unit quantities need a '<unit>/unit' label, got '" + unit + "'");
    return std::nullopt;
  }
  auto v = r.number("value");
  if (!v) return std::nullopt;
  try {
    return units::to_canonical(*v, unit.substr(0, unit.size() - suffix.size()), dim);
  } catch (const ValidationError& e) {
    r.error(std::string("unit mismatch: ") + e.what());
    return std::nullopt;
  }
}

std::optional<ImpactCategory> category_cell(const RowReader& r) {
  auto c = parse_category(r.text("category"));
  if (!c) r.error("unknown impact category '" + r.text("category") + "'");
  return c;
}

std::optional<MidpointVector> make_vector(const std::array<double, 3>& v, const std::string& where,
                                          Problems& problems) {
  try {
    return MidpointVector(v[0], v[1], v[2]);
  } catch (const ValidationError& e) {
    problems.push_back(where + ": " + e.what());
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Table loaders

void load_devices(const CsvTable& t, DatasetBundle& b, Problems& problems) {
  if (!t.require_columns({"id", "class", "year", "mass_kg", "tdp_w"}, problems)) return;
  for (const auto& row : t.rows) {
    RowReader r{t, row, problems};
    const std::size_t before = problems.size();
    DeviceRegistryEntry e;
    auto& s = e.spec;
    s.id = r.text("id");
    if (s.id.empty()) {
      r.error("'id' is required");
      continue;
    }
    auto cls = parse_device_class(r.text("class"));
    if (!cls) {
      r.error("unknown device class '" + r.text("class") + "'");
      continue;
    }
    s.cls = *cls;
    s.vendor = r.text("vendor");
    if (auto y = r.integer("year")) s.year = *y;
    s.node_label = r.text("node");
    if (!s.node_label.empty()) s.node_nm = parse_leading_node(s.node_label);
    s.die_size_mm2 = r.number("die_mm2", true).value_or(0.0);
    s.hbm_capacity_gb = r.number("hbm_gb", true).value_or(0.0);
    if (auto cap = r.number("capacity", true)) {
      try {
        s.capacity_gb = units::to_canonical(*cap, r.text("capacity_unit"), Dimension::Capacity);
      } catch (const ValidationError& ex) {
        r.error(std::string("unit mismatch: ") + ex.what());
      }
    }
    s.mass_kg = r.number("mass_kg").value_or(0.0);
    s.tdp_w = r.number("tdp_w").value_or(0.0);
    s.idle_power_w = r.number("idle_w", true);
    s.lifetime_h = r.number("lifetime_h", true).value_or(b.defaults.lifetime_h);
    s.yield = r.number("yield", true);
    s.fab_profile = r.text("fab_profile");
    s.hbm_profile = r.text("hbm_profile");
    s.fab_region = r.text("fab_region");
    s.score_class = r.text("score_class");
    s.eol_profile = r.text("eol_profile");
    if (!r.text("transport_legs").empty()) {
      try {
        s.transport_legs = parse_legs(r.text("transport_legs"));
      } catch (const ValidationError& ex) {
        r.error(ex.what());
      }
    }
    e.fp64_tflops = r.number("fp64_tflops", true).value_or(0.0);
    e.shipping_mass_kg = r.number("shipping_mass_kg", true).value_or(s.mass_kg);
    e.deploy_year = s.year;
    if (!r.text("deploy_year").empty()) {
      if (auto y = r.integer("deploy_year")) e.deploy_year = *y;
    }
    try {
      s.validate();
    } catch (const ValidationError& ex) {
      r.error(ex.what());
    }
    if (e.shipping_mass_kg < 0.0) r.error("shipping mass must be >= 0");
    if (problems.size() != before) continue;
    if (b.devices.count(s.id)) {
      r.error("duplicate device id '" + s.id + "'");
      continue;
    }
    b.devices.emplace(s.id, std::move(e));
  }
}

void load_grids(const CsvTable& t, DatasetBundle& b, Problems& problems) {
  if (!t.require_columns({"region", "year", "pollutant", "value", "unit"}, problems)) return;
  std::map<std::pair<std::string, int>, RegionGrid> grids;
  for (const auto& row : t.rows) {
    RowReader r{t, row, problems};
    auto region = r.required("region");
    auto year = r.integer("year");
    auto value = r.quantity("value", "unit", Dimension::MassPerEnergy);
    if (!region || !year || !value) continue;
    if (*value < 0.0) {
      r.error("grid factor must be >= 0");
      continue;
    }
    auto& g = grids[{*region, *year}];
    g.region = *region;
    g.year = *year;
    const auto pollutant = normalize_pollutant_id(r.text("pollutant"));
    if (pollutant == "CO2") {
      g.co2_kg_per_kwh = *value;
    } else {
      if (g.kg_per_kwh.count(pollutant)) r.error("duplicate grid factor " + pollutant);
      g.kg_per_kwh[pollutant] = *value;
    }
  }
  for (auto& [key, g] : grids) {
    // NH3 is commonly unreported by grid inventories; it contributes zero.
    g.kg_per_kwh.try_emplace("NH3", 0.0);
    b.grids.add(std::move(g));
  }
}

void load_gamma(const CsvTable& t, DatasetBundle& b, Problems& problems) {
  if (!t.require_columns({"pollutant", "phase", "category", "factor", "unit"}, problems)) return;
  for (const auto& row : t.rows) {
    RowReader r{t, row, problems};
    auto pollutant = r.required("pollutant");
    auto cat = category_cell(r);
    auto factor = r.number("factor");
    if (!pollutant || !cat || !factor) continue;
    if (r.text("unit") != category_unit_per_kg(*cat)) {
      r.error("unit mismatch: expected '" + category_unit_per_kg(*cat) + "', got '" + r.text("unit") + "'");
      continue;
    }
    const auto phase_text = lower(r.text("phase"));
    Phase phase = Phase::Air;
    if (phase_text == "water") {
      phase = Phase::Water;
    } else if (phase_text != "air") {
      r.error("phase must be 'air' or 'water'");
      continue;
    }
    const auto id = normalize_pollutant_id(*pollutant);
    if (auto [it, inserted] = b.pollutant_phases.emplace(id, phase); !inserted && it->second != phase) {
      r.error("pollutant " + id + " declared with two phases");
    }
    if (b.characterization.entries().count({id, *cat})) {
      r.error("duplicate characterization factor (" + id + ", " + std::string(to_string(*cat)) + ")");
      continue;
    }
    try {
      b.characterization.set(id, *cat, *factor);
    } catch (const ValidationError& e) {
      r.error(e.what());
    }
  }
}

void load_phi(const CsvTable& t, DatasetBundle& b, Problems& problems) {
  if (!t.require_columns({"category", "factor", "unit"}, problems)) return;
  for (const auto& row : t.rows) {
    RowReader r{t, row, problems};
    auto cat = category_cell(r);
    auto factor = r.number("factor");
    if (!cat || !factor) continue;
    const std::string expected = "species*yr/" + std::string(unit_label(*cat));
    if (r.text("unit") != expected) {
      r.error("unit mismatch: expected '" + expected + "', got '" + r.text("unit") + "'");
      continue;
    }
    try {
      b.endpoint.set(*cat, *factor);
      b.endpoint_rows[*cat] = r.text("source_row");
    } catch (const ValidationError& e) {
      r.error(e.what());
    }
  }
  try {
    b.endpoint.validate();
  } catch (const ConfigurationError& e) {
    problems.push_back(t.file + ": " + e.what());
  }
}

void load_fab_profiles(const CsvTable& t, DatasetBundle& b, Problems& problems) {
  if (!t.require_columns({"profile", "region", "unit_kind", "year", "quantity", "value", "unit"}, problems)) return;
  for (const auto& row : t.rows) {
    RowReader r{t, row, problems};
    auto id = r.required("profile");
    auto year = r.integer("year");
    if (!id || !year) continue;
    ProductionUnit kind;
    const auto kind_text = r.text("unit_kind");
    if (kind_text == "wafer-mask-layer") {
      kind = ProductionUnit::WaferMaskLayer;
    } else if (kind_text == "wafer") {
      kind = ProductionUnit::Wafer;
    } else {
      r.error("unit_kind must be 'wafer-mask-layer' or 'wafer'");
      continue;
    }
    auto [it, inserted] = b.fab_profiles.try_emplace(*id);
    auto& p = it->second;
    if (inserted) {
      p.id = *id;
      p.region = r.text("region");
      p.unit = kind;
    } else if (p.region != r.text("region") || p.unit != kind) {
      r.error("fab profile '" + *id + "' changes region or unit kind between rows");
      continue;
    }
    auto& fab_row = p.rows[*year];
    const auto quantity = r.text("quantity");
    if (quantity == "electricity") {
      if (auto v = per_unit_quantity(r, Dimension::Energy)) fab_row.kwh_per_unit = *v;
    } else if (auto v = per_unit_quantity(r, Dimension::Mass)) {
      if (*v < 0.0) {
        r.error("fab emission factor must be >= 0");
        continue;
      }
      fab_row.kg_per_unit[normalize_pollutant_id(quantity)] = *v;
    }
  }
}

void load_allocation(const CsvTable& t, DatasetBundle& b, Problems& problems) {
  if (!t.require_columns({"vendor", "region", "product", "year", "quantity", "value", "unit"}, problems)) return;
  struct VendorYear {
    std::string region;
    std::map<std::string, double> emissions;
    std::optional<double> electricity;
  };
  std::map<std::pair<std::string, int>, VendorYear> shared;
  std::map<std::tuple<std::string, DeviceClass, int>, AllocationInputs> specific;
  for (const auto& row : t.rows) {
    RowReader r{t, row, problems};
    auto vendor = r.required("vendor");
    auto year = r.integer("year");
    if (!vendor || !year) continue;
    const auto product_text = r.text("product");
    const auto quantity = r.text("quantity");
    std::optional<DeviceClass> product;
    if (product_text != "*") {
      product = parse_device_class(product_text);
      if (!product || !is_memory(*product)) {
        r.error("product must be DRAM, SSD or '*'");
        continue;
      }
    }
    if (quantity.rfind("emission:", 0) == 0 || quantity == "electricity") {
      const bool is_emission = quantity != "electricity";
      auto v = r.quantity("value", "unit", is_emission ? Dimension::Mass : Dimension::Energy);
      if (!v) continue;
      if (*v < 0.0) {
        r.error("annual totals must be >= 0");
        continue;
      }
      if (!product) {
        auto& vy = shared[{*vendor, *year}];
        vy.region = r.text("region");
        if (is_emission) {
          vy.emissions[normalize_pollutant_id(quantity.substr(9))] = *v;
        } else {
          vy.electricity = *v;
        }
        continue;
      }
      auto& a = specific[{*vendor, *product, *year}];
      if (is_emission) {
        a.annual_emission_kg[normalize_pollutant_id(quantity.substr(9))] = *v;
      } else {
        a.annual_electricity_kwh = *v;
      }
      continue;
    }
    if (!product) {
      r.error("'" + quantity + "' must name a product class");
      continue;
    }
    auto& a = specific[{*vendor, *product, *year}];
    a.vendor = *vendor;
    a.product = *product;
    a.year = *year;
    a.region = r.text("region");
    std::optional<double> v;
    if (quantity == "revenue_share" || quantity == "yield") {
      v = r.quantity("value", "unit", Dimension::Fraction);
      if (v) (quantity == "yield" ? a.yield : a.revenue_share) = *v;
    } else if (quantity == "wafer_capacity") {
      v = r.quantity("value", "unit", Dimension::Count);
      if (v) a.wafer_capacity_per_yr = *v;
    } else if (quantity == "bit_density") {
      v = r.quantity("value", "unit", Dimension::BitDensity);
      if (v) a.bit_density_gb_per_mm2 = *v;
    } else if (quantity == "wafer_area") {
      v = r.quantity("value", "unit", Dimension::Area);
      if (v) a.wafer_area_mm2 = *v;
    } else {
      r.error("unknown allocation quantity '" + quantity + "'");
    }
  }
  for (auto& [key, a] : specific) {
    const auto& [vendor, product, year] = key;
    a.vendor = vendor;
    a.product = product;
    a.year = year;
    if (auto it = shared.find({vendor, year}); it != shared.end()) {
      for (const auto& [k, v] : it->second.emissions) a.annual_emission_kg.try_emplace(k, v);
      if (a.annual_electricity_kwh == 0.0 && it->second.electricity) {
        a.annual_electricity_kwh = *it->second.electricity;
      }
      if (a.region.empty()) a.region = it->second.region;
    }
    try {
      a.validate();
    } catch (const ValidationError& e) {
      problems.push_back(t.file + ": " + e.what());
      continue;
    }
    b.allocations[{vendor, product}][year] = a;
  }
}

void load_hdd(const CsvTable& t, const tabular::Manifest& m, DatasetBundle& b, Problems& problems) {
  if (!t.require_columns({"class", "year", "category", "value", "unit"}, problems)) return;
  std::map<std::pair<std::string, int>, std::array<std::optional<double>, 3>> raw;
  std::map<std::pair<std::string, int>, std::string> where;
  for (const auto& row : t.rows) {
    RowReader r{t, row, problems};
    auto cls = r.required("class");
    auto year = r.integer("year");
    auto cat = category_cell(r);
    auto v = r.number("value");
    if (!cls || !year || !cat || !v) continue;
    if (r.text("unit") != unit_label(*cat)) {
      r.error("unit mismatch: expected '" + std::string(unit_label(*cat)) + "' per drive");
      continue;
    }
    raw[{*cls, *year}][static_cast<std::size_t>(*cat)] = *v;
    where[{*cls, *year}] = t.where(row);
  }
  for (const auto& [key, vals] : raw) {
    if (!vals[0] || !vals[1] || !vals[2]) {
      problems.push_back(where[key] + ": HDD score " + key.first + "/" + std::to_string(key.second) +
                         " must define AP, EP and FETP");
      continue;
    }
    if (auto v = make_vector({*vals[0], *vals[1], *vals[2]}, where[key], problems)) {
      b.hdd_scores.scores.emplace(key, *v);
    }
  }
  for (auto c : kCategories) {
    const auto key = "reduction_rate_" + std::string(to_string(c));
    if (auto text = m.get("hdd", key)) {
      auto v = parse_double(*text);
      if (!v || *v < 0.0 || *v >= 1.0) {
        problems.push_back("manifest: [hdd] " + key + " must lie in [0, 1)");
      } else {
        b.hdd_scores.annual_reduction[static_cast<std::size_t>(c)] = *v;
      }
    }
  }
}

void load_transport(const CsvTable& t, DatasetBundle& b, Problems& problems) {
  if (!t.require_columns({"mode", "year", "pollutant", "value", "unit"}, problems)) return;
  for (const auto& row : t.rows) {
    RowReader r{t, row, problems};
    auto mode = parse_transport_mode(r.text("mode"));
    if (!mode) {
      r.error("unknown transport mode '" + r.text("mode") + "'");
      continue;
    }
    auto year = r.integer("year");
    auto v = r.quantity("value", "unit", Dimension::MassPerTransport);
    auto pollutant = r.required("pollutant");
    if (!year || !v || !pollutant) continue;
    try {
      b.transport.set(*mode, *year, *pollutant, *v);
    } catch (const ValidationError& e) {
      r.error(e.what());
    }
  }
}

void load_eol(const CsvTable& t, DatasetBundle& b, Problems& problems) {
  if (!t.require_columns({"profile", "kind", "field", "category", "value", "unit"}, problems)) return;
  struct Mix {
    std::map<std::string, double> scalars;
    std::map<std::string, std::array<double, 3>> vectors;
    std::string where;
  };
  struct Proxy {
    std::optional<double> mass;
    std::array<std::optional<double>, 3> reference;
    std::string where;
  };
  std::map<std::string, Mix> mixes;
  std::map<std::string, Proxy> proxies;
  for (const auto& row : t.rows) {
    RowReader r{t, row, problems};
    auto id = r.required("profile");
    auto v = r.number("value");
    if (!id || !v) continue;
    const auto kind = r.text("kind");
    const auto field = r.text("field");
    if (kind == "proxy") {
      auto& p = proxies[*id];
      p.where = t.where(row);
      if (field == "reference_mass") {
        if (auto kg = r.quantity("value", "unit", Dimension::Mass)) p.mass = *kg;
      } else if (field == "reference") {
        auto cat = category_cell(r);
        if (!cat) continue;
        if (r.text("unit") != unit_label(*cat)) {
          r.error("unit mismatch: expected '" + std::string(unit_label(*cat)) + "'");
          continue;
        }
        p.reference[static_cast<std::size_t>(*cat)] = *v;
      } else {
        r.error("unknown proxy field '" + field + "'");
      }
    } else if (kind == "mix") {
      auto& mix = mixes[*id];
      mix.where = t.where(row);
      if (field == "recycle" || field == "incinerate" || field == "landfill") {
        if (auto f = r.quantity("value", "unit", Dimension::Fraction)) mix.scalars[field] = *f;
      } else if (field == "ash_yield") {
        if (auto f = r.quantity("value", "unit", Dimension::MassPerMass)) mix.scalars[field] = *f;
      } else if (field == "f_rec" || field == "f_inc" || field == "f_ash" || field == "f_land") {
        auto cat = category_cell(r);
        if (!cat) continue;
        if (r.text("unit") != category_unit_per_kg(*cat)) {
          r.error("unit mismatch: expected '" + category_unit_per_kg(*cat) + "'");
          continue;
        }
        mix.vectors[field][static_cast<std::size_t>(*cat)] = *v;
      } else {
        r.error("unknown mix field '" + field + "'");
      }
    } else {
      r.error("kind must be 'mix' or 'proxy'");
    }
  }
  for (const auto& [id, mix] : mixes) {
    EolProfile p;
    p.id = id;
    auto scalar = [&](const char* f) {
      auto it = mix.scalars.find(f);
      if (it == mix.scalars.end()) {
        problems.push_back(mix.where + ": EoL profile '" + id + "' lacks '" + f + "'");
        return 0.0;
      }
      return it->second;
    };
    p.recycle = scalar("recycle");
    p.incinerate = scalar("incinerate");
    p.landfill = scalar("landfill");
    p.ash_yield = mix.scalars.count("ash_yield") ? mix.scalars.at("ash_yield") : 0.0;
    auto vec = [&](const char* f) {
      auto it = mix.vectors.find(f);
      std::array<double, 3> v{0, 0, 0};
      if (it != mix.vectors.end()) v = it->second;
      return make_vector(v, mix.where, problems).value_or(MidpointVector{});
    };
    p.f_recycle = vec("f_rec");
    p.f_incinerate = vec("f_inc");
    p.f_ash = vec("f_ash");
    p.f_landfill = vec("f_land");
    try {
      p.validate();
      b.eol_profiles.emplace(id, p);
    } catch (const ValidationError& e) {
      problems.push_back(mix.where + ": " + e.what());
    }
  }
  for (const auto& [id, p] : proxies) {
    if (!p.mass || !p.reference[0] || !p.reference[1] || !p.reference[2]) {
      problems.push_back(p.where + ": mass proxy '" + id + "' needs reference_mass and AP/EP/FETP references");
      continue;
    }
    if (b.eol_profiles.count(id)) {
      problems.push_back(p.where + ": EoL id '" + id + "' used by both a mix and a proxy");
      continue;
    }
    auto ref = make_vector({*p.reference[0], *p.reference[1], *p.reference[2]}, p.where, problems);
    if (!ref) continue;
    try {
      b.mass_proxies.emplace(id, MassProxy(id, *ref, *p.mass));
    } catch (const ValidationError& e) {
      problems.push_back(p.where + ": " + e.what());
    }
  }
}

void load_systems(const CsvTable& t, DatasetBundle& b, Problems& problems) {
  if (!t.require_columns({"system", "region", "year", "device", "quantity", "unit"}, problems)) return;
  for (const auto& row : t.rows) {
    RowReader r{t, row, problems};
    auto id = r.required("system");
    auto year = r.integer("year");
    auto device = r.required("device");
    auto qty = r.number("quantity");
    if (!id || !year || !device || !qty) continue;
    auto& sys = b.systems[*id];
    if (sys.id.empty()) {
      sys.id = *id;
      sys.region = r.text("region");
      sys.year = *year;
    } else if (sys.region != r.text("region") || sys.year != *year) {
      r.error("system '" + *id + "' changes region or year between rows");
    }
    double count = 0.0;
    const auto unit = r.text("unit");
    if (unit == "count") {
      if (*qty < 1.0) {
        r.error("component count must be >= 1");
        continue;
      }
      count = *qty;
    } else {
      auto dev = b.devices.find(*device);
      if (dev == b.devices.end()) continue;  // reported by the reference check
      double cap = 0.0;
      try {
        cap = units::to_canonical(*qty, unit, Dimension::Capacity);
      } catch (const ValidationError& e) {
        r.error(std::string("unit mismatch: ") + e.what());
        continue;
      }
      if (!(dev->second.spec.capacity_gb > 0.0) || !(cap > 0.0)) {
        r.error("capacity quantity needs a storage/memory device and a positive amount");
        continue;
      }
      count = cap / dev->second.spec.capacity_gb;
    }
    sys.components.push_back({*device, count});
  }
  for (auto& [id, sys] : b.systems) {
    std::sort(sys.components.begin(), sys.components.end(),
              [](const Component& a, const Component& c) { return a.device < c.device; });
  }
}

// ---------------------------------------------------------------------------
// Manifest

void load_manifest(const tabular::Manifest& m, DatasetBundle& b, Problems& problems) {
  b.name = m.get("bundle", "name").value_or("");
  b.edition = m.get("bundle", "edition").value_or("");
  if (b.name.empty()) problems.emplace_back("manifest: [bundle] name is required");
  auto& d = b.defaults;
  auto num = [&](const char* key, double& out) {
    if (auto text = m.get("defaults", key)) {
      if (auto v = parse_double(*text)) {
        out = *v;
      } else {
        problems.push_back(std::string("manifest: [defaults] ") + key + " is not a number");
      }
    }
  };
  num("wafer_diameter_mm", d.wafer_diameter_mm);
  num("yield", d.yield);
  num("lifetime_h", d.lifetime_h);
  num("idle_fraction", d.idle_fraction);
  num("duty", d.duty);
  num("pue", d.pue);
  double window = d.year_window;
  num("year_window", window);
  d.year_window = static_cast<int>(window);
  if (auto r = m.get("defaults", "region")) d.region = *r;
  if (auto e = m.get("defaults", "eol_profile")) d.eol_profile = *e;
  if (auto legs = m.get("defaults", "transport_legs")) {
    try {
      d.transport_legs = parse_legs(*legs);
    } catch (const ValidationError& e) {
      problems.push_back(std::string("manifest: [defaults] transport_legs: ") + e.what());
    }
  }
  if (!(d.wafer_diameter_mm > 0.0)) problems.emplace_back("manifest: wafer_diameter_mm must be > 0");
  if (!(d.yield > 0.0 && d.yield <= 1.0)) problems.emplace_back("manifest: yield must lie in (0, 1]");
  if (!(d.lifetime_h > 0.0)) problems.emplace_back("manifest: lifetime_h must be > 0");
  if (!(d.idle_fraction >= 0.0 && d.idle_fraction <= 1.0)) problems.emplace_back("manifest: idle_fraction must lie in [0, 1]");
  if (!(d.duty >= 0.0 && d.duty <= 1.0)) problems.emplace_back("manifest: duty must lie in [0, 1]");
  if (!(d.pue >= 1.0)) problems.emplace_back("manifest: pue must be >= 1.0");
  if (d.year_window < 0) problems.emplace_back("manifest: year_window must be >= 0");

  for (auto name : kBundleTables) {
    const std::string section = "table." + std::string(name);
    TableInfo info;
    info.file = m.get(section, "file").value_or(std::string(name) + ".csv");
    info.provenance.source = m.get(section, "source").value_or("");
    info.provenance.year = m.get(section, "year").value_or("");
    info.provenance.note = m.get(section, "note").value_or("");
    if (info.provenance.source.empty() || info.provenance.year.empty() || info.provenance.note.empty()) {
      problems.push_back("manifest: [" + section + "] must declare source, year and note");
    }
    b.tables[std::string(name)] = info;
  }
  b.characterization.set_provenance(b.tables["gamma"].provenance);
  b.endpoint = EndpointTable(m.get("table.phi", "model").value_or("unspecified"));
  b.endpoint.set_provenance(b.tables["phi"].provenance);
}

// ---------------------------------------------------------------------------
// Cross-reference checks

void check_references(const DatasetBundle& b, Problems& problems) {
  auto need_region = [&](const std::string& region, const std::string& who) {
    if (!region.empty() && !b.grids.has_region(region)) {
      problems.push_back(who + " references unknown grid region '" + region + "'");
    }
  };
  auto has_allocation = [&](const std::string& vendor, DeviceClass product) {
    return b.allocations.count({vendor, product}) > 0;
  };
  need_region(b.defaults.region, "manifest default");
  for (const auto& [id, p] : b.fab_profiles) need_region(p.region, "fab profile '" + id + "'");
  for (const auto& [key, by_year] : b.allocations) {
    for (const auto& [y, a] : by_year) need_region(a.region, "allocation '" + key.first + "'");
  }
  const auto& default_eol = b.defaults.eol_profile;
  if (default_eol.empty()) {
    problems.emplace_back("manifest: [defaults] eol_profile is required");
  } else if (!b.eol_profiles.count(default_eol) && !b.mass_proxies.count(default_eol)) {
    problems.push_back("manifest: default EoL profile '" + default_eol + "' is not defined");
  }
  for (const auto& [id, e] : b.devices) {
    const auto& s = e.spec;
    const std::string who = "device '" + id + "'";
    if (is_logic(s.cls)) {
      auto it = b.fab_profiles.find(s.fab_profile);
      if (it == b.fab_profiles.end()) {
        problems.push_back(who + " references missing fab profile '" + s.fab_profile + "'");
      } else if (it->second.unit != ProductionUnit::WaferMaskLayer) {
        problems.push_back(who + ": fab profile '" + s.fab_profile + "' is not per wafer-mask-layer");
      }
      if (s.hbm_capacity_gb > 0.0 && !has_allocation(s.hbm_profile, DeviceClass::DRAM)) {
        problems.push_back(who + " references missing HBM allocation '" + s.hbm_profile + "'");
      }
    } else if (is_memory(s.cls)) {
      if (!has_allocation(s.fab_profile, s.cls)) {
        problems.push_back(who + " references missing fab profile/allocation '" + s.fab_profile + "'");
      }
    } else {
      const auto cls = s.score_class.empty() ? s.id : s.score_class;
      if (b.hdd_scores.years(cls).empty()) {
        problems.push_back(who + " references missing HDD score class '" + cls + "'");
      }
    }
    need_region(s.fab_region, who);
    if (!s.eol_profile.empty() && !b.eol_profiles.count(s.eol_profile) &&
        !b.mass_proxies.count(s.eol_profile)) {
      problems.push_back(who + " references missing EoL profile '" + s.eol_profile + "'");
    }
  }
  for (const auto& [id, sys] : b.systems) {
    const std::string who = "system '" + id + "'";
    need_region(sys.region, who);
    if (sys.components.empty()) problems.push_back(who + " has no components");
    for (const auto& c : sys.components) {
      if (!b.devices.count(c.device)) {
        problems.push_back(who + " references missing device '" + c.device + "'");
      }
    }
  }
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string opt_num(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

// ---------------------------------------------------------------------------

ManufacturingContext DatasetBundle::manufacturing_context() const {
  ManufacturingContext ctx;
  ctx.fab_profiles = &fab_profiles;
  ctx.allocations = &allocations;
  ctx.hdd_scores = &hdd_scores;
  ctx.grids = &grids;
  ctx.characterization = &characterization;
  ctx.wafer.diameter_mm = defaults.wafer_diameter_mm;
  ctx.default_yield = defaults.yield;
  ctx.year_window = defaults.year_window;
  return ctx;
}

const DeviceRegistryEntry& DatasetBundle::device(const std::string& id) const {
  auto it = devices.find(id);
  if (it != devices.end()) return it->second;
  std::vector<std::string> ids;
  for (const auto& [k, _] : devices) ids.push_back(k);
  throw ResolutionError("unknown device '" + id + "'", ids);
}

const SystemSpec& DatasetBundle::system(const std::string& id) const {
  auto it = systems.find(id);
  if (it != systems.end()) return it->second;
  std::vector<std::string> ids;
  for (const auto& [k, _] : systems) ids.push_back(k);
  throw ResolutionError("unknown system '" + id + "'", ids);
}

DatasetBundle load_bundle(const fs::path& dir) {
  Problems problems;
  DatasetBundle b;
  const auto manifest_path = dir / "manifest";
  if (!fs::is_regular_file(manifest_path)) {
    throw DatasetError({"bundle '" + dir.string() + "' has no manifest file"});
  }
  const auto manifest = tabular::parse_manifest(read_file(manifest_path), "manifest", problems);
  load_manifest(manifest, b, problems);

  auto table = [&](std::string_view name) -> std::optional<CsvTable> {
    const auto path = dir / b.tables[std::string(name)].file;
    if (!fs::is_regular_file(path)) {
      problems.push_back("missing table file " + path.filename().string());
      return std::nullopt;
    }
    return tabular::read_csv(path);
  };
  // Grids and the manifest come first: other tables resolve against them.
  if (auto t = table("grids")) load_grids(*t, b, problems);
  if (auto t = table("gamma")) load_gamma(*t, b, problems);
  if (auto t = table("phi")) load_phi(*t, b, problems);
  if (auto t = table("fab_profiles")) load_fab_profiles(*t, b, problems);
  if (auto t = table("allocation")) load_allocation(*t, b, problems);
  if (auto t = table("hdd_scores")) load_hdd(*t, manifest, b, problems);
  if (auto t = table("transport")) load_transport(*t, b, problems);
  if (auto t = table("eol")) load_eol(*t, b, problems);
  if (auto t = table("devices")) load_devices(*t, b, problems);
  if (auto t = table("systems")) load_systems(*t, b, problems);
  check_references(b, problems);
  if (!problems.empty()) throw DatasetError(std::move(problems));
  b.version = content_hash(b);
  return b;
}

FlatTables flatten(const DatasetBundle& b) {
  FlatTables out;
  auto& meta = out["manifest"];
  meta["bundle/name"] = b.name;
  meta["bundle/edition"] = b.edition;
  const auto& d = b.defaults;
  meta["defaults/region"] = d.region;
  meta["defaults/wafer_diameter_mm"] = format_double(d.wafer_diameter_mm);
  meta["defaults/yield"] = format_double(d.yield);
  meta["defaults/lifetime_h"] = format_double(d.lifetime_h);
  meta["defaults/idle_fraction"] = format_double(d.idle_fraction);
  meta["defaults/duty"] = format_double(d.duty);
  meta["defaults/pue"] = format_double(d.pue);
  meta["defaults/year_window"] = std::to_string(d.year_window);
  meta["defaults/transport_legs"] = format_legs(d.transport_legs);
  meta["defaults/eol_profile"] = d.eol_profile;
  meta["phi/model"] = b.endpoint.model_tag();
  for (auto c : kCategories) {
    meta["hdd/reduction_rate_" + std::string(to_string(c))] =
        format_double(b.hdd_scores.annual_reduction[static_cast<std::size_t>(c)]);
  }
  for (const auto& [name, info] : b.tables) {
    meta["table." + name + "/file"] = info.file;
    meta["table." + name + "/source"] = info.provenance.source;
    meta["table." + name + "/year"] = info.provenance.year;
    meta["table." + name + "/note"] = info.provenance.note;
  }

  auto& dev = out["devices"];
  for (const auto& [id, e] : b.devices) {
    const auto& s = e.spec;
    const std::string k = id + "/";
    dev[k + "class"] = std::string(to_string(s.cls));
    dev[k + "vendor"] = s.vendor;
    dev[k + "year"] = std::to_string(s.year);
    dev[k + "node"] = s.node_label;
    dev[k + "die_mm2"] = format_double(s.die_size_mm2);
    dev[k + "hbm_gb"] = format_double(s.hbm_capacity_gb);
    dev[k + "capacity_gb"] = format_double(s.capacity_gb);
    dev[k + "mass_kg"] = format_double(s.mass_kg);
    dev[k + "shipping_mass_kg"] = format_double(e.shipping_mass_kg);
    dev[k + "tdp_w"] = format_double(s.tdp_w);
    dev[k + "idle_w"] = opt_num(s.idle_power_w);
    dev[k + "lifetime_h"] = format_double(s.lifetime_h);
    dev[k + "fp64_tflops"] = format_double(e.fp64_tflops);
    dev[k + "deploy_year"] = std::to_string(e.deploy_year);
    dev[k + "yield"] = opt_num(s.yield);
    dev[k + "fab_profile"] = s.fab_profile;
    dev[k + "hbm_profile"] = s.hbm_profile;
    dev[k + "fab_region"] = s.fab_region;
    dev[k + "score_class"] = s.score_class;
    dev[k + "eol_profile"] = s.eol_profile;
    dev[k + "transport_legs"] = s.transport_legs ? format_legs(*s.transport_legs) : "";
  }

  auto& grids = out["grids"];
  for (const auto& [region, by_year] : b.grids.grids()) {
    for (const auto& [year, g] : by_year) {
      const auto k = region + "/" + std::to_string(year) + "/";
      for (const auto& [p, v] : g.kg_per_kwh) grids[k + p] = format_double(v);
      if (g.co2_kg_per_kwh) grids[k + "CO2"] = format_double(*g.co2_kg_per_kwh);
    }
  }

  auto& gamma = out["gamma"];
  for (const auto& [key, v] : b.characterization.entries()) {
    gamma[key.first + "/" + std::string(to_string(key.second))] = format_double(v);
  }
  for (const auto& [p, phase] : b.pollutant_phases) {
    gamma[p + "/phase"] = phase == Phase::Air ? "air" : "water";
  }

  auto& phi = out["phi"];
  for (auto c : kCategories) {
    phi[std::string(to_string(c))] = b.endpoint.complete() ? format_double(b.endpoint.factor(c)) : "";
    auto it = b.endpoint_rows.find(c);
    phi[std::string(to_string(c)) + "/source_row"] = it == b.endpoint_rows.end() ? "" : it->second;
  }

  auto& fab = out["fab_profiles"];
  for (const auto& [id, p] : b.fab_profiles) {
    fab[id + "/region"] = p.region;
    fab[id + "/unit_kind"] = std::string(to_string(p.unit));
    for (const auto& [year, row] : p.rows) {
      const auto k = id + "/" + std::to_string(year) + "/";
      fab[k + "electricity"] = format_double(row.kwh_per_unit);
      for (const auto& [pol, v] : row.kg_per_unit) fab[k + pol] = format_double(v);
    }
  }

  auto& alloc = out["allocation"];
  for (const auto& [key, by_year] : b.allocations) {
    for (const auto& [year, a] : by_year) {
      const auto k = key.first + "/" + std::string(to_string(key.second)) + "/" + std::to_string(year) + "/";
      alloc[k + "region"] = a.region;
      alloc[k + "revenue_share"] = format_double(a.revenue_share);
      alloc[k + "wafer_capacity"] = format_double(a.wafer_capacity_per_yr);
      alloc[k + "bit_density"] = format_double(a.bit_density_gb_per_mm2);
      alloc[k + "wafer_area"] = format_double(a.wafer_area_mm2);
      alloc[k + "yield"] = format_double(a.yield);
      alloc[k + "electricity"] = format_double(a.annual_electricity_kwh);
      for (const auto& [pol, v] : a.annual_emission_kg) alloc[k + "emission:" + pol] = format_double(v);
    }
  }

  auto& hdd = out["hdd_scores"];
  for (const auto& [key, v] : b.hdd_scores.scores) {
    const auto k = key.first + "/" + std::to_string(key.second) + "/";
    for (auto c : kCategories) hdd[k + std::string(to_string(c))] = format_double(v[c]);
  }

  auto& tr = out["transport"];
  for (const auto& [mode, by_year] : b.transport.entries()) {
    for (const auto& [year, row] : by_year) {
      for (const auto& [pol, v] : row) {
        tr[std::string(to_string(mode)) + "/" + std::to_string(year) + "/" + pol] = format_double(v);
      }
    }
  }

  auto& eol = out["eol"];
  for (const auto& [id, p] : b.eol_profiles) {
    eol[id + "/recycle"] = format_double(p.recycle);
    eol[id + "/incinerate"] = format_double(p.incinerate);
    eol[id + "/landfill"] = format_double(p.landfill);
    eol[id + "/ash_yield"] = format_double(p.ash_yield);
    const std::array<std::pair<const char*, const MidpointVector*>, 4> vecs = {{
        {"f_rec", &p.f_recycle}, {"f_inc", &p.f_incinerate}, {"f_ash", &p.f_ash}, {"f_land", &p.f_landfill}}};
    for (const auto& [name, vec] : vecs) {
      for (auto c : kCategories) {
        eol[id + "/" + name + "/" + std::string(to_string(c))] = format_double((*vec)[c]);
      }
    }
  }
  for (const auto& [id, p] : b.mass_proxies) {
    eol[id + "/reference_mass"] = format_double(p.reference_mass_kg());
    for (auto c : kCategories) {
      eol[id + "/reference/" + std::string(to_string(c))] = format_double(p.reference()[c]);
    }
  }

  auto& sys = out["systems"];
  for (const auto& [id, s] : b.systems) {
    sys[id + "/region"] = s.region;
    sys[id + "/year"] = std::to_string(s.year);
    for (const auto& c : s.components) sys[id + "/" + c.device] = format_double(c.count);
  }
  return out;
}

std::string content_hash(const DatasetBundle& b) {
  std::string canonical;
  for (const auto& [table, entries] : flatten(b)) {
    for (const auto& [key, value] : entries) {
      canonical += table;
      canonical.push_back('\x1f');
      canonical += key;
      canonical.push_back('\x1f');
      canonical += value;
      canonical.push_back('\n');
    }
  }
  return sha256_hex(canonical);
}

std::string_view to_string(DiffEntry::Kind k) {
  switch (k) {
    case DiffEntry::Kind::Added: return "added";
    case DiffEntry::Kind::Removed: return "removed";
    case DiffEntry::Kind::Changed: return "changed";
  }
  return "?";
}

std::vector<DiffEntry> diff_bundles(const DatasetBundle& a, const DatasetBundle& b) {
  const auto fa = flatten(a);
  const auto fb = flatten(b);
  std::set<std::string> tables;
  for (const auto& [t, _] : fa) tables.insert(t);
  for (const auto& [t, _] : fb) tables.insert(t);
  static const std::map<std::string, std::string> kEmpty;
  std::vector<DiffEntry> out;
  for (const auto& t : tables) {
    const auto& ea = fa.count(t) ? fa.at(t) : kEmpty;
    const auto& eb = fb.count(t) ? fb.at(t) : kEmpty;
    for (const auto& [k, v] : ea) {
      auto it = eb.find(k);
      if (it == eb.end()) {
        out.push_back({t, k, DiffEntry::Kind::Removed, v, ""});
      } else if (it->second != v) {
        out.push_back({t, k, DiffEntry::Kind::Changed, v, it->second});
      }
    }
    for (const auto& [k, v] : eb) {
      if (!ea.count(k)) out.push_back({t, k, DiffEntry::Kind::Added, "", v});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical writer

void write_bundle(const DatasetBundle& b, const fs::path& dir) {
  fs::create_directories(dir);
  auto open = [&](const std::string& file) {
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + (dir / file).string());
    return out;
  };
  auto file_of = [&](const char* name) {
    auto it = b.tables.find(name);
    return it == b.tables.end() ? std::string(name) + ".csv" : it->second.file;
  };
  using tabular::csv_line;
  const auto q = [](const std::string& s) { return "\"" + s + "\""; };

  {
    auto out = open("manifest");
    const auto& d = b.defaults;
    out << "[bundle]\nname = " << q(b.name) << "\nedition = " << q(b.edition) << "\n\n";
    out << "[defaults]\nregion = " << q(d.region) << "\nwafer_diameter_mm = " << format_double(d.wafer_diameter_mm)
        << "\nyield = " << format_double(d.yield) << "\nlifetime_h = " << format_double(d.lifetime_h)
        << "\nidle_fraction = " << format_double(d.idle_fraction) << "\nduty = " << format_double(d.duty)
        << "\npue = " << format_double(d.pue) << "\nyear_window = " << d.year_window
        << "\ntransport_legs = " << q(format_legs(d.transport_legs)) << "\neol_profile = " << q(d.eol_profile)
        << "\n\n[hdd]\n";
    for (auto c : kCategories) {
      out << "reduction_rate_" << to_string(c) << " = "
          << format_double(b.hdd_scores.annual_reduction[static_cast<std::size_t>(c)]) << "\n";
    }
    for (const auto& [name, info] : b.tables) {
      out << "\n[table." << name << "]\nfile = " << q(info.file) << "\nsource = " << q(info.provenance.source)
          << "\nyear = " << q(info.provenance.year) << "\nnote = " << q(info.provenance.note) << "\n";
      if (name == "phi") out << "model = " << q(b.endpoint.model_tag()) << "\n";
    }
  }
  {
    auto out = open(file_of("devices"));
    out << "id,class,vendor,year,node,die_mm2,hbm_gb,capacity,capacity_unit,mass_kg,shipping_mass_kg,tdp_w,"
           "idle_w,lifetime_h,fp64_tflops,deploy_year,yield,fab_profile,hbm_profile,fab_region,score_class,"
           "eol_profile,transport_legs\n";
    for (const auto& [id, e] : b.devices) {
      const auto& s = e.spec;
      out << csv_line({id, std::string(to_string(s.cls)), s.vendor, std::to_string(s.year), s.node_label,
                       format_double(s.die_size_mm2), format_double(s.hbm_capacity_gb),
                       format_double(s.capacity_gb), "GB", format_double(s.mass_kg),
                       format_double(e.shipping_mass_kg), format_double(s.tdp_w), opt_num(s.idle_power_w),
                       format_double(s.lifetime_h), format_double(e.fp64_tflops), std::to_string(e.deploy_year),
                       opt_num(s.yield), s.fab_profile, s.hbm_profile, s.fab_region, s.score_class,
                       s.eol_profile, s.transport_legs ? format_legs(*s.transport_legs) : ""})
          << "\n";
    }
  }
  {
    auto out = open(file_of("grids"));
    out << "region,year,pollutant,value,unit\n";
    for (const auto& [region, by_year] : b.grids.grids()) {
      for (const auto& [year, g] : by_year) {
        for (const auto& [p, v] : g.kg_per_kwh) {
          out << csv_line({region, std::to_string(year), p, format_double(v), "kg/kWh"}) << "\n";
        }
        if (g.co2_kg_per_kwh) {
          out << csv_line({region, std::to_string(year), "CO2", format_double(*g.co2_kg_per_kwh), "kg/kWh"}) << "\n";
        }
      }
    }
  }
  {
    auto out = open(file_of("gamma"));
    out << "pollutant,phase,category,factor,unit\n";
    for (const auto& [key, v] : b.characterization.entries()) {
      auto ph = b.pollutant_phases.find(key.first);
      const std::string phase = ph != b.pollutant_phases.end() && ph->second == Phase::Water ? "water" : "air";
      out << csv_line({key.first, phase, std::string(to_string(key.second)), format_double(v),
                       category_unit_per_kg(key.second)})
          << "\n";
    }
  }
  {
    auto out = open(file_of("phi"));
    out << "category,factor,unit,source_row\n";
    for (auto c : kCategories) {
      auto it = b.endpoint_rows.find(c);
      out << csv_line({std::string(to_string(c)), format_double(b.endpoint.factor(c)),
                       "species*yr/" + std::string(unit_label(c)), it == b.endpoint_rows.end() ? "" : it->second})
          << "\n";
    }
  }
  {
    auto out = open(file_of("fab_profiles"));
    out << "profile,region,unit_kind,year,quantity,value,unit\n";
    for (const auto& [id, p] : b.fab_profiles) {
      const std::string kind(to_string(p.unit));
      for (const auto& [year, row] : p.rows) {
        out << csv_line({id, p.region, kind, std::to_string(year), "electricity", format_double(row.kwh_per_unit),
                         "kWh/unit"})
            << "\n";
        for (const auto& [pol, v] : row.kg_per_unit) {
          out << csv_line({id, p.region, kind, std::to_string(year), pol, format_double(v), "kg/unit"}) << "\n";
        }
      }
    }
  }
  {
    auto out = open(file_of("allocation"));
    out << "vendor,region,product,year,quantity,value,unit\n";
    for (const auto& [key, by_year] : b.allocations) {
      const std::string product(to_string(key.second));
      for (const auto& [year, a] : by_year) {
        const auto y = std::to_string(year);
        auto line = [&](const std::string& qty, double v, const char* unit) {
          out << csv_line({key.first, a.region, product, y, qty, format_double(v), unit}) << "\n";
        };
        line("revenue_share", a.revenue_share, "fraction");
        line("wafer_capacity", a.wafer_capacity_per_yr, "wafer/yr");
        line("bit_density", a.bit_density_gb_per_mm2, "Gb/mm2");
        line("wafer_area", a.wafer_area_mm2, "mm2");
        line("yield", a.yield, "fraction");
        line("electricity", a.annual_electricity_kwh, "kWh");
        for (const auto& [pol, v] : a.annual_emission_kg) line("emission:" + pol, v, "kg");
      }
    }
  }
  {
    auto out = open(file_of("hdd_scores"));
    out << "class,year,category,value,unit\n";
    for (const auto& [key, v] : b.hdd_scores.scores) {
      for (auto c : kCategories) {
        out << csv_line({key.first, std::to_string(key.second), std::string(to_string(c)), format_double(v[c]),
                         std::string(unit_label(c))})
            << "\n";
      }
    }
  }
  {
    auto out = open(file_of("transport"));
    out << "mode,year,pollutant,value,unit\n";
    for (const auto& [mode, by_year] : b.transport.entries()) {
      for (const auto& [year, row] : by_year) {
        for (const auto& [pol, v] : row) {
          out << csv_line({std::string(to_string(mode)), std::to_string(year), pol, format_double(v), "kg/tkm"})
              << "\n";
        }
      }
    }
  }
  {
    auto out = open(file_of("eol"));
    out << "profile,kind,field,category,value,unit\n";
    for (const auto& [id, p] : b.eol_profiles) {
      out << csv_line({id, "mix", "recycle", "", format_double(p.recycle), "fraction"}) << "\n";
      out << csv_line({id, "mix", "incinerate", "", format_double(p.incinerate), "fraction"}) << "\n";
      out << csv_line({id, "mix", "landfill", "", format_double(p.landfill), "fraction"}) << "\n";
      out << csv_line({id, "mix", "ash_yield", "", format_double(p.ash_yield), "kg/kg"}) << "\n";
      const std::array<std::pair<const char*, const MidpointVector*>, 4> vecs = {{
          {"f_rec", &p.f_recycle}, {"f_inc", &p.f_incinerate}, {"f_ash", &p.f_ash}, {"f_land", &p.f_landfill}}};
      for (const auto& [name, vec] : vecs) {
        for (auto c : kCategories) {
          out << csv_line({id, "mix", name, std::string(to_string(c)), format_double((*vec)[c]),
                           category_unit_per_kg(c)})
              << "\n";
        }
      }
    }
    for (const auto& [id, p] : b.mass_proxies) {
      out << csv_line({id, "proxy", "reference_mass", "", format_double(p.reference_mass_kg()), "kg"}) << "\n";
      for (auto c : kCategories) {
        out << csv_line({id, "proxy", "reference", std::string(to_string(c)), format_double(p.reference()[c]),
                         std::string(unit_label(c))})
            << "\n";
      }
    }
  }
  {
    auto out = open(file_of("systems"));
    out << "system,region,year,device,quantity,unit\n";
    for (const auto& [id, s] : b.systems) {
      for (const auto& c : s.components) {
        // Fractional counts were given as capacities; write them back as such.
        const auto& spec = b.devices.at(c.device).spec;
        if (c.count < 1.0 || (c.count != static_cast<double>(static_cast<long long>(c.count)) && spec.capacity_gb > 0.0)) {
          out << csv_line({id, s.region, std::to_string(s.year), c.device, format_double(c.count * spec.capacity_gb), "GB"})
              << "\n";
        } else {
          out << csv_line({id, s.region, std::to_string(s.year), c.device, format_double(c.count), "count"}) << "\n";
        }
      }
    }
  }
}

}  // namespace fabric
