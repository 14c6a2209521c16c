#include "fabric/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fabric/error.hpp"
#include "fabric/units.hpp"
#include "tabular.hpp"

namespace fabric {
namespace {

using tabular::parse_double;
using tabular::parse_int;
using tabular::trim;

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : std::string(sep)) + s;
  return out;
}

}  // namespace

std::vector<Component> parse_components(std::string_view text, const DatasetBundle& bundle) {
  std::vector<Component> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto item = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) continue;
    const auto colon = item.find(':');
    const std::string id(trim(item.substr(0, colon)));
    const auto& entry = bundle.device(id);
    if (colon == std::string_view::npos) {
      out.push_back({id, 1.0});
      continue;
    }
    auto qty_text = trim(item.substr(colon + 1));
    const auto space = qty_text.find_first_of(" \t");
    const auto number = parse_double(qty_text.substr(0, space));
    if (!number || *number < 0.0) throw ValidationError("bad quantity in component '" + std::string(item) + "'");
    if (space == std::string_view::npos) {
      out.push_back({id, *number});
      continue;
    }
    const auto unit = trim(qty_text.substr(space));
    if (!(entry.spec.capacity_gb > 0.0)) {
      throw ValidationError("component '" + id + "' has no capacity; give a plain count");
    }
    const double gb = units::to_canonical(*number, unit, units::Dimension::Capacity);
    out.push_back({id, gb / entry.spec.capacity_gb});
  }
  return out;
}

Scenario parse_scenario(std::string_view text, const std::string& label, const DatasetBundle& bundle) {
  tabular::Problems problems;
  const auto m = tabular::parse_manifest(text, label, problems);
  Scenario s;
  s.name = m.get("scenario", "name").value_or(label);

  auto number = [&](const std::string& section, const std::string& key) -> std::optional<double> {
    auto v = m.get(section, key);
    if (!v) return std::nullopt;
    auto d = parse_double(*v);
    if (!d) problems.push_back(label + ": [" + section + "] " + key + " is not a number");
    return d;
  };

  const auto kind = m.get("scenario", "kind").value_or("");
  if (kind == "device") {
    s.kind = SubjectKind::Device;
  } else if (kind == "system") {
    s.kind = SubjectKind::System;
  } else if (kind == "fleet") {
    s.kind = SubjectKind::Fleet;
  } else if (kind == "workload") {
    s.kind = SubjectKind::Workload;
  } else {
    problems.push_back(label + ": [scenario] kind must be device, system, fleet or workload");
  }
  s.subject = m.get("scenario", "subject").value_or("");
  s.baseline = m.get("scenario", "baseline").value_or("");

  auto& cfg = s.config;
  if (auto r = m.get("scenario", "region")) {
    if (!bundle.grids.has_region(*r)) {
      problems.push_back(label + ": unknown region '" + *r + "' (available: " + join(bundle.grids.regions(), ", ") + ")");
    }
    cfg.region = *r;
  }
  if (auto y = m.get("scenario", "year")) {
    if (auto i = parse_int(*y)) {
      cfg.year = *i;
    } else {
      problems.push_back(label + ": [scenario] year is not an integer");
    }
  }
  cfg.duty = number("scenario", "duty");
  if (cfg.duty && !(*cfg.duty >= 0.0 && *cfg.duty <= 1.0)) problems.push_back(label + ": duty must lie in [0, 1]");
  s.years = number("scenario", "years");
  if (s.years && !(*s.years > 0.0)) problems.push_back(label + ": years must be > 0");
  if (auto c = number("scenario", "count")) {
    if (*c < 0.0) problems.push_back(label + ": count must be >= 0");
    s.count = *c;
  }
  // Overrides follow the bundle's own validation rules.
  cfg.pue = number("overrides", "pue");
  if (cfg.pue && !(*cfg.pue >= 1.0)) problems.push_back(label + ": pue must be >= 1.0");
  cfg.lifetime_h = number("overrides", "lifetime_h");
  if (cfg.lifetime_h && !(*cfg.lifetime_h > 0.0)) problems.push_back(label + ": lifetime_h must be > 0");
  if (auto legs = m.get("overrides", "transport_legs")) {
    try {
      cfg.transport_legs = parse_legs(*legs);
    } catch (const ValidationError& e) {
      problems.push_back(label + ": transport_legs: " + e.what());
    }
  }

  for (const auto& [section, keys] : m.sections) {
    if (section.rfind("workload.", 0) != 0) continue;
    WorkloadRecord w;
    w.id = section.substr(9);
    w.region = cfg.region.value_or("");
    w.year = cfg.year.value_or(0);
    try {
      w.devices = parse_components(m.get(section, "devices").value_or(""), bundle);
    } catch (const Error& e) {
      problems.push_back(label + ": [" + section + "] " + e.what());
    }
    if (w.devices.empty()) problems.push_back(label + ": [" + section + "] needs devices");
    w.hours = number(section, "hours").value_or(-1.0);
    if (!(w.hours >= 0.0)) problems.push_back(label + ": [" + section + "] hours must be >= 0");
    w.energy_kwh = number(section, "energy_kwh");
    if (w.energy_kwh && *w.energy_kwh < 0.0) problems.push_back(label + ": [" + section + "] energy must be >= 0");
    w.duty = number(section, "duty");
    w.throughput = number(section, "throughput").value_or(0.0);
    w.throughput_unit = m.get(section, "throughput_unit").value_or("unit");
    if (w.year == 0) {
      // Default the grid year to the newest device in the workload.
      for (const auto& c : w.devices) w.year = std::max(w.year, bundle.device(c.device).deploy_year);
    }
    s.workloads.push_back(std::move(w));
  }

  if (s.kind == SubjectKind::Workload) {
    if (s.workloads.empty()) problems.push_back(label + ": workload scenario defines no [workload.<id>] sections");
    if (s.baseline.empty()) problems.push_back(label + ": workload scenario needs a baseline");
  } else if (s.subject.empty()) {
    problems.push_back(label + ": [scenario] subject is required");
  } else {
    try {
      if (s.kind == SubjectKind::Device) {
        bundle.device(s.subject);
      } else {
        bundle.system(s.subject);
      }
    } catch (const ResolutionError& e) {
      problems.push_back(label + ": " + e.what());
    }
  }
  if (!problems.empty()) throw ValidationError(join(problems, "; "));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, const DatasetBundle& bundle) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scenario " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.filename().string(), bundle);
}

WorkloadComparison compare_workloads(const Engine& engine, const Scenario& scenario) {
  WorkloadComparison out;
  out.baseline = scenario.baseline;
  const WorkloadRecord* base = nullptr;
  std::vector<std::string> ids;
  for (const auto& w : scenario.workloads) {
    ids.push_back(w.id);
    if (w.id == scenario.baseline) base = &w;
  }
  if (!base) throw ResolutionError("baseline '" + scenario.baseline + "' is not a workload in the scenario", ids);

  auto row_for = [&](const WorkloadRecord& w) {
    if (!(w.throughput > 0.0)) throw ValidationError("workload '" + w.id + "' needs throughput > 0");
    WorkloadComparisonRow row;
    row.report = engine.workload_report(w);
    row.throughput = w.throughput;
    row.impact_per_unit = row.report.lifecycle / w.throughput;
    row.energy_per_unit = row.report.energy_kwh / w.throughput;
    return row;
  };
  const auto base_row = row_for(*base);
  const double base_rate = base->hours > 0.0 ? base->throughput / base->hours : 0.0;
  for (const auto& w : scenario.workloads) {
    auto row = w.id == base->id ? base_row : row_for(w);
    row.impact_ratio = base_row.impact_per_unit > 0.0 ? row.impact_per_unit / base_row.impact_per_unit : 0.0;
    row.energy_ratio = base_row.energy_per_unit > 0.0 ? row.energy_per_unit / base_row.energy_per_unit : 0.0;
    const double rate = w.hours > 0.0 ? w.throughput / w.hours : 0.0;
    row.throughput_ratio = base_rate > 0.0 ? rate / base_rate : 0.0;
    out.rows.push_back(std::move(row));
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const auto& a, const auto& b) { return a.report.subject < b.report.subject; });
  return out;
}

}  // namespace fabric
