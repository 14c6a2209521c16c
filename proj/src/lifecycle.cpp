#include "fabric/lifecycle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fabric/error.hpp"
#include "fabric/units.hpp"

namespace fabric {
namespace {

bool close_rel(double a, double b, double tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * scale || scale == 0.0;
}

double safe_share(double part, double whole) { return whole > 0.0 ? part / whole : 0.0; }

std::vector<Component> sorted_components(std::vector<Component> c) {
  std::stable_sort(c.begin(), c.end(), [](const Component& a, const Component& b) { return a.device < b.device; });
  return c;
}

void fill_shares(ImpactReport& r) {
  double total = 0.0;
  for (const auto& c : r.components) total += c.ebi;
  r.class_shares.clear();
  for (auto& c : r.components) {
    c.share = safe_share(c.ebi, total);
    r.class_shares[c.cls] += c.share;
  }
}

void finish_totals(ImpactReport& r) {
  Notes unique;
  for (auto& n : r.notes) {
    if (std::find(unique.begin(), unique.end(), n) == unique.end()) unique.push_back(std::move(n));
  }
  r.notes = std::move(unique);
  double ebi = 0.0;
  for (auto s : kEmbodiedStages) ebi += r.stages[s].endpoint.value;
  r.ebi = ebi;
  r.obi = r.stages[Stage::Use].endpoint.value;
  r.lifecycle = r.ebi + r.obi;
  r.annualized_ebi = r.lifetime_years > 0.0 ? r.ebi / r.lifetime_years : 0.0;
}

}  // namespace

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Mfg: return "Mfg";
    case Stage::Trans: return "Trans";
    case Stage::EoL: return "EoL";
    case Stage::Use: return "Use";
  }
  return "?";
}

std::string_view to_string(SubjectKind k) {
  switch (k) {
    case SubjectKind::Device: return "device";
    case SubjectKind::Workload: return "workload";
    case SubjectKind::System: return "system";
    case SubjectKind::Fleet: return "fleet";
  }
  return "?";
}

MidpointVector StageBreakdown::embodied_midpoint() const {
  MidpointVector m;
  for (auto s : kEmbodiedStages) m += (*this)[s].midpoint;
  return m;
}

void StageBreakdown::accumulate(const StageBreakdown& other, double k) {
  for (auto s : kStages) {
    (*this)[s].midpoint += other[s].midpoint.scaled(k);
    (*this)[s].endpoint += other[s].endpoint.scaled(k);
  }
}

double ImpactReport::stage_share(Stage s) const {
  if (s == Stage::Use) return 0.0;
  return safe_share(stages[s].endpoint.value, ebi);
}

double ImpactReport::category_share(ImpactCategory c) const {
  double part = 0.0;
  for (auto s : kEmbodiedStages) part += stages[s].endpoint[c];
  return safe_share(part, ebi);
}

double ImpactReport::midpoint_stage_share(Stage s, ImpactCategory c) const {
  if (s == Stage::Use) return 0.0;
  return safe_share(stages[s].midpoint[c], stages.embodied_midpoint()[c]);
}

const Normalization* ImpactReport::normalization(const std::string& denominator) const {
  for (const auto& n : normalizations) {
    if (n.denominator == denominator) return &n;
  }
  return nullptr;
}

void ImpactReport::verify() const {
  std::ostringstream problems;
  if (!close_rel(lifecycle, ebi + obi, 1e-12)) problems << "lifecycle != EBI + OBI; ";
  double stage_sum = 0.0;
  for (auto s : kEmbodiedStages) stage_sum += stages[s].endpoint.value;
  if (!close_rel(ebi, stage_sum, 1e-12)) problems << "EBI != sum of stage endpoints; ";
  if (!close_rel(obi, stages[Stage::Use].endpoint.value, 1e-12)) problems << "OBI != Use stage; ";
  if (ebi > 0.0) {
    double ss = 0.0, cs = 0.0;
    for (auto s : kEmbodiedStages) ss += stage_share(s);
    for (auto c : kCategories) cs += category_share(c);
    if (std::abs(ss - 1.0) > 1e-9) problems << "stage shares sum to " << ss << "; ";
    if (std::abs(cs - 1.0) > 1e-9) problems << "category shares sum to " << cs << "; ";
  }
  if (!components.empty()) {
    double comp = 0.0, share = 0.0;
    for (const auto& c : components) {
      comp += c.ebi;
      share += c.share;
    }
    if (!close_rel(comp, ebi, 1e-12)) problems << "EBI != count-weighted component sum; ";
    if (ebi > 0.0 && std::abs(share - 1.0) > 1e-9) problems << "component shares sum to " << share << "; ";
  }
  const auto text = problems.str();
  if (!text.empty()) throw InvariantError("report '" + subject + "': " + text);
}

Engine::Engine(const DatasetBundle& bundle, EngineConfig config)
    : bundle_(bundle), config_(std::move(config)), mfg_(bundle.manufacturing_context()) {
  if (config_.duty && !(*config_.duty >= 0.0 && *config_.duty <= 1.0)) {
    throw ValidationError("duty must lie in [0, 1]");
  }
  if (config_.pue && !(*config_.pue >= 1.0)) throw ValidationError("PUE must be >= 1.0");
  if (config_.lifetime_h && !(*config_.lifetime_h > 0.0)) throw ValidationError("lifetime must be > 0 h");
  if (config_.year_window) mfg_.year_window = *config_.year_window;
  if (config_.region && !bundle_.grids.has_region(*config_.region)) {
    bundle_.grids.resolve(*config_.region, 0);  // throws with the available regions
  }
}

double Engine::duty() const { return config_.duty.value_or(bundle_.defaults.duty); }
double Engine::pue() const { return config_.pue.value_or(bundle_.defaults.pue); }
int Engine::window() const { return config_.year_window.value_or(bundle_.defaults.year_window); }

double Engine::lifetime_hours(const std::string& device) const {
  if (config_.lifetime_h) return *config_.lifetime_h;
  const double lt = bundle_.device(device).spec.lifetime_h;
  return lt > 0.0 ? lt : bundle_.defaults.lifetime_h;
}

const RegionGrid& Engine::grid_for(const std::string& subject_region, int subject_year, Notes* notes) const {
  std::string region = config_.region.value_or(subject_region);
  if (region.empty()) region = bundle_.defaults.region;
  const int year = config_.year.value_or(subject_year);
  return bundle_.grids.resolve(region, year, window(), notes);
}

StageBreakdown Engine::embodied_stages(const std::string& id, Notes* notes) const {
  const auto& entry = bundle_.device(id);
  const auto& spec = entry.spec;
  const auto& table = bundle_.characterization;
  StageBreakdown out;
  auto stage_error = [&](Stage s, const Error& e) -> std::string {
    return "device '" + id + "' stage " + std::string(to_string(s)) + ": " + e.what();
  };

  try {
    out[Stage::Mfg].midpoint = mfg_midpoints(spec, mfg_, notes);
  } catch (const ResolutionError& e) {
    throw ResolutionError(stage_error(Stage::Mfg, e), e.candidates());
  }

  const auto& legs = config_.transport_legs ? *config_.transport_legs
                     : spec.transport_legs  ? *spec.transport_legs
                                            : bundle_.defaults.transport_legs;
  try {
    out[Stage::Trans].midpoint =
        transport_midpoints(entry.shipping_mass_kg, legs, bundle_.transport, entry.deploy_year, table, window(), notes);
  } catch (const ResolutionError& e) {
    throw ResolutionError(stage_error(Stage::Trans, e), e.candidates());
  }

  const auto& eol_id = spec.eol_profile.empty() ? bundle_.defaults.eol_profile : spec.eol_profile;
  if (auto it = bundle_.eol_profiles.find(eol_id); it != bundle_.eol_profiles.end()) {
    out[Stage::EoL].midpoint = eol_midpoints(spec.mass_kg, it->second);
  } else if (auto px = bundle_.mass_proxies.find(eol_id); px != bundle_.mass_proxies.end()) {
    out[Stage::EoL].midpoint = eol_midpoints_proxy(spec.mass_kg, px->second);
    add_note(notes, "EoL uses the per-kg mass proxy '" + eol_id + "' for the whole end-of-life stage");
  } else {
    throw ResolutionError("device '" + id + "' stage EoL: unknown EoL profile '" + eol_id + "'");
  }

  for (auto s : kEmbodiedStages) out[s].endpoint = to_endpoint(out[s].midpoint, bundle_.endpoint);
  return out;
}

EndpointImpact Engine::device_ebi(const std::string& device) const {
  const auto stages = embodied_stages(device);
  EndpointImpact total;
  for (auto s : kEmbodiedStages) total += stages[s].endpoint;
  return total;
}

ImpactReport Engine::device_report(const std::string& id) const {
  const auto& entry = bundle_.device(id);
  ImpactReport r;
  r.kind = SubjectKind::Device;
  r.subject = id;
  r.duty = duty();
  r.stages = embodied_stages(id, &r.notes);
  const auto& grid = grid_for("", entry.deploy_year, &r.notes);
  r.region = grid.region;
  r.year = grid.year;
  const auto draw = EnergyDraw::duty_model(entry.spec.tdp_w, entry.spec.idle_power(bundle_.defaults.idle_fraction),
                                           r.duty, units::kHoursPerYear, pue());
  r.energy_kwh = draw.energy_kwh;
  if (grid.co2_kg_per_kwh) r.co2_kg = draw.energy_kwh * *grid.co2_kg_per_kwh;
  r.stages[Stage::Use].midpoint = use_midpoints(draw.energy_kwh, grid, bundle_.characterization);
  r.stages[Stage::Use].endpoint = to_endpoint(r.stages[Stage::Use].midpoint, bundle_.endpoint);
  r.lifetime_years = lifetime_hours(id) / units::kHoursPerYear;
  finish_totals(r);
  r.components.push_back({id, entry.spec.cls, 1.0, r.ebi, 1.0});
  fill_shares(r);
  if (entry.fp64_tflops > 0.0) r.normalizations.push_back(normalize(r, "tflops_fp64", entry.fp64_tflops));
  if (entry.spec.capacity_gb > 0.0) r.normalizations.push_back(normalize(r, "GB", entry.spec.capacity_gb));
  r.bundle_version = bundle_.version;
  r.endpoint_model = bundle_.endpoint.model_tag();
  r.verify();
  return r;
}

EndpointImpact Engine::workload_ebi(const WorkloadRecord& w, Notes* notes) const {
  if (!(w.hours >= 0.0)) throw ValidationError("workload '" + w.id + "': execution time must be >= 0");
  EndpointImpact total;
  for (const auto& c : sorted_components(w.devices)) {
    if (!(c.count >= 0.0)) throw ValidationError("workload '" + w.id + "': device count must be >= 0");
    const double lt = lifetime_hours(c.device);
    if (w.hours > lt) {
      add_note(notes, "workload '" + w.id + "' runs longer than the lifetime of " + c.device);
    }
    total += device_ebi(c.device).scaled(c.count * w.hours / lt);
  }
  return total;
}

double Engine::workload_energy(const WorkloadRecord& w) const {
  if (w.energy_kwh) return EnergyDraw::measured(*w.energy_kwh, w.hours).energy_kwh;
  const double d = w.duty.value_or(duty());
  double kwh = 0.0;
  for (const auto& c : sorted_components(w.devices)) {
    const auto& spec = bundle_.device(c.device).spec;
    kwh += c.count * EnergyDraw::duty_model(spec.tdp_w, spec.idle_power(bundle_.defaults.idle_fraction), d,
                                            w.hours, pue())
                         .energy_kwh;
  }
  return kwh;
}

EndpointImpact Engine::workload_obi(const WorkloadRecord& w, Notes* notes) const {
  const auto& grid = grid_for(w.region, w.year, notes);
  return to_endpoint(use_midpoints(workload_energy(w), grid, bundle_.characterization), bundle_.endpoint);
}

ImpactReport Engine::workload_report(const WorkloadRecord& w) const {
  ImpactReport r;
  r.kind = SubjectKind::Workload;
  r.subject = w.id;
  r.duty = w.energy_kwh ? 0.0 : w.duty.value_or(duty());
  if (!(w.hours >= 0.0)) throw ValidationError("workload '" + w.id + "': execution time must be >= 0");
  for (const auto& c : sorted_components(w.devices)) {
    const auto& entry = bundle_.device(c.device);
    const double lt = lifetime_hours(c.device);
    if (w.hours > lt) add_note(&r.notes, "workload '" + w.id + "' runs longer than the lifetime of " + c.device);
    const double k = c.count * w.hours / lt;
    const auto stages = embodied_stages(c.device, &r.notes);
    r.stages.accumulate(stages, k);
    double dev = 0.0;
    for (auto s : kEmbodiedStages) dev += stages[s].endpoint.value;
    r.components.push_back({c.device, entry.spec.cls, c.count, k * dev, 0.0});
  }
  const auto& grid = grid_for(w.region, w.year, &r.notes);
  r.region = grid.region;
  r.year = grid.year;
  r.energy_kwh = workload_energy(w);
  if (grid.co2_kg_per_kwh) r.co2_kg = r.energy_kwh * *grid.co2_kg_per_kwh;
  r.stages[Stage::Use].midpoint = use_midpoints(r.energy_kwh, grid, bundle_.characterization);
  r.stages[Stage::Use].endpoint = to_endpoint(r.stages[Stage::Use].midpoint, bundle_.endpoint);
  r.lifetime_years = w.hours / units::kHoursPerYear;
  finish_totals(r);
  fill_shares(r);
  if (w.throughput > 0.0) {
    r.normalizations.push_back(normalize(r, w.throughput_unit.empty() ? "unit" : w.throughput_unit, w.throughput));
  }
  r.bundle_version = bundle_.version;
  r.endpoint_model = bundle_.endpoint.model_tag();
  r.verify();
  return r;
}

ImpactReport Engine::system_rollup(const std::string& id, std::optional<double> years) const {
  return system_rollup(bundle_.system(id), years);
}

ImpactReport Engine::system_rollup(const SystemSpec& sys, std::optional<double> years) const {
  ImpactReport r;
  r.kind = SubjectKind::System;
  r.subject = sys.id;
  r.duty = duty();
  if (sys.components.empty()) throw ValidationError("system '" + sys.id + "' has no components");
  double tflops = 0.0, gb = 0.0, kwh = 0.0;
  const double idle_fraction = bundle_.defaults.idle_fraction;
  for (const auto& c : sorted_components(sys.components)) {
    if (!(c.count > 0.0)) throw ValidationError("system '" + sys.id + "': component counts must be > 0");
    const auto& entry = bundle_.device(c.device);
    const auto stages = embodied_stages(c.device, &r.notes);
    r.stages.accumulate(stages, c.count);
    double dev = 0.0;
    for (auto s : kEmbodiedStages) dev += stages[s].endpoint.value;
    r.components.push_back({c.device, entry.spec.cls, c.count, c.count * dev, 0.0});
    tflops += c.count * entry.fp64_tflops;
    gb += c.count * entry.spec.capacity_gb;
    kwh += c.count * EnergyDraw::duty_model(entry.spec.tdp_w, entry.spec.idle_power(idle_fraction), r.duty,
                                            units::kHoursPerYear, pue())
                         .energy_kwh;
  }
  const auto& grid = grid_for(sys.region, sys.year, &r.notes);
  r.region = grid.region;
  r.year = grid.year;
  r.energy_kwh = kwh;
  if (grid.co2_kg_per_kwh) r.co2_kg = kwh * *grid.co2_kg_per_kwh;
  r.stages[Stage::Use].midpoint = use_midpoints(kwh, grid, bundle_.characterization);
  r.stages[Stage::Use].endpoint = to_endpoint(r.stages[Stage::Use].midpoint, bundle_.endpoint);
  const double horizon = years.value_or(config_.lifetime_h.value_or(bundle_.defaults.lifetime_h) / units::kHoursPerYear);
  if (!(horizon > 0.0)) throw ValidationError("annualization horizon must be > 0 years");
  r.lifetime_years = horizon;
  finish_totals(r);
  fill_shares(r);
  if (tflops > 0.0) r.normalizations.push_back(normalize(r, "tflops_fp64", tflops));
  if (gb > 0.0) r.normalizations.push_back(normalize(r, "GB", gb));
  r.bundle_version = bundle_.version;
  r.endpoint_model = bundle_.endpoint.model_tag();
  r.verify();
  return r;
}

Normalization normalize(const ImpactReport& report, const std::string& denominator, double amount) {
  if (!(amount > 0.0) || !std::isfinite(amount)) {
    throw ValidationError("normalization denominator '" + denominator + "' must be > 0");
  }
  return {denominator, amount, report.ebi / amount, report.obi / amount, report.lifecycle / amount};
}

double fleet_projection(const ImpactReport& system, double count) {
  if (!(count >= 0.0)) throw ValidationError("fleet count must be >= 0");
  return count * (system.annualized_ebi + system.obi);
}

}  // namespace fabric
