#include "fabric/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "tabular.hpp"

namespace fabric {
namespace {

using json = nlohmann::ordered_json;
using tabular::csv_line;
using tabular::format_double;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
  return buf;
}

/// Left-aligned text columns, two spaces apart.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream os;
    for (std::size_t n = 0; n < rows_.size(); ++n) {
      const auto& r = rows_[n];
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        line += r[i];
        if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
      }
      os << "  " << line << "\n";
      if (n == 0) {
        std::size_t total = 0;
        for (auto w : width) total += w + 2;
        os << "  " << std::string(total - 2, '-') << "\n";
      }
    }
    return os.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string category_midpoint_unit(ImpactCategory c) { return std::string(unit_label(c)); }

json midpoint_json(const MidpointVector& m) {
  json j;
  for (auto c : kCategories) j[std::string(field_name(c))] = m[c];
  return j;
}

json endpoint_json(const EndpointImpact& e) {
  json j;
  j[std::string(kEndpointField)] = e.value;
  json by;
  for (auto c : kCategories) by[std::string(to_string(c))] = e[c];
  j["by_category_species_yr"] = by;
  return j;
}

std::string header_line(const ImpactReport& r) {
  std::ostringstream os;
  os << to_string(r.kind) << " " << r.subject << "  (grid " << r.region << " " << r.year;
  if (r.kind != SubjectKind::Workload) os << ", duty " << sci(r.duty);
  os << ")\n";
  return os.str();
}

std::string render_table(const ImpactReport& r) {
  std::ostringstream os;
  os << header_line(r);
  os << "\nMidpoints by stage\n";
  TextTable stages({"stage", "AP [kg SO2 eq]", "EP [kg PO4 eq]", "FETP [CTUe]", "endpoint [species*yr]", "share of EBI"});
  for (auto s : kStages) {
    const auto& e = r.stages[s];
    stages.add({std::string(to_string(s)), sci(e.midpoint.ap()), sci(e.midpoint.ep()), sci(e.midpoint.fetp()),
                sci(e.endpoint.value), s == Stage::Use ? "-" : pct(r.stage_share(s))});
  }
  os << stages.str();

  os << "\nEmbodied midpoint share by stage\n";
  TextTable mid({"stage", "AP", "EP", "FETP"});
  for (auto s : kEmbodiedStages) {
    mid.add({std::string(to_string(s)), pct(r.midpoint_stage_share(s, ImpactCategory::AP)),
             pct(r.midpoint_stage_share(s, ImpactCategory::EP)),
             pct(r.midpoint_stage_share(s, ImpactCategory::FETP))});
  }
  os << mid.str();

  os << "\nEndpoint EBI share by category\n";
  TextTable cats({"category", "share"});
  for (auto c : kCategories) cats.add({std::string(to_string(c)), pct(r.category_share(c))});
  os << cats.str();

  if (r.kind == SubjectKind::System || r.kind == SubjectKind::Workload) {
    os << "\nComponents\n";
    TextTable comp({"device", "class", "count", "EBI [species*yr]", "share"});
    for (const auto& c : r.components) {
      comp.add({c.device, std::string(to_string(c.cls)), sci(c.count), sci(c.ebi), pct(c.share)});
    }
    os << comp.str();
    os << "\nBy device class\n";
    TextTable cls({"class", "share"});
    for (const auto& [k, v] : r.class_shares) cls.add({std::string(to_string(k)), pct(v)});
    os << cls.str();
  }

  os << "\nTotals\n";
  TextTable tot({"quantity", "value", "unit"});
  tot.add({"EBI", sci(r.ebi), std::string(kEndpointUnit)});
  const char* obi_label = r.kind == SubjectKind::Workload ? "OBI" : "OBI (annual)";
  tot.add({obi_label, sci(r.obi), std::string(kEndpointUnit)});
  tot.add({"EBI + OBI", sci(r.lifecycle), std::string(kEndpointUnit)});
  if (r.kind != SubjectKind::Workload) {
    tot.add({"annualized EBI", sci(r.annualized_ebi), "species*yr/yr"});
    tot.add({"lifetime", sci(r.lifetime_years), "yr"});
  }
  tot.add({"energy", sci(r.energy_kwh), "kWh"});
  if (r.co2_kg) tot.add({"CO2", sci(*r.co2_kg), "kg"});
  for (const auto& n : r.normalizations) {
    tot.add({"EBI per " + n.denominator, sci(n.ebi), "species*yr/" + n.denominator});
  }
  os << tot.str();
  os << "\nendpoint model " << r.endpoint_model << "; bundle " << r.bundle_version.substr(0, 16) << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

std::string render_csv(const ImpactReport& r) {
  std::ostringstream os;
  if (r.kind == SubjectKind::System) {
    os << "subject_kind,subject,region,year,device,class,count,endpoint_species_yr,endpoint_unit,share,share_unit,"
          "bundle_version\n";
    for (const auto& c : r.components) {
      os << csv_line({std::string(to_string(r.kind)), r.subject, r.region, std::to_string(r.year), c.device,
                      std::string(to_string(c.cls)), format_double(c.count), format_double(c.ebi),
                      std::string(kEndpointUnit), format_double(c.share), "fraction", r.bundle_version})
         << "\n";
    }
    return os.str();
  }
  os << "subject_kind,subject,region,year,stage,category,field,midpoint,midpoint_unit,endpoint_species_yr,"
        "endpoint_unit,bundle_version\n";
  for (auto s : kStages) {
    const auto& e = r.stages[s];
    for (auto c : kCategories) {
      os << csv_line({std::string(to_string(r.kind)), r.subject, r.region, std::to_string(r.year),
                      std::string(to_string(s)), std::string(to_string(c)), std::string(field_name(c)),
                      format_double(e.midpoint[c]), category_midpoint_unit(c), format_double(e.endpoint[c]),
                      std::string(kEndpointUnit), r.bundle_version})
         << "\n";
    }
  }
  return os.str();
}

}  // namespace

std::optional<OutputFormat> parse_format(std::string_view text) {
  if (text == "table") return OutputFormat::Table;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  return std::nullopt;
}

std::string report_json(const ImpactReport& r, int indent) {
  json j;
  j["subject_kind"] = std::string(to_string(r.kind));
  j["subject"] = r.subject;
  j["region"] = r.region;
  j["year"] = r.year;
  j["duty"] = r.duty;
  json stages;
  for (auto s : kStages) {
    json st = midpoint_json(r.stages[s].midpoint);
    st.update(endpoint_json(r.stages[s].endpoint));
    if (s != Stage::Use) st["share_of_ebi"] = r.stage_share(s);
    stages[std::string(to_string(s))] = st;
  }
  j["stages"] = stages;
  json cats;
  for (auto c : kCategories) cats[std::string(to_string(c))] = r.category_share(c);
  j["category_share_of_ebi"] = cats;
  j["ebi_species_yr"] = r.ebi;
  j["obi_species_yr"] = r.obi;
  j["lifecycle_species_yr"] = r.lifecycle;
  j["annualized_ebi_species_yr_per_yr"] = r.annualized_ebi;
  j["lifetime_yr"] = r.lifetime_years;
  j["energy_kwh"] = r.energy_kwh;
  j["co2_kg"] = r.co2_kg ? json(*r.co2_kg) : json(nullptr);
  json comps = json::array();
  for (const auto& c : r.components) {
    comps.push_back({{"device", c.device},
                     {"class", std::string(to_string(c.cls))},
                     {"count", c.count},
                     {"endpoint_species_yr", c.ebi},
                     {"share", c.share}});
  }
  j["components"] = comps;
  json classes;
  for (const auto& [k, v] : r.class_shares) classes[std::string(to_string(k))] = v;
  j["class_shares"] = classes;
  json norms = json::array();
  for (const auto& n : r.normalizations) {
    norms.push_back({{"denominator", n.denominator},
                     {"amount", n.amount},
                     {"ebi_species_yr_per_unit", n.ebi},
                     {"obi_species_yr_per_unit", n.obi},
                     {"lifecycle_species_yr_per_unit", n.lifecycle}});
  }
  j["normalizations"] = norms;
  j["endpoint_model"] = r.endpoint_model;
  j["bundle_version"] = r.bundle_version;
  j["notes"] = r.notes;
  return j.dump(indent);
}

std::string render_report(const ImpactReport& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::Table: return render_table(r);
    case OutputFormat::Csv: return render_csv(r);
    case OutputFormat::Json: return report_json(r) + "\n";
  }
  return {};
}

std::string render_workloads(const WorkloadComparison& cmp, const std::string& version, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json j;
    j["baseline"] = cmp.baseline;
    j["bundle_version"] = version;
    json rows = json::array();
    for (const auto& r : cmp.rows) {
      rows.push_back({{"workload", r.report.subject},
                      {"region", r.report.region},
                      {"energy_kwh", r.report.energy_kwh},
                      {"throughput", r.throughput},
                      {"ebi_species_yr", r.report.ebi},
                      {"obi_species_yr", r.report.obi},
                      {"lifecycle_species_yr", r.report.lifecycle},
                      {"impact_species_yr_per_unit", r.impact_per_unit},
                      {"energy_kwh_per_unit", r.energy_per_unit},
                      {"impact_ratio", r.impact_ratio},
                      {"energy_ratio", r.energy_ratio},
                      {"throughput_ratio", r.throughput_ratio}});
    }
    j["workloads"] = rows;
    return j.dump(2) + "\n";
  }
  if (format == OutputFormat::Csv) {
    std::ostringstream os;
    os << "workload,baseline,region,year,energy_kwh,throughput,ebi_species_yr,obi_species_yr,lifecycle_species_yr,"
          "impact_species_yr_per_unit,energy_kwh_per_unit,impact_ratio,energy_ratio,throughput_ratio,"
          "bundle_version\n";
    for (const auto& r : cmp.rows) {
      os << csv_line({r.report.subject, cmp.baseline, r.report.region, std::to_string(r.report.year),
                      format_double(r.report.energy_kwh), format_double(r.throughput), format_double(r.report.ebi),
                      format_double(r.report.obi), format_double(r.report.lifecycle),
                      format_double(r.impact_per_unit), format_double(r.energy_per_unit),
                      format_double(r.impact_ratio), format_double(r.energy_ratio),
                      format_double(r.throughput_ratio), version})
         << "\n";
    }
    return os.str();
  }
  std::ostringstream os;
  os << "workloads normalized to baseline '" << cmp.baseline << "'\n\n";
  TextTable t({"workload", "energy [kWh]", "EBI [species*yr]", "OBI [species*yr]", "impact/unit [species*yr]",
               "impact ratio", "energy ratio", "throughput ratio"});
  for (const auto& r : cmp.rows) {
    t.add({r.report.subject, sci(r.report.energy_kwh), sci(r.report.ebi), sci(r.report.obi), sci(r.impact_per_unit),
           sci(r.impact_ratio), sci(r.energy_ratio), sci(r.throughput_ratio)});
  }
  os << t.str() << "\nbundle " << version.substr(0, 16) << "\n";
  return os.str();
}

std::string render_sweep(const std::string& subject, const std::vector<SweepRow>& rows, const std::string& version,
                         OutputFormat format) {
  if (format == OutputFormat::Json) {
    json j;
    j["subject"] = subject;
    j["bundle_version"] = version;
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"region", r.region},
                     {"year", r.year},
                     {"energy_kwh", r.energy_kwh},
                     {"obi_species_yr", r.obi},
                     {"intensity_species_yr_per_kwh", r.intensity},
                     {"co2_kg", r.co2_kg ? json(*r.co2_kg) : json(nullptr)}});
    }
    j["regions"] = arr;
    return j.dump(2) + "\n";
  }
  if (format == OutputFormat::Csv) {
    std::ostringstream os;
    os << "subject,region,year,energy_kwh,obi_species_yr,intensity_species_yr_per_kwh,co2_kg,bundle_version\n";
    for (const auto& r : rows) {
      os << csv_line({subject, r.region, std::to_string(r.year), format_double(r.energy_kwh), format_double(r.obi),
                      format_double(r.intensity), r.co2_kg ? format_double(*r.co2_kg) : "", version})
         << "\n";
    }
    return os.str();
  }
  std::ostringstream os;
  os << "regional sweep for " << subject << " (annual use)\n\n";
  TextTable t({"region", "year", "energy [kWh]", "OBI [species*yr]", "intensity [species*yr/kWh]", "CO2 [kg]"});
  for (const auto& r : rows) {
    t.add({r.region, std::to_string(r.year), sci(r.energy_kwh), sci(r.obi), sci(r.intensity),
           r.co2_kg ? sci(*r.co2_kg) : "-"});
  }
  os << t.str() << "\nbundle " << version.substr(0, 16) << "\n";
  return os.str();
}

std::string render_fleet(const FleetResult& f, const std::string& version, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json j{{"system", f.system},
           {"count", f.count},
           {"annualized_ebi_species_yr_per_yr", f.annualized_ebi},
           {"annual_obi_species_yr_per_yr", f.annual_obi},
           {"fleet_species_yr_per_yr", f.per_year},
           {"bundle_version", version}};
    return j.dump(2) + "\n";
  }
  if (format == OutputFormat::Csv) {
    return "system,count,annualized_ebi_species_yr_per_yr,annual_obi_species_yr_per_yr,fleet_species_yr_per_yr,"
           "bundle_version\n" +
           csv_line({f.system, format_double(f.count), format_double(f.annualized_ebi), format_double(f.annual_obi),
                     format_double(f.per_year), version}) +
           "\n";
  }
  std::ostringstream os;
  os << "fleet of " << sci(f.count) << " x " << f.system << "\n\n";
  TextTable t({"quantity", "value", "unit"});
  t.add({"annualized EBI per system", sci(f.annualized_ebi), "species*yr/yr"});
  t.add({"annual OBI per system", sci(f.annual_obi), "species*yr/yr"});
  t.add({"fleet total", sci(f.per_year), "species*yr/yr"});
  os << t.str() << "\nbundle " << version.substr(0, 16) << "\n";
  return os.str();
}

}  // namespace fabric
