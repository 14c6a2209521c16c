#pragma once

// Text, CSV and JSON renderings of reports. Every number carries a unit and
// the bundle version it came from.

#include <string>
#include <vector>

#include "fabric/lifecycle.hpp"
#include "fabric/scenario.hpp"

namespace fabric {

enum class OutputFormat { Table, Csv, Json };

std::optional<OutputFormat> parse_format(std::string_view text);

inline constexpr std::string_view kEndpointUnit = "species*yr";

/// Device and workload reports: one CSV row per (stage, category).
/// System reports: one CSV row per component.
std::string render_report(const ImpactReport& report, OutputFormat format);
std::string report_json(const ImpactReport& report, int indent = 2);

std::string render_workloads(const WorkloadComparison& cmp, const std::string& bundle_version, OutputFormat format);

struct SweepRow {
  std::string region;
  int year = 0;
  double energy_kwh = 0.0;
  double obi = 0.0;
  double intensity = 0.0;  // species*yr per kWh
  std::optional<double> co2_kg;
};

std::string render_sweep(const std::string& subject, const std::vector<SweepRow>& rows,
                         const std::string& bundle_version, OutputFormat format);

struct FleetResult {
  std::string system;
  double count = 0.0;
  double annualized_ebi = 0.0;  // per system
  double annual_obi = 0.0;      // per system
  double per_year = 0.0;        // species*yr per year for the fleet
};

std::string render_fleet(const FleetResult& f, const std::string& bundle_version, OutputFormat format);

}  // namespace fabric
