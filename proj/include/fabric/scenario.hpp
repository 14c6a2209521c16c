#pragma once

// Scenario files: a subject (device, system or a set of workloads), its
// region and duty, and overrides. Same key/value conventions as bundle
// manifests.
//
//   [scenario]
//   kind = workload          # device | system | fleet | workload
//   baseline = n2d           # workload only
//   region = MISO
//   duty = 0.7
//
//   [workload.n2d]
//   devices = "EPYC-7B12:0.5; DDR4-64GB:256 GB"
//   hours = 1
//   energy_kwh = 0.2
//   throughput = 1
//   throughput_unit = run

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fabric/dataset.hpp"
#include "fabric/lifecycle.hpp"

namespace fabric {

struct Scenario {
  std::string name;
  SubjectKind kind = SubjectKind::Workload;
  std::string subject;   // device / system id
  std::string baseline;  // workload id used as the 1.0 reference
  std::vector<WorkloadRecord> workloads;  // sorted by id
  EngineConfig config;
  std::optional<double> years;
  double count = 1.0;  // fleet size
};

/// "ID:QTY[ UNIT]" items separated by ';'. QTY without a unit is a device
/// count; with a capacity unit (GB, TB, ...) it is converted to a
/// fractional count of the device's capacity.
std::vector<Component> parse_components(std::string_view text, const DatasetBundle& bundle);

/// Throws ValidationError listing every problem found.
Scenario parse_scenario(std::string_view text, const std::string& label, const DatasetBundle& bundle);
Scenario load_scenario(const std::filesystem::path& path, const DatasetBundle& bundle);

struct WorkloadComparisonRow {
  ImpactReport report;
  double throughput = 0.0;
  double impact_per_unit = 0.0;       // lifecycle species*yr per throughput unit
  double energy_per_unit = 0.0;       // kWh per throughput unit
  double impact_ratio = 0.0;          // vs baseline impact_per_unit
  double energy_ratio = 0.0;          // vs baseline energy_per_unit
  double throughput_ratio = 0.0;      // vs baseline throughput per hour
};

struct WorkloadComparison {
  std::string baseline;
  std::vector<WorkloadComparisonRow> rows;  // sorted by workload id
};

/// Reports every workload and normalizes per unit throughput against the
/// baseline. A missing baseline throws ResolutionError.
WorkloadComparison compare_workloads(const Engine& engine, const Scenario& scenario);

}  // namespace fabric
