#pragma once

// Assembles stage midpoints into device, workload, system and fleet reports.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fabric/dataset.hpp"
#include "fabric/impact.hpp"
#include "fabric/years.hpp"

namespace fabric {

enum class Stage { Mfg = 0, Trans = 1, EoL = 2, Use = 3 };

inline constexpr std::array<Stage, 4> kStages = {Stage::Mfg, Stage::Trans, Stage::EoL, Stage::Use};
inline constexpr std::array<Stage, 3> kEmbodiedStages = {Stage::Mfg, Stage::Trans, Stage::EoL};

std::string_view to_string(Stage s);

struct StageEntry {
  MidpointVector midpoint;
  EndpointImpact endpoint;
};

/// Per-stage midpoints and endpoints. Embodied impact is Mfg + Trans + EoL;
/// operational impact is exactly the Use entry.
struct StageBreakdown {
  std::array<StageEntry, 4> entries{};

  StageEntry& operator[](Stage s) { return entries[static_cast<std::size_t>(s)]; }
  const StageEntry& operator[](Stage s) const { return entries[static_cast<std::size_t>(s)]; }

  MidpointVector embodied_midpoint() const;
  /// Adds `k` times every stage of `other`.
  void accumulate(const StageBreakdown& other, double k);
};

enum class SubjectKind { Device, Workload, System, Fleet };
std::string_view to_string(SubjectKind k);

struct ComponentShare {
  std::string device;
  DeviceClass cls = DeviceClass::LogicCPU;
  double count = 0.0;
  double ebi = 0.0;    // count-weighted, species*yr
  double share = 0.0;  // of report EBI
};

struct Normalization {
  std::string denominator;  // "tflops_fp64", "GB", or a throughput unit
  double amount = 0.0;
  double ebi = 0.0;  // species*yr per unit
  double obi = 0.0;
  double lifecycle = 0.0;
};

struct ImpactReport {
  SubjectKind kind = SubjectKind::Device;
  std::string subject;
  std::string region;
  int year = 0;
  StageBreakdown stages;
  double ebi = 0.0;        // species*yr, embodied
  double obi = 0.0;        // species*yr, operational over the report horizon
  double lifecycle = 0.0;  // ebi + obi
  double lifetime_years = 0.0;
  double annualized_ebi = 0.0;
  double energy_kwh = 0.0;
  std::optional<double> co2_kg;
  double duty = 0.0;
  std::vector<ComponentShare> components;  // sorted by device id
  std::map<DeviceClass, double> class_shares;
  std::vector<Normalization> normalizations;
  std::string bundle_version;
  std::string endpoint_model;
  Notes notes;

  /// Share of endpoint EBI from an embodied stage (0 for Use).
  double stage_share(Stage s) const;
  /// Share of endpoint EBI from a category.
  double category_share(ImpactCategory c) const;
  /// Share of the embodied midpoint in category `c` from stage `s`.
  double midpoint_stage_share(Stage s, ImpactCategory c) const;
  const Normalization* normalization(const std::string& denominator) const;

  /// Throws InvariantError when closure or share conservation fails.
  void verify() const;
};

struct EngineConfig {
  std::optional<std::string> region;  // default: subject region, then bundle default
  std::optional<int> year;            // grid year; default: deployment year
  std::optional<double> duty;
  std::optional<double> pue;
  std::optional<double> lifetime_h;   // overrides every device lifetime
  std::optional<std::vector<TransportLeg>> transport_legs;
  std::optional<int> year_window;
};

/// A run of some work on a set of devices. Energy is either measured or
/// derived from a duty cycle over the devices' power envelopes.
struct WorkloadRecord {
  std::string id;
  double hours = 0.0;
  std::optional<double> energy_kwh;
  std::optional<double> duty;
  std::vector<Component> devices;
  std::string region;
  int year = 0;
  double throughput = 0.0;
  std::string throughput_unit;
};

class Engine {
 public:
  explicit Engine(const DatasetBundle& bundle, EngineConfig config = {});

  const DatasetBundle& bundle() const noexcept { return bundle_; }
  const EngineConfig& config() const noexcept { return config_; }

  /// Mfg, Trans and EoL for one unit of a device (Use left empty).
  StageBreakdown embodied_stages(const std::string& device, Notes* notes = nullptr) const;
  EndpointImpact device_ebi(const std::string& device) const;
  double lifetime_hours(const std::string& device) const;

  /// Embodied stages plus one year of Use at the configured duty.
  ImpactReport device_report(const std::string& device) const;

  /// sum over devices of count * (hours / lifetime) * device EBI.
  EndpointImpact workload_ebi(const WorkloadRecord& w, Notes* notes = nullptr) const;
  double workload_energy(const WorkloadRecord& w) const;
  EndpointImpact workload_obi(const WorkloadRecord& w, Notes* notes = nullptr) const;
  ImpactReport workload_report(const WorkloadRecord& w) const;

  /// Full EBI plus one year of OBI at the configured duty. `years` sets the
  /// annualization horizon (default: the bundle lifetime).
  ImpactReport system_rollup(const SystemSpec& sys, std::optional<double> years = std::nullopt) const;
  ImpactReport system_rollup(const std::string& id, std::optional<double> years = std::nullopt) const;

  const RegionGrid& grid_for(const std::string& subject_region, int subject_year, Notes* notes) const;

 private:
  double duty() const;
  double pue() const;
  int window() const;

  const DatasetBundle& bundle_;
  EngineConfig config_;
  ManufacturingContext mfg_;
};

/// Divides the report's endpoint totals by `amount` units of `denominator`.
/// Throws ValidationError unless amount > 0.
Normalization normalize(const ImpactReport& report, const std::string& denominator, double amount);

/// count * (annualized EBI + annual OBI), species*yr per year.
double fleet_projection(const ImpactReport& system, double count);

}  // namespace fabric
