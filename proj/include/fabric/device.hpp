#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fabric {

enum class DeviceClass { LogicCPU, LogicGPU, DRAM, SSD, HDD };

std::string_view to_string(DeviceClass c);
std::optional<DeviceClass> parse_device_class(std::string_view text);

inline bool is_logic(DeviceClass c) {
  return c == DeviceClass::LogicCPU || c == DeviceClass::LogicGPU;
}
inline bool is_memory(DeviceClass c) { return c == DeviceClass::DRAM || c == DeviceClass::SSD; }

enum class TransportMode { Truck, Ship, Air, Rail };

std::string_view to_string(TransportMode m);
std::optional<TransportMode> parse_transport_mode(std::string_view text);

struct TransportLeg {
  TransportMode mode = TransportMode::Truck;
  double distance_km = 0.0;
  bool operator==(const TransportLeg&) const = default;
};

/// Parses "truck:200;ship:14000" (',' also accepted as separator).
std::vector<TransportLeg> parse_legs(std::string_view text);
std::string format_legs(const std::vector<TransportLeg>& legs);

/// Hardware description in canonical units (mm^2, GB, kg, W, hours).
struct DeviceSpec {
  std::string id;
  DeviceClass cls = DeviceClass::LogicCPU;
  std::string vendor;
  int year = 0;
  std::string node_label;            // as printed, e.g. "7/14"
  std::optional<double> node_nm;     // leading (smallest) node
  double die_size_mm2 = 0.0;         // total silicon area, logic only
  double hbm_capacity_gb = 0.0;      // GPU only
  double capacity_gb = 0.0;          // DRAM/SSD/HDD
  double mass_kg = 0.0;
  double tdp_w = 0.0;
  std::optional<double> idle_power_w;
  double lifetime_h = 0.0;
  std::string fab_profile;           // fab profile or allocation vendor
  std::string hbm_profile;           // allocation vendor for HBM
  std::string fab_region;
  std::optional<double> yield;
  std::string score_class;           // HDD score table class
  std::string eol_profile;           // empty -> bundle default
  std::optional<std::vector<TransportLeg>> transport_legs;

  /// Throws ValidationError listing every violated invariant.
  void validate() const;
  /// idle_power_w if set, otherwise `default_fraction` of TDP.
  double idle_power(double default_fraction) const;

  bool operator==(const DeviceSpec&) const = default;
};

/// Parses "7", "7/14", "5/6 nm" and returns the leading (smallest) node.
std::optional<double> parse_leading_node(std::string_view label);

}  // namespace fabric
