#include "fabric/device.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "fabric/error.hpp"

namespace fabric {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(DeviceClass c) {
  switch (c) {
    case DeviceClass::LogicCPU: return "LogicCPU";
    case DeviceClass::LogicGPU: return "LogicGPU";
    case DeviceClass::DRAM: return "DRAM";
    case DeviceClass::SSD: return "SSD";
    case DeviceClass::HDD: return "HDD";
  }
  return "?";
}

std::optional<DeviceClass> parse_device_class(std::string_view text) {
  const auto t = lower(trim(text));
  if (t == "logiccpu" || t == "cpu") return DeviceClass::LogicCPU;
  if (t == "logicgpu" || t == "gpu") return DeviceClass::LogicGPU;
  if (t == "dram") return DeviceClass::DRAM;
  if (t == "ssd") return DeviceClass::SSD;
  if (t == "hdd") return DeviceClass::HDD;
  return std::nullopt;
}

std::string_view to_string(TransportMode m) {
  switch (m) {
    case TransportMode::Truck: return "truck";
    case TransportMode::Ship: return "ship";
    case TransportMode::Air: return "air";
    case TransportMode::Rail: return "rail";
  }
  return "?";
}

std::optional<TransportMode> parse_transport_mode(std::string_view text) {
  const auto t = lower(trim(text));
  if (t == "truck") return TransportMode::Truck;
  if (t == "ship") return TransportMode::Ship;
  if (t == "air") return TransportMode::Air;
  if (t == "rail") return TransportMode::Rail;
  return std::nullopt;
}

std::vector<TransportLeg> parse_legs(std::string_view text) {
  std::vector<TransportLeg> legs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find_first_of(";,", pos);
    if (end == std::string_view::npos) end = text.size();
    const auto item = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ValidationError("transport leg '" + std::string(item) + "' must be mode:distance_km");
    }
    const auto mode = parse_transport_mode(item.substr(0, colon));
    if (!mode) {
      throw ValidationError("unknown transport mode in leg '" + std::string(item) + "'");
    }
    const auto num = trim(item.substr(colon + 1));
    double km = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), km);
    if (ec != std::errc{} || ptr != num.data() + num.size() || !std::isfinite(km) || km < 0.0) {
      throw ValidationError("invalid distance in transport leg '" + std::string(item) + "'");
    }
    legs.push_back({*mode, km});
  }
  if (legs.empty()) throw ValidationError("transport profile needs at least one leg");
  return legs;
}

std::string format_legs(const std::vector<TransportLeg>& legs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (i) os << ';';
    os << to_string(legs[i].mode) << ':' << legs[i].distance_km;
  }
  return os.str();
}

std::optional<double> parse_leading_node(std::string_view label) {
  std::optional<double> best;
  std::size_t pos = 0;
  while (pos < label.size()) {
    if (!std::isdigit(static_cast<unsigned char>(label[pos]))) {
      ++pos;
      continue;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(label.data() + pos, label.data() + label.size(), v);
    if (ec != std::errc{}) break;
    if (!best || v < *best) best = v;
    pos = static_cast<std::size_t>(ptr - label.data());
  }
  return best;
}

void DeviceSpec::validate() const {
  std::vector<std::string> problems;
  if (id.empty()) problems.emplace_back("device id is empty");
  if (is_logic(cls)) {
    if (!(die_size_mm2 > 0.0)) problems.emplace_back("die_size must be > 0 for logic devices");
    if (!node_nm) problems.emplace_back("process node is required for logic devices");
  } else if (!(capacity_gb > 0.0)) {
    problems.emplace_back("capacity must be > 0 for memory/storage devices");
  }
  if (hbm_capacity_gb < 0.0) problems.emplace_back("hbm_capacity must be >= 0");
  if (hbm_capacity_gb > 0.0 && cls != DeviceClass::LogicGPU) {
    problems.emplace_back("hbm_capacity is only meaningful for GPUs");
  }
  if (!(lifetime_h > 0.0)) problems.emplace_back("lifetime must be > 0");
  if (!(mass_kg >= 0.0)) problems.emplace_back("mass must be >= 0");
  if (!(tdp_w >= 0.0)) problems.emplace_back("tdp must be >= 0");
  if (idle_power_w && (*idle_power_w < 0.0 || *idle_power_w > tdp_w)) {
    problems.emplace_back("idle_power must lie in [0, tdp]");
  }
  if (yield && !(*yield > 0.0 && *yield <= 1.0)) problems.emplace_back("yield must lie in (0, 1]");
  if (problems.empty()) return;
  std::string msg = "device '" + id + "' is invalid:";
  for (const auto& p : problems) msg += " " + p + ";";
  throw ValidationError(msg);
}

double DeviceSpec::idle_power(double default_fraction) const {
  return idle_power_w ? *idle_power_w : default_fraction * tdp_w;
}

}  // namespace fabric
