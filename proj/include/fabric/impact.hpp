#pragma once

// Characterization of pollutant loads into midpoint categories, and
// conversion of midpoints into the species*yr endpoint.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fabric {

enum class ImpactCategory { AP = 0, EP = 1, FETP = 2 };

inline constexpr std::array<ImpactCategory, 3> kCategories = {
    ImpactCategory::AP, ImpactCategory::EP, ImpactCategory::FETP};

std::string_view to_string(ImpactCategory c);
/// Reference unit: "kg SO2 eq", "kg PO4 eq", "CTUe".
std::string_view unit_label(ImpactCategory c);
/// Field name used in every serialized report.
std::string_view field_name(ImpactCategory c);
std::optional<ImpactCategory> parse_category(std::string_view text);

inline constexpr std::string_view kEndpointField = "endpoint_species_yr";

enum class Phase { Air, Water };

/// Pollutant ids are compared upper-cased ("nh3" == "NH3").
std::string normalize_pollutant_id(std::string_view id);

struct Pollutant {
  std::string id;
  Phase phase = Phase::Air;
};

/// Per-category midpoint quantities: AP in kg SO2 eq, EP in kg PO4 eq,
/// FETP in CTUe.
class MidpointVector {
 public:
  MidpointVector() = default;
  MidpointVector(double ap, double ep, double fetp);

  double ap() const noexcept { return values_[0]; }
  double ep() const noexcept { return values_[1]; }
  double fetp() const noexcept { return values_[2]; }
  double operator[](ImpactCategory c) const noexcept {
    return values_[static_cast<std::size_t>(c)];
  }

  MidpointVector& operator+=(const MidpointVector& other) noexcept;
  friend MidpointVector operator+(MidpointVector a, const MidpointVector& b) noexcept {
    return a += b;
  }
  /// Scaling by a negative or non-finite factor throws ValidationError.
  MidpointVector scaled(double factor) const;

  bool is_zero() const noexcept;
  bool operator==(const MidpointVector&) const = default;

 private:
  std::array<double, 3> values_{0.0, 0.0, 0.0};
};

MidpointVector operator*(double factor, const MidpointVector& m);

struct Provenance {
  std::string source;
  std::string year;
  std::string note;
  bool operator==(const Provenance&) const = default;
};

/// Sparse (pollutant, category) -> factor map. Pairs absent from the table
/// contribute nothing.
class CharacterizationTable {
 public:
  CharacterizationTable() = default;
  explicit CharacterizationTable(Provenance provenance) : provenance_(std::move(provenance)) {}

  /// Throws ValidationError on negative or non-finite factors.
  void set(std::string_view pollutant, ImpactCategory c, double factor);
  double factor(std::string_view pollutant, ImpactCategory c) const;
  bool contains(std::string_view pollutant) const;

  const std::map<std::pair<std::string, ImpactCategory>, double>& entries() const noexcept {
    return factors_;
  }
  const Provenance& provenance() const noexcept { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = std::move(p); }

  bool operator==(const CharacterizationTable&) const = default;

 private:
  std::map<std::pair<std::string, ImpactCategory>, double> factors_;
  Provenance provenance_;
};

/// Midpoint -> endpoint factors, species*yr per reference unit.
class EndpointTable {
 public:
  EndpointTable() = default;
  explicit EndpointTable(std::string model_tag) : model_tag_(std::move(model_tag)) {}
  EndpointTable(std::string model_tag, double ap, double ep, double fetp);

  /// Throws ValidationError unless factor > 0.
  void set(ImpactCategory c, double factor);
  /// Throws ConfigurationError if the category was never set.
  double factor(ImpactCategory c) const;
  bool complete() const noexcept;
  /// Throws ConfigurationError naming missing categories.
  void validate() const;

  const std::string& model_tag() const noexcept { return model_tag_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = std::move(p); }

  /// Returns a copy with every factor multiplied by `k` (k > 0).
  EndpointTable scaled(double k) const;

  bool operator==(const EndpointTable&) const = default;

 private:
  std::string model_tag_;
  std::array<std::optional<double>, 3> factors_{};
  Provenance provenance_;
};

struct EndpointImpact {
  double value = 0.0;  // species*yr
  std::array<double, 3> breakdown{0.0, 0.0, 0.0};

  double operator[](ImpactCategory c) const noexcept {
    return breakdown[static_cast<std::size_t>(c)];
  }
  EndpointImpact& operator+=(const EndpointImpact& other) noexcept;
  EndpointImpact scaled(double factor) const;
};

struct PollutantLoad {
  std::string pollutant;
  double mass_kg = 0.0;
};

/// result_c = sum_k mass_k * factor(k, c). Negative masses throw
/// ValidationError naming the load.
MidpointVector characterize(std::span<const PollutantLoad> loads,
                            const CharacterizationTable& table);

/// breakdown_c = m_c * phi_c; value = sum of breakdown.
EndpointImpact to_endpoint(const MidpointVector& m, const EndpointTable& phi);

/// Per-unit pollutant masses (kg per `unit`) for one process.
struct FactorRow {
  std::string unit;
  std::map<std::string, double> kg_per_unit;
  bool operator==(const FactorRow&) const = default;
};

struct ProcessThroughput {
  double amount = 0.0;
  std::string unit;
  FactorRow factors;
};

/// Aggregates sum_j E_j * F_{j,k} per pollutant k, then characterizes. A
/// process whose unit differs from its factor row's unit is rejected.
MidpointVector midpoint_from_processes(std::span<const ProcessThroughput> processes,
                                       const CharacterizationTable& table);

/// Loads sum_j E_j * F_{j,k}, keyed by normalized pollutant id.
std::map<std::string, double> aggregate_loads(std::span<const ProcessThroughput> processes);

}  // namespace fabric
