#include "fabric/impact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "fabric/error.hpp"

namespace fabric {

std::string_view to_string(ImpactCategory c) {
  switch (c) {
    case ImpactCategory::AP: return "AP";
    case ImpactCategory::EP: return "EP";
    case ImpactCategory::FETP: return "FETP";
  }
  return "?";
}

std::string_view unit_label(ImpactCategory c) {
  switch (c) {
    case ImpactCategory::AP: return "kg SO2 eq";
    case ImpactCategory::EP: return "kg PO4 eq";
    case ImpactCategory::FETP: return "CTUe";
  }
  return "?";
}

std::string_view field_name(ImpactCategory c) {
  switch (c) {
    case ImpactCategory::AP: return "ap_kg_so2_eq";
    case ImpactCategory::EP: return "ep_kg_po4_eq";
    case ImpactCategory::FETP: return "fetp_ctue";
  }
  return "?";
}

std::optional<ImpactCategory> parse_category(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  for (auto c : kCategories) {
    if (upper == to_string(c)) return c;
  }
  return std::nullopt;
}

std::string normalize_pollutant_id(std::string_view id) {
  std::string out;
  out.reserve(id.size());
  for (unsigned char ch : id) {
    if (!std::isspace(ch)) out.push_back(static_cast<char>(std::toupper(ch)));
  }
  return out;
}

namespace {

void require_quantity(double v, std::string_view what) {
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream os;
    os << what << " must be finite and non-negative (got " << v << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

MidpointVector::MidpointVector(double ap, double ep, double fetp) : values_{ap, ep, fetp} {
  require_quantity(ap, "AP midpoint");
  require_quantity(ep, "EP midpoint");
  require_quantity(fetp, "FETP midpoint");
}

MidpointVector& MidpointVector::operator+=(const MidpointVector& other) noexcept {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

MidpointVector MidpointVector::scaled(double factor) const {
  require_quantity(factor, "midpoint scale factor");
  return {values_[0] * factor, values_[1] * factor, values_[2] * factor};
}

bool MidpointVector::is_zero() const noexcept {
  return values_[0] == 0.0 && values_[1] == 0.0 && values_[2] == 0.0;
}

MidpointVector operator*(double factor, const MidpointVector& m) { return m.scaled(factor); }

void CharacterizationTable::set(std::string_view pollutant, ImpactCategory c, double factor) {
  if (!std::isfinite(factor) || factor < 0.0) {
    std::ostringstream os;
    os << "characterization factor for (" << pollutant << ", " << to_string(c)
       << ") must be >= 0 (got " << factor << ")";
    throw ValidationError(os.str());
  }
  factors_[{normalize_pollutant_id(pollutant), c}] = factor;
}

double CharacterizationTable::factor(std::string_view pollutant, ImpactCategory c) const {
  auto it = factors_.find({normalize_pollutant_id(pollutant), c});
  return it == factors_.end() ? 0.0 : it->second;
}

bool CharacterizationTable::contains(std::string_view pollutant) const {
  const auto id = normalize_pollutant_id(pollutant);
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const auto& kv) { return kv.first.first == id; });
}

EndpointTable::EndpointTable(std::string model_tag, double ap, double ep, double fetp)
    : model_tag_(std::move(model_tag)) {
  set(ImpactCategory::AP, ap);
  set(ImpactCategory::EP, ep);
  set(ImpactCategory::FETP, fetp);
}

void EndpointTable::set(ImpactCategory c, double factor) {
  if (!std::isfinite(factor) || factor <= 0.0) {
    std::ostringstream os;
    os << "endpoint factor for " << to_string(c) << " must be > 0 (got " << factor << ")";
    throw ValidationError(os.str());
  }
  factors_[static_cast<std::size_t>(c)] = factor;
}

double EndpointTable::factor(ImpactCategory c) const {
  const auto& f = factors_[static_cast<std::size_t>(c)];
  if (!f) {
    throw ConfigurationError("endpoint table '" + model_tag_ + "' has no factor for " +
                             std::string(to_string(c)));
  }
  return *f;
}

bool EndpointTable::complete() const noexcept {
  return std::all_of(factors_.begin(), factors_.end(), [](const auto& f) { return f.has_value(); });
}

void EndpointTable::validate() const {
  std::string missing;
  for (auto c : kCategories) {
    if (!factors_[static_cast<std::size_t>(c)]) {
      if (!missing.empty()) missing += ", ";
      missing += to_string(c);
    }
  }
  if (!missing.empty()) {
    throw ConfigurationError("endpoint table '" + model_tag_ + "' is missing " + missing);
  }
}

EndpointTable EndpointTable::scaled(double k) const {
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("endpoint scale must be > 0");
  EndpointTable out = *this;
  for (auto& f : out.factors_) {
    if (f) *f *= k;
  }
  return out;
}

EndpointImpact& EndpointImpact::operator+=(const EndpointImpact& other) noexcept {
  value += other.value;
  for (std::size_t i = 0; i < breakdown.size(); ++i) breakdown[i] += other.breakdown[i];
  return *this;
}

EndpointImpact EndpointImpact::scaled(double factor) const {
  EndpointImpact out = *this;
  out.value *= factor;
  for (auto& b : out.breakdown) b *= factor;
  return out;
}

MidpointVector characterize(std::span<const PollutantLoad> loads,
                            const CharacterizationTable& table) {
  std::array<double, 3> acc{0.0, 0.0, 0.0};
  for (const auto& load : loads) {
    if (!std::isfinite(load.mass_kg) || load.mass_kg < 0.0) {
      std::ostringstream os;
      os << "load '" << load.pollutant << "' has invalid mass " << load.mass_kg << " kg";
      throw ValidationError(os.str());
    }
    for (auto c : kCategories) {
      acc[static_cast<std::size_t>(c)] += load.mass_kg * table.factor(load.pollutant, c);
    }
  }
  return {acc[0], acc[1], acc[2]};
}

EndpointImpact to_endpoint(const MidpointVector& m, const EndpointTable& phi) {
  EndpointImpact out;
  for (auto c : kCategories) {
    const double b = m[c] * phi.factor(c);
    out.breakdown[static_cast<std::size_t>(c)] = b;
  }
  out.value = out.breakdown[0] + out.breakdown[1] + out.breakdown[2];
  return out;
}

std::map<std::string, double> aggregate_loads(std::span<const ProcessThroughput> processes) {
  std::map<std::string, double> loads;
  for (const auto& p : processes) {
    if (!std::isfinite(p.amount) || p.amount < 0.0) {
      std::ostringstream os;
      os << "process throughput must be >= 0 (got " << p.amount << " " << p.unit << ")";
      throw ValidationError(os.str());
    }
    if (p.unit != p.factors.unit) {
      throw ValidationError("unit mismatch: throughput in '" + p.unit +
                            "' but factor row is per '" + p.factors.unit + "'");
    }
    for (const auto& [pollutant, per_unit] : p.factors.kg_per_unit) {
      if (!std::isfinite(per_unit) || per_unit < 0.0) {
        throw ValidationError("emission factor for '" + pollutant + "' must be >= 0");
      }
      loads[normalize_pollutant_id(pollutant)] += p.amount * per_unit;
    }
  }
  return loads;
}

MidpointVector midpoint_from_processes(std::span<const ProcessThroughput> processes,
                                       const CharacterizationTable& table) {
  const auto totals = aggregate_loads(processes);
  std::vector<PollutantLoad> loads;
  loads.reserve(totals.size());
  for (const auto& [id, mass] : totals) loads.push_back({id, mass});
  return characterize(loads, table);
}

}  // namespace fabric
