// Randomized invariants. Each case fixes its seed so failures replay.

#include <doctest.h>

#include <algorithm>
#include <array>
#include <vector>

#include "fabric/dataset.hpp"
#include "fabric/lifecycle.hpp"
#include "fabric/logistics.hpp"
#include "fabric/operations.hpp"
#include "support.hpp"

using namespace fabric;
using testsupport::Gen;
using testsupport::rel_close;

namespace {

constexpr int kCases = 1000;
constexpr double kTol = 1e-12;
const std::array<std::string, 4> kPollutants = {"SO2", "NOX", "P", "CU"};

bool close(const MidpointVector& a, const MidpointVector& b, double tol = kTol) {
  for (auto c : kCategories) {
    if (!rel_close(a[c], b[c], tol)) return false;
  }
  return true;
}

CharacterizationTable random_table(Gen& g) {
  CharacterizationTable t;
  for (const auto& p : kPollutants) {
    for (auto c : kCategories) {
      if (g.coin(0.7)) t.set(p, c, g.magnitude(1e-3, 1e5));
    }
  }
  return t;
}

std::vector<PollutantLoad> random_loads(Gen& g) {
  std::vector<PollutantLoad> v;
  const int n = g.integer(0, 6);
  for (int i = 0; i < n; ++i) v.push_back({kPollutants[g.integer(0, 3)], g.magnitude(1e-9, 1e3)});
  return v;
}

MidpointVector random_midpoint(Gen& g) {
  return {g.magnitude(1e-8, 1e2), g.magnitude(1e-8, 1e2), g.magnitude(1e-3, 1e6)};
}

const DatasetBundle& fixture() {
  static const DatasetBundle b = load_bundle(FABRIC_BUNDLE_DIR);
  return b;
}

std::vector<std::string> device_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : fixture().devices) ids.push_back(id);
  return ids;
}

}  // namespace

TEST_CASE("characterize is linear in the loads") {
  Gen g(11);
  for (int i = 0; i < kCases; ++i) {
    const auto table = random_table(g);
    auto a = random_loads(g);
    const auto b = random_loads(g);
    const double k = g.magnitude(1e-6, 1e6);
    auto scaled = a;
    for (auto& l : scaled) l.mass_kg *= k;
    REQUIRE(close(characterize(scaled, table), characterize(a, table).scaled(k)));
    const auto sum = characterize(a, table) + characterize(b, table);
    a.insert(a.end(), b.begin(), b.end());
    REQUIRE(close(characterize(a, table), sum));
  }
}

TEST_CASE("midpoint_from_processes agrees with a triple-loop oracle") {
  Gen g(12);
  for (int i = 0; i < kCases; ++i) {
    const auto table = random_table(g);
    std::vector<ProcessThroughput> procs;
    const int n = g.integer(1, 5);
    for (int j = 0; j < n; ++j) {
      ProcessThroughput p;
      p.amount = g.magnitude(1e-4, 1e4);
      p.unit = "u" + std::to_string(j);
      p.factors.unit = p.unit;
      for (const auto& k : kPollutants) {
        if (g.coin(0.8)) p.factors.kg_per_unit[k] = g.magnitude(1e-9, 1.0);
      }
      procs.push_back(p);
    }
    std::array<double, 3> oracle{0, 0, 0};
    for (const auto& p : procs) {
      for (const auto& k : kPollutants) {
        const auto it = p.factors.kg_per_unit.find(k);
        if (it == p.factors.kg_per_unit.end()) continue;
        for (std::size_t c = 0; c < 3; ++c) {
          oracle[c] += p.amount * it->second * table.factor(k, kCategories[c]);
        }
      }
    }
    const auto m = midpoint_from_processes(procs, table);
    for (std::size_t c = 0; c < 3; ++c) REQUIRE(rel_close(m[kCategories[c]], oracle[c], 1e-11));
  }
}

TEST_CASE("use-stage midpoints are linear in energy") {
  Gen g(13);
  const auto& b = fixture();
  const auto regions = b.grids.regions();
  for (int i = 0; i < kCases; ++i) {
    const auto& region = regions[g.integer(0, static_cast<int>(regions.size()) - 1)];
    const auto& grid = b.grids.resolve(region, *b.grids.years(region).begin());
    const double e1 = g.magnitude(1e-3, 1e8), e2 = g.magnitude(1e-3, 1e8);
    const auto sum = use_midpoints(e1, grid, b.characterization) + use_midpoints(e2, grid, b.characterization);
    REQUIRE(close(use_midpoints(e1 + e2, grid, b.characterization), sum, 1e-11));
    REQUIRE(use_midpoints(0.0, grid, b.characterization).is_zero());
  }
}

TEST_CASE("transport midpoints are linear in mass") {
  Gen g(14);
  const auto& b = fixture();
  for (int i = 0; i < kCases; ++i) {
    std::vector<TransportLeg> legs;
    const int n = g.integer(1, 3);
    for (int j = 0; j < n; ++j) legs.push_back({g.coin() ? TransportMode::Truck : TransportMode::Ship, g.uniform(1, 2e4)});
    const int year = g.integer(2016, 2023);
    const double m = g.magnitude(1e-3, 1e3), k = g.magnitude(1e-3, 1e3);
    const auto one = transport_midpoints(m, legs, b.transport, year, b.characterization);
    REQUIRE(close(transport_midpoints(k * m, legs, b.transport, year, b.characterization), one.scaled(k)));
    // Splitting a leg in two preserves tonne-km and so the midpoint.
    auto split = legs;
    const auto first = split.front();
    split.front().distance_km = first.distance_km * 0.25;
    split.push_back({first.mode, first.distance_km * 0.75});
    REQUIRE(close(transport_midpoints(m, split, b.transport, year, b.characterization), one, 1e-11));
  }
}

TEST_CASE("EoL mix is linear in mass and reduces to the proxy for uniform pathways") {
  Gen g(15);
  for (int i = 0; i < kCases; ++i) {
    const double r = g.uniform(0, 1), inc = g.uniform(0, 1 - r);
    EolProfile p{"rand", r, inc, 1.0 - r - inc, g.uniform(0, 0.5),
                 random_midpoint(g), random_midpoint(g), random_midpoint(g), random_midpoint(g)};
    const double m = g.magnitude(1e-3, 1e3), k = g.magnitude(1e-3, 1e3);
    REQUIRE(close(eol_midpoints(k * m, p), eol_midpoints(m, p).scaled(k)));

    const auto v = random_midpoint(g);
    p.f_recycle = p.f_incinerate = p.f_landfill = v;
    p.f_ash = {};
    const double ref_mass = g.magnitude(1e-2, 10);
    const MassProxy proxy("u", v.scaled(ref_mass), ref_mass);
    REQUIRE(close(eol_midpoints(m, p), eol_midpoints_proxy(m, proxy), 1e-11));
  }
}

TEST_CASE("endpoint scaling preserves ranking") {
  Gen g(16);
  const auto& phi = fixture().endpoint;
  for (int i = 0; i < kCases; ++i) {
    const auto a = random_midpoint(g), b = random_midpoint(g);
    const auto scaled = phi.scaled(g.magnitude(1e-6, 1e6));
    const bool before = to_endpoint(a, phi).value < to_endpoint(b, phi).value;
    const bool after = to_endpoint(a, scaled).value < to_endpoint(b, scaled).value;
    REQUIRE(before == after);
  }
}

TEST_CASE("reports close under random configurations") {
  Gen g(17);
  const auto ids = device_ids();
  const auto regions = fixture().grids.regions();
  for (int i = 0; i < kCases; ++i) {
    EngineConfig cfg;
    cfg.duty = g.uniform(0, 1);
    cfg.pue = g.uniform(1, 2);
    cfg.region = regions[g.integer(0, static_cast<int>(regions.size()) - 1)];
    if (g.coin()) cfg.lifetime_h = g.uniform(8760, 87600);
    Engine e(fixture(), cfg);
    const auto r = e.device_report(ids[g.integer(0, static_cast<int>(ids.size()) - 1)]);
    REQUIRE_NOTHROW(r.verify());
    double stages = 0.0;
    for (auto s : kEmbodiedStages) stages += r.stages[s].endpoint.value;
    REQUIRE(rel_close(stages, r.ebi, kTol));
    REQUIRE(rel_close(r.obi, r.stages[Stage::Use].endpoint.value, kTol));
  }
}

TEST_CASE("amortization is linear and splits additively") {
  Gen g(18);
  const auto ids = device_ids();
  Engine e(fixture());
  for (int i = 0; i < kCases; ++i) {
    WorkloadRecord w;
    w.id = "p";
    const int n = g.integer(0, 3);
    for (int j = 0; j < n; ++j) w.devices.push_back({ids[g.integer(0, static_cast<int>(ids.size()) - 1)], g.uniform(0.01, 8)});
    const double t1 = g.uniform(0, 2e4), t2 = g.uniform(0, 2e4);
    w.hours = t1;
    const double a = e.workload_ebi(w).value;
    w.hours = t2;
    const double b = e.workload_ebi(w).value;
    w.hours = t1 + t2;
    REQUIRE(rel_close(e.workload_ebi(w).value, a + b, kTol));
    auto doubled = w;
    for (auto& c : doubled.devices) c.count *= 2;
    REQUIRE(rel_close(e.workload_ebi(doubled).value, 2 * e.workload_ebi(w).value, kTol));
  }
}

TEST_CASE("bundle hash ignores row order and tracks content") {
  Gen g(19);
  testsupport::TempDir dir("prop-hash");
  testsupport::copy_bundle(FABRIC_BUNDLE_DIR, dir.path());
  const auto reference = fixture().version;
  const auto grids = testsupport::read_file(dir.path() / "grids.csv");
  std::vector<std::string> rows;
  std::string header;
  {
    std::istringstream is(grids);
    std::getline(is, header);
    for (std::string l; std::getline(is, l);) {
      if (!l.empty()) rows.push_back(l);
    }
  }
  for (int i = 0; i < kCases; ++i) {
    std::shuffle(rows.begin(), rows.end(), g.engine());
    std::string text = header + "\n";
    for (const auto& r : rows) text += r + "\n";
    testsupport::write_file(dir.path() / "grids.csv", text);
    REQUIRE(load_bundle(dir.path()).version == reference);
  }
}
