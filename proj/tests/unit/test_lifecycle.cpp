#include <doctest.h>

#include "fabric/dataset.hpp"
#include "fabric/error.hpp"
#include "fabric/lifecycle.hpp"
#include "support.hpp"

using namespace fabric;
using testsupport::rel_close;

namespace {

const DatasetBundle& fixture() {
  static const DatasetBundle b = load_bundle(FABRIC_BUNDLE_DIR);
  return b;
}

WorkloadRecord one_device(const std::string& id, double hours, double count = 1.0) {
  WorkloadRecord w;
  w.id = "w";
  w.hours = hours;
  w.devices = {{id, count}};
  w.region = "US-avg";
  w.year = 2021;
  return w;
}

}  // namespace

TEST_CASE("device report closes and shares sum to one") {
  Engine e(fixture());
  for (const auto& [id, _] : fixture().devices) {
    const auto r = e.device_report(id);
    double stages = 0.0, ss = 0.0, cs = 0.0;
    for (auto s : kEmbodiedStages) {
      stages += r.stages[s].endpoint.value;
      ss += r.stage_share(s);
    }
    for (auto c : kCategories) cs += r.category_share(c);
    CHECK_MESSAGE(rel_close(r.ebi, stages, 1e-12), id);
    CHECK(std::abs(ss - 1.0) <= 1e-9);
    CHECK(std::abs(cs - 1.0) <= 1e-9);
    CHECK(r.ebi == doctest::Approx(e.device_ebi(id).value).epsilon(1e-12));
    CHECK(r.lifecycle == doctest::Approx(r.ebi + r.obi).epsilon(1e-12));
    CHECK(r.bundle_version == fixture().version);
  }
}

TEST_CASE("stage shares from unit vectors") {
  ImpactReport r;
  const EndpointTable phi("unit", 1.0, 1.0, 1.0);
  for (auto s : kEmbodiedStages) {
    r.stages[s].midpoint = {1, 0, 0};
    r.stages[s].endpoint = to_endpoint(r.stages[s].midpoint, phi);
  }
  r.ebi = 3.0;
  r.lifecycle = 3.0;
  CHECK_NOTHROW(r.verify());
  for (auto s : kEmbodiedStages) CHECK(r.stage_share(s) == doctest::Approx(1.0 / 3.0));
  CHECK(r.category_share(ImpactCategory::AP) == doctest::Approx(1.0));
}

TEST_CASE("verify rejects a report that does not close") {
  ImpactReport r;
  r.stages[Stage::Mfg].endpoint.value = 1.0;
  r.stages[Stage::Mfg].endpoint.breakdown = {1.0, 0.0, 0.0};
  r.ebi = 2.0;
  r.lifecycle = 2.0;
  CHECK_THROWS_AS(r.verify(), InvariantError);
}

TEST_CASE("all-zero stages give zero EBI") {
  ImpactReport r;
  CHECK_NOTHROW(r.verify());
  CHECK(r.stage_share(Stage::Mfg) == 0.0);
}

TEST_CASE("workload amortization") {
  Engine e(fixture());
  const double lt = e.lifetime_hours("H100");
  const double full = e.device_ebi("H100").value;
  CHECK(e.workload_ebi(one_device("H100", lt)).value == doctest::Approx(full).epsilon(1e-12));
  EngineConfig cfg;
  cfg.lifetime_h = 87600.0;
  Engine ten(fixture(), cfg);
  CHECK(ten.workload_ebi(one_device("H100", 876.0)).value == doctest::Approx(0.01 * full).epsilon(1e-12));
  WorkloadRecord empty = one_device("H100", 10.0);
  empty.devices.clear();
  CHECK(e.workload_ebi(empty).value == 0.0);
}

TEST_CASE("workload OBI is additive and follows energy") {
  Engine e(fixture());
  auto w = one_device("EPYC-7B12", 2.0);
  w.energy_kwh = 0.5;
  const double one = e.workload_obi(w).value;
  w.energy_kwh = 1.0;
  CHECK(e.workload_obi(w).value == doctest::Approx(2 * one).epsilon(1e-12));
  w.energy_kwh = 0.0;
  CHECK(e.workload_obi(w).value == 0.0);
  // Duty model: count-weighted sum of device draws.
  auto d = one_device("EPYC-7B12", 10.0, 2.0);
  d.duty = 1.0;
  CHECK(e.workload_energy(d) == doctest::Approx(2 * 10.0 * 240.0 / 1000.0));
}

TEST_CASE("single-device system equals the device report") {
  Engine e(fixture());
  const auto& entry = fixture().device("V100");
  SystemSpec sys{"solo", "", entry.deploy_year, {{"V100", 1.0}}};
  const auto s = e.system_rollup(sys);
  const auto d = e.device_report("V100");
  CHECK(s.ebi == doctest::Approx(d.ebi).epsilon(1e-12));
  CHECK(s.obi == doctest::Approx(d.obi).epsilon(1e-12));
  CHECK(s.energy_kwh == doctest::Approx(d.energy_kwh).epsilon(1e-12));
}

TEST_CASE("system EBI is the count-weighted sum of device EBIs") {
  Engine e(fixture());
  for (const auto& [id, sys] : fixture().systems) {
    const auto r = e.system_rollup(id);
    double expect = 0.0;
    for (const auto& c : sys.components) expect += c.count * e.device_ebi(c.device).value;
    CHECK_MESSAGE(rel_close(r.ebi, expect, 1e-12), id);
    double shares = 0.0;
    for (const auto& [cls, v] : r.class_shares) shares += v;
    CHECK(std::abs(shares - 1.0) <= 1e-9);
    CHECK(r.annualized_ebi == doctest::Approx(r.ebi / 5.0).epsilon(1e-12));
  }
}

TEST_CASE("per-TFLOPS normalization") {
  Engine e(fixture());
  const auto r = e.device_report("V100");
  const auto* n = r.normalization("tflops_fp64");
  REQUIRE(n != nullptr);
  CHECK(n->ebi == doctest::Approx(r.ebi / 7.8).epsilon(1e-12));
  CHECK(normalize(r, "x", 1.0).ebi == r.ebi);
  CHECK_THROWS_AS(normalize(r, "x", 0.0), ValidationError);
  CHECK(e.device_report("DDR4-64GB").normalization("GB") != nullptr);
}

TEST_CASE("fleet projection") {
  Engine e(fixture());
  const auto r = e.system_rollup("local");
  CHECK(fleet_projection(r, 0.0) == 0.0);
  CHECK(fleet_projection(r, 2.0) == doctest::Approx(2.0 * fleet_projection(r, 1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(fleet_projection(r, -1.0), ValidationError);
}

TEST_CASE("configuration overrides") {
  EngineConfig cfg;
  cfg.region = "QC";
  cfg.pue = 1.5;
  Engine qc(fixture(), cfg);
  Engine base(fixture());
  const auto a = base.system_rollup("local");
  const auto b = qc.system_rollup("local");
  CHECK(b.region == "QC");
  CHECK(b.energy_kwh == doctest::Approx(1.5 * a.energy_kwh));
  CHECK(b.ebi == doctest::Approx(a.ebi).epsilon(1e-12));
  CHECK(b.obi < a.obi);

  EngineConfig far;
  far.year = 2040;
  CHECK_THROWS_AS(Engine(fixture(), far).system_rollup("local"), ResolutionError);
}

TEST_CASE("fallbacks and mappings are flagged in notes") {
  Engine e(fixture());
  const auto r = e.device_report("Exos-X20");
  bool hdd_note = false;
  for (const auto& n : r.notes) hdd_note = hdd_note || n.find("estimated from 2020") != std::string::npos;
  CHECK(hdd_note);
  const auto v = e.device_report("V100");
  bool node_note = false;
  for (const auto& n : v.notes) node_note = node_note || n.find("14 nm layer count") != std::string::npos;
  CHECK(node_note);
}

TEST_CASE("unknown devices report candidates") {
  Engine e(fixture());
  try {
    e.device_report("NOPE");
    FAIL("expected ResolutionError");
  } catch (const ResolutionError& err) {
    CHECK_FALSE(err.candidates().empty());
  }
}
