#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "fabric/cli.hpp"
#include "fabric/dataset.hpp"
#include "fabric/lifecycle.hpp"
#include "support.hpp"

using namespace fabric;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), {"--bundle", FABRIC_BUNDLE_DIR});
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

const std::string kScenario = std::string(FABRIC_SCENARIO_DIR) + "/hpc_workloads.scenario";

}  // namespace

TEST_CASE("unknown device exits 2 with candidates") {
  const auto r = cli({"device", "NOPE"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("candidates:") != std::string::npos);
  CHECK(r.err.find("H100") != std::string::npos);
}

TEST_CASE("bad bundle exits 3") {
  testsupport::TempDir dir("cli-bad");
  testsupport::copy_bundle(FABRIC_BUNDLE_DIR, dir.path());
  std::filesystem::remove(dir.path() / "phi.csv");
  std::ostringstream out, err;
  CHECK(run_cli({"--bundle", dir.path().string(), "device", "H100"}, out, err) == kExitDataset);
  CHECK(err.str().find("phi") != std::string::npos);
  std::ostringstream o2, e2;
  CHECK(run_cli({"bundle", "validate", dir.path().string()}, o2, e2) == kExitDataset);
}

TEST_CASE("usage errors exit 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"device"}).code == kExitUsage);
  CHECK(cli({"device", "H100", "--duty", "1.5"}).code == kExitUsage);
  CHECK(cli({"sweep", "local", "--regions", ","}).code == kExitUsage);
  CHECK(cli({"sweep", "local", "--regions", "NOWHERE"}).code == kExitUsage);
  CHECK(cli({"--format", "xml", "device", "H100"}).code == kExitUsage);
}

TEST_CASE("device CSV has a header and twelve rows") {
  const auto r = cli({"--format", "csv", "device", "H100"});
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 13);
  CHECK(ls[0].rfind("subject_kind,subject,region,year,stage,category", 0) == 0);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    CHECK(ls[i].find("species*yr") != std::string::npos);
    CHECK(ls[i].find(load_bundle(FABRIC_BUNDLE_DIR).version) != std::string::npos);
  }
}

TEST_CASE("output is byte-identical across runs") {
  for (const auto& fmt : {"csv", "json", "table"}) {
    CHECK(cli({"--format", fmt, "system", "perlmutter"}).out == cli({"--format", fmt, "system", "perlmutter"}).out);
  }
}

TEST_CASE("device JSON matches the engine") {
  const auto r = cli({"--format", "json", "device", "V100"});
  REQUIRE(r.code == kExitOk);
  const auto j = json::parse(r.out);
  const auto b = load_bundle(FABRIC_BUNDLE_DIR);
  Engine e(b);
  CHECK(j["ebi_species_yr"].get<double>() == doctest::Approx(e.device_ebi("V100").value).epsilon(1e-12));
  CHECK(j["stages"]["Mfg"].contains("ap_kg_so2_eq"));
}

TEST_CASE("workload baseline ratios are one") {
  const auto r = cli({"--format", "json", "workload", kScenario});
  REQUIRE_MESSAGE(r.code == kExitOk, r.err);
  const auto j = json::parse(r.out);
  CHECK(j["baseline"] == "n2d");
  bool seen = false;
  for (const auto& w : j["workloads"]) {
    if (w["workload"] != "n2d") continue;
    seen = true;
    CHECK(w["impact_ratio"].get<double>() == doctest::Approx(1.0));
    CHECK(w["energy_ratio"].get<double>() == doctest::Approx(1.0));
    CHECK(w["throughput_ratio"].get<double>() == doctest::Approx(1.0));
  }
  CHECK(seen);
}

TEST_CASE("one-region sweep equals the system OBI") {
  const auto s = json::parse(cli({"--format", "json", "--region", "QC", "system", "local"}).out);
  const auto w = json::parse(cli({"--format", "json", "sweep", "local", "--regions", "QC"}).out);
  REQUIRE(w["regions"].size() == 1);
  CHECK(w["regions"][0]["obi_species_yr"].get<double>() ==
        doctest::Approx(s["obi_species_yr"].get<double>()).epsilon(1e-12));
}

TEST_CASE("sweep rows are sorted and deduplicated") {
  const auto w = json::parse(cli({"--format", "json", "sweep", "local", "--regions", "TW,QC,TW,MISO"}).out);
  REQUIRE(w["regions"].size() == 3);
  CHECK(w["regions"][0]["region"] == "MISO");
  CHECK(w["regions"][2]["region"] == "TW");
}

TEST_CASE("fleet of zero is zero and scales linearly") {
  const auto z = json::parse(cli({"--format", "json", "fleet", "local", "--count", "0"}).out);
  CHECK(z["fleet_species_yr_per_yr"].get<double>() == 0.0);
  const auto one = json::parse(cli({"--format", "json", "fleet", "local", "--count", "1"}).out);
  const auto ten = json::parse(cli({"--format", "json", "fleet", "local", "--count", "10"}).out);
  CHECK(ten["fleet_species_yr_per_yr"].get<double>() ==
        doctest::Approx(10 * one["fleet_species_yr_per_yr"].get<double>()).epsilon(1e-12));
}

TEST_CASE("bundle diff of a bundle with itself is empty") {
  const auto r = cli({"--format", "csv", "bundle", "diff", FABRIC_BUNDLE_DIR, FABRIC_BUNDLE_DIR});
  CHECK(r.code == kExitOk);
  CHECK(lines(r.out).size() == 1);
  CHECK(cli({"bundle", "validate"}).code == kExitOk);
}
