#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "fabric/dataset.hpp"
#include "fabric/error.hpp"
#include "support.hpp"

using namespace fabric;
using testsupport::TempDir;

namespace {

const std::filesystem::path kBundle = FABRIC_BUNDLE_DIR;

std::string problems_text(const DatasetError& e) {
  std::string all;
  for (const auto& p : e.problems()) all += p + "\n";
  return all;
}

// Reverses the data rows of a CSV, keeping the header first.
void reverse_rows(const std::filesystem::path& p) {
  std::istringstream in(testsupport::read_file(p));
  std::string header, line;
  std::getline(in, header);
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  std::reverse(rows.begin(), rows.end());
  std::string out = header + "\n";
  for (const auto& r : rows) out += r + "\n";
  testsupport::write_file(p, out);
}

}  // namespace

TEST_CASE("the shipped bundle loads cleanly and is complete") {
  const auto b = load_bundle(kBundle);
  for (const char* id : {"EPYC-7B12", "EPYC-7443", "EPYC-7B13", "EPYC-9B14", "T4", "V100", "L40", "A100",
                         "A100-80GB", "H100", "DDR4-64GB", "PE8111", "Exos-X20"}) {
    CHECK_MESSAGE(b.devices.count(id) == 1, id);
  }
  for (const char* id : {"local", "gautschi", "perlmutter"}) CHECK(b.systems.count(id) == 1);
  for (const char* r : {"US-avg", "CA", "MISO", "TW", "QC"}) CHECK(b.grids.has_region(r));
  CHECK(b.endpoint.complete());
  CHECK(b.endpoint.model_tag() == "ReCiPe2016-H");
  CHECK(b.characterization.factor("NH3", ImpactCategory::AP) == doctest::Approx(0.93));
  for (const auto& [name, info] : b.tables) {
    CHECK_FALSE(info.provenance.source.empty());
    CHECK_FALSE(info.provenance.year.empty());
    CHECK_FALSE(info.provenance.note.empty());
  }
  CHECK(b.version.size() >= 16);
}

TEST_CASE("capacity rows become fractional device counts") {
  const auto b = load_bundle(kBundle);
  const auto& perl = b.system("perlmutter");
  auto it = std::find_if(perl.components.begin(), perl.components.end(),
                         [](const Component& c) { return c.device == "DDR4-64GB"; });
  REQUIRE(it != perl.components.end());
  CHECK(it->count == doctest::Approx(1984000.0 / 64.0));
  CHECK(std::is_sorted(perl.components.begin(), perl.components.end(),
                       [](const Component& a, const Component& c) { return a.device < c.device; }));
}

TEST_CASE("unknown ids carry candidates") {
  const auto b = load_bundle(kBundle);
  try {
    b.device("NOPE");
    FAIL("expected ResolutionError");
  } catch (const ResolutionError& e) {
    CHECK(e.candidates().size() == b.devices.size());
  }
  CHECK_THROWS_AS(b.system("frontier"), ResolutionError);
}

TEST_CASE("an EoL mix that does not sum to one names the profile") {
  TempDir dir("eol");
  testsupport::copy_bundle(kBundle, dir.path());
  REQUIRE(testsupport::replace_in_file(dir.path() / "eol.csv", "weee-mix,mix,recycle,,0.6,", "weee-mix,mix,recycle,,0.5,"));
  try {
    load_bundle(dir.path());
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    const auto text = problems_text(e);
    CHECK(text.find("weee-mix") != std::string::npos);
    CHECK(text.find("0.9") != std::string::npos);
  }
}

TEST_CASE("a device referencing a missing fab profile fails to load") {
  TempDir dir("fab");
  testsupport::copy_bundle(kBundle, dir.path());
  REQUIRE(testsupport::replace_in_file(dir.path() / "devices.csv", ",TSMC,SK-Hynix-HBM,", ",NOFAB,SK-Hynix-HBM,"));
  try {
    load_bundle(dir.path());
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(problems_text(e).find("NOFAB") != std::string::npos);
  }
}

TEST_CASE("every problem is reported, not just the first") {
  TempDir dir("many");
  testsupport::copy_bundle(kBundle, dir.path());
  REQUIRE(testsupport::replace_in_file(dir.path() / "grids.csv", "g/kWh", "g/tkm"));
  REQUIRE(testsupport::replace_in_file(dir.path() / "devices.csv", "Exos-X20,HDD,Seagate,2023",
                                       "Exos-X20,HDD,Seagate,20x3"));
  REQUIRE(testsupport::replace_in_file(dir.path() / "phi.csv", "species*yr/CTUe", "species*yr/kg"));
  try {
    load_bundle(dir.path());
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(e.problems().size() >= 3);
    const auto text = problems_text(e);
    CHECK(text.find("unit mismatch") != std::string::npos);
    CHECK(text.find("grids.csv") != std::string::npos);
    CHECK(text.find("phi.csv") != std::string::npos);
  }
}

TEST_CASE("missing provenance is a load error") {
  TempDir dir("prov");
  testsupport::copy_bundle(kBundle, dir.path());
  REQUIRE(testsupport::replace_in_file(dir.path() / "manifest", "source = TRACI 2.1 characterization factors\n", ""));
  CHECK_THROWS_AS(load_bundle(dir.path()), DatasetError);
}

TEST_CASE("bundle round-trip through write_bundle") {
  const auto a = load_bundle(kBundle);
  TempDir dir("roundtrip");
  write_bundle(a, dir.path() / "copy");
  const auto b = load_bundle(dir.path() / "copy");
  CHECK(same_content(a, b));
  CHECK(a.version == b.version);
  CHECK(diff_bundles(a, b).empty());
  // Writing the reloaded bundle again is byte-stable.
  write_bundle(b, dir.path() / "copy2");
  for (auto name : kBundleTables) {
    const std::string file = std::string(name) + ".csv";
    CHECK(testsupport::read_file(dir.path() / "copy" / file) == testsupport::read_file(dir.path() / "copy2" / file));
  }
}

TEST_CASE("version depends on content, not row order") {
  const auto a = load_bundle(kBundle);
  TempDir dir("order");
  testsupport::copy_bundle(kBundle, dir.path());
  for (auto name : kBundleTables) reverse_rows(dir.path() / (std::string(name) + ".csv"));
  const auto b = load_bundle(dir.path());
  CHECK(a.version == b.version);
  CHECK(diff_bundles(a, b).empty());
  CHECK(content_hash(a) == content_hash(b));
}

TEST_CASE("one changed grid factor is a single-entry diff") {
  const auto a = load_bundle(kBundle);
  TempDir dir("diff");
  testsupport::copy_bundle(kBundle, dir.path());
  REQUIRE(testsupport::replace_in_file(dir.path() / "grids.csv", "MISO,2021,SO2,0.95,", "MISO,2021,SO2,0.96,"));
  const auto b = load_bundle(dir.path());
  const auto d = diff_bundles(a, b);
  REQUIRE(d.size() == 1);
  CHECK(d[0].table == "grids");
  CHECK(d[0].kind == DiffEntry::Kind::Changed);
  CHECK(d[0].key.find("MISO") != std::string::npos);
  CHECK(a.version != b.version);
}

TEST_CASE("comments and blank lines are ignored") {
  TempDir dir("comments");
  testsupport::copy_bundle(kBundle, dir.path());
  auto text = testsupport::read_file(dir.path() / "transport.csv");
  testsupport::write_file(dir.path() / "transport.csv", "# freight factors\n\n" + text + "\n# end\n");
  CHECK(load_bundle(dir.path()).version == load_bundle(kBundle).version);
}
