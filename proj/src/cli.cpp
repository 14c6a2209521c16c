#include "fabric/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fabric/dataset.hpp"
#include "fabric/error.hpp"
#include "fabric/lifecycle.hpp"
#include "fabric/report.hpp"
#include "fabric/scenario.hpp"
#include "tabular.hpp"

namespace fabric {
namespace {

struct Options {
  std::string bundle;
  std::string format = "table";
  std::string region;
  std::optional<int> year;
  std::optional<double> duty;
  std::optional<double> years;
  std::optional<double> pue;
  double count = 1.0;
  std::string subject;
  std::string scenario;
  std::vector<std::string> regions;
  std::string diff_a, diff_b, validate_dir;
};

DatasetBundle open_bundle(const Options& o) {
  std::string dir = o.bundle;
  if (dir.empty()) {
    if (const char* env = std::getenv("FABRIC_BUNDLE")) dir = env;
  }
  if (dir.empty()) throw ValidationError("no bundle given: pass --bundle <dir> or set FABRIC_BUNDLE");
  return load_bundle(dir);
}

EngineConfig engine_config(const Options& o) {
  EngineConfig c;
  if (!o.region.empty()) c.region = o.region;
  c.year = o.year;
  c.duty = o.duty;
  c.pue = o.pue;
  return c;
}

OutputFormat output_format(const Options& o) {
  auto f = parse_format(o.format);
  if (!f) throw ValidationError("--format must be table, csv or json");
  return *f;
}

std::string render_diff(const std::vector<DiffEntry>& diff, OutputFormat fmt) {
  std::ostringstream os;
  if (fmt == OutputFormat::Json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& d : diff) {
      arr.push_back({{"table", d.table},
                     {"key", d.key},
                     {"change", std::string(to_string(d.kind))},
                     {"old", d.old_value},
                     {"new", d.new_value}});
    }
    return arr.dump(2) + "\n";
  }
  if (fmt == OutputFormat::Csv) {
    os << "table,key,change,old,new\n";
    for (const auto& d : diff) {
      os << tabular::csv_line({d.table, d.key, std::string(to_string(d.kind)), d.old_value, d.new_value}) << "\n";
    }
    return os.str();
  }
  if (diff.empty()) return "bundles have identical content\n";
  for (const auto& d : diff) {
    os << d.table << "  " << d.key << "  " << to_string(d.kind);
    if (d.kind != DiffEntry::Kind::Added) os << "  old=" << d.old_value;
    if (d.kind != DiffEntry::Kind::Removed) os << "  new=" << d.new_value;
    os << "\n";
  }
  return os.str();
}

void print_candidates(std::ostream& err, const std::vector<std::string>& candidates) {
  if (candidates.empty()) return;
  err << "candidates:";
  for (const auto& c : candidates) err << " " << c;
  err << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Biodiversity impact calculator for computing hardware", "fabric"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--bundle", o.bundle, "Dataset bundle directory (default: $FABRIC_BUNDLE)");
  app.add_option("--format", o.format, "Output format: table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--region", o.region, "Grid region for the use stage");
  app.add_option("--year", o.year, "Grid year for the use stage");

  auto* device = app.add_subcommand("device", "Stage breakdown of one device");
  device->add_option("id", o.subject, "Device id")->required();
  device->add_option("--duty", o.duty, "Duty cycle for the annual use stage")->check(CLI::Range(0.0, 1.0));

  auto* workload = app.add_subcommand("workload", "Workloads from a scenario, normalized to its baseline");
  workload->add_option("scenario", o.scenario, "Scenario file")->required();

  auto* system = app.add_subcommand("system", "Component roll-up of a system");
  system->add_option("id", o.subject, "System id")->required();
  system->add_option("--duty", o.duty)->check(CLI::Range(0.0, 1.0));
  system->add_option("--years", o.years, "Annualization horizon in years")->check(CLI::PositiveNumber);
  system->add_option("--pue", o.pue)->check(CLI::Range(1.0, 100.0));

  auto* fleet = app.add_subcommand("fleet", "Annual impact of a fleet of identical systems");
  fleet->add_option("id", o.subject, "System id")->required();
  fleet->add_option("--count", o.count, "Number of systems")->check(CLI::NonNegativeNumber);
  fleet->add_option("--duty", o.duty)->check(CLI::Range(0.0, 1.0));
  fleet->add_option("--years", o.years)->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Annual use-stage impact of a system across grid regions");
  sweep->add_option("id", o.subject, "System id")->required();
  sweep->add_option("--regions", o.regions, "Comma-separated regions")->delimiter(',')->required();
  sweep->add_option("--duty", o.duty)->check(CLI::Range(0.0, 1.0));

  auto* bundle_cmd = app.add_subcommand("bundle", "Dataset bundle tools");
  bundle_cmd->require_subcommand(1);
  auto* validate = bundle_cmd->add_subcommand("validate", "Load a bundle and report every problem");
  validate->add_option("dir", o.validate_dir, "Bundle directory (default: --bundle)");
  auto* diff = bundle_cmd->add_subcommand("diff", "Compare the content of two bundles");
  diff->add_option("a", o.diff_a)->required();
  diff->add_option("b", o.diff_b)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const auto fmt = output_format(o);
    if (*bundle_cmd) {
      if (*validate) {
        const std::string dir = o.validate_dir.empty() ? o.bundle : o.validate_dir;
        Options v = o;
        v.bundle = dir;
        const auto b = open_bundle(v);
        out << "bundle " << b.name << " (" << b.edition << ") is valid: " << b.devices.size() << " devices, "
            << b.systems.size() << " systems, " << b.grids.regions().size() << " regions; version " << b.version
            << "\n";
        return kExitOk;
      }
      const auto a = load_bundle(o.diff_a);
      const auto b = load_bundle(o.diff_b);
      out << render_diff(diff_bundles(a, b), fmt);
      return kExitOk;
    }

    const auto b = open_bundle(o);
    if (*device) {
      Engine engine(b, engine_config(o));
      out << render_report(engine.device_report(o.subject), fmt);
    } else if (*workload) {
      const auto scenario = load_scenario(o.scenario, b);
      auto cfg = scenario.config;
      if (!o.region.empty()) cfg.region = o.region;
      if (o.year) cfg.year = o.year;
      Engine engine(b, cfg);
      if (scenario.kind != SubjectKind::Workload) {
        throw ValidationError("scenario '" + scenario.name + "' is not a workload scenario");
      }
      out << render_workloads(compare_workloads(engine, scenario), b.version, fmt);
    } else if (*system) {
      Engine engine(b, engine_config(o));
      out << render_report(engine.system_rollup(o.subject, o.years), fmt);
    } else if (*fleet) {
      Engine engine(b, engine_config(o));
      const auto r = engine.system_rollup(o.subject, o.years);
      FleetResult f{o.subject, o.count, r.annualized_ebi, r.obi, fleet_projection(r, o.count)};
      out << render_fleet(f, b.version, fmt);
    } else if (*sweep) {
      auto regions = o.regions;
      regions.erase(std::remove_if(regions.begin(), regions.end(), [](const std::string& s) { return s.empty(); }),
                    regions.end());
      if (regions.empty()) throw ValidationError("--regions needs at least one region");
      std::sort(regions.begin(), regions.end());
      regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
      std::vector<SweepRow> rows;
      for (const auto& region : regions) {
        auto cfg = engine_config(o);
        cfg.region = region;
        Engine engine(b, cfg);
        const auto r = engine.system_rollup(o.subject);
        const auto& grid = engine.grid_for(region, r.year, nullptr);
        rows.push_back({r.region, r.year, r.energy_kwh, r.obi,
                        endpoint_intensity(grid, b.characterization, b.endpoint), r.co2_kg});
      }
      out << render_sweep(o.subject, rows, b.version, fmt);
    }
    return kExitOk;
  } catch (const DatasetError& e) {
    err << "dataset error: " << e.what() << "\n";
    return kExitDataset;
  } catch (const InvariantError& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ResolutionError& e) {
    err << "error: " << e.what() << "\n";
    print_candidates(err, e.candidates());
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace fabric
