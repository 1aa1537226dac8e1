// Command line front end for the frog model experiment harness.
//
//   frog simulate --config exp.cfg [--seed N] [--out runs.jsonl]
//                 [--workers K] [--emit-csv]
//   frog compare  --config exp.cfg ...
//   frog shape    --config exp.cfg ...
//   frog death    --config exp.cfg ...
//   frog verify SUITE [--seed N] [--out report.jsonl]
//
// Exit codes: 0 pass, 1 order violation / suite failure, 2 usage error,
// 3 a resource cap was hit.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "frog/harness.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::int64_t seed = -1;
  int workers = 1;
  bool emit_csv = false;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path, "experiment config file")
      ->required();
  sub->add_option("--seed", o.seed, "override the config seed");
  sub->add_option("--out", o.out_path, "write JSON-lines records here");
  sub->add_option("--workers", o.workers, "replica worker threads")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--emit-csv", o.emit_csv,
                "also write summary curves next to --out");
}

int run_command(const std::string& experiment, const CommonOpts& o) {
  frog::harness::ExperimentConfig cfg =
      frog::harness::ExperimentConfig::parse_file(o.config_path);
  cfg.set("experiment", experiment);
  if (o.seed >= 0) cfg.set("seed", std::to_string(o.seed));
  if (o.emit_csv && o.out_path.empty())
    throw frog::harness::UsageError("--emit-csv requires --out");

  std::ofstream out_file, csv_file;
  std::ostream* out = &std::cout;
  if (!o.out_path.empty()) {
    out_file.open(o.out_path);
    if (!out_file)
      throw frog::harness::UsageError("cannot open " + o.out_path);
    out = &out_file;
  }
  std::ostream* csv = nullptr;
  if (o.emit_csv) {
    csv_file.open(o.out_path + ".csv");
    if (!csv_file)
      throw frog::harness::UsageError("cannot open " + o.out_path + ".csv");
    csv = &csv_file;
  }
  return frog::harness::run_experiment(cfg, *out, csv, o.workers);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frog model simulation and order-checking harness"};
  app.require_subcommand(1);

  CommonOpts sim_o, cmp_o, shp_o, dth_o;
  CLI::App* sim = app.add_subcommand("simulate", "independent seeded runs");
  add_common(sim, sim_o);
  CLI::App* cmp =
      app.add_subcommand("compare", "paired runs with empirical order checks");
  add_common(cmp, cmp_o);
  CLI::App* shp =
      app.add_subcommand("shape", "lattice activation-time comparison");
  add_common(shp, shp_o);
  CLI::App* dth =
      app.add_subcommand("death", "walk-with-death survival comparison");
  add_common(dth, dth_o);

  std::string suite;
  std::int64_t verify_seed = 0;
  std::string verify_out;
  CLI::App* ver = app.add_subcommand("verify", "fixed-seed property suites");
  ver->add_option("suite", suite,
                  "statistics | orders | operator_a | moments")
      ->required();
  ver->add_option("--seed", verify_seed, "suite seed");
  ver->add_option("--out", verify_out, "write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : frog::harness::kExitUsage;
  }

  try {
    if (sim->parsed()) return run_command("simulate", sim_o);
    if (cmp->parsed()) return run_command("compare", cmp_o);
    if (shp->parsed()) return run_command("shape", shp_o);
    if (dth->parsed()) return run_command("death", dth_o);
    if (ver->parsed()) {
      std::ofstream out_file;
      std::ostream* out = &std::cout;
      if (!verify_out.empty()) {
        out_file.open(verify_out);
        if (!out_file) {
          std::cerr << "cannot open " << verify_out << "\n";
          return frog::harness::kExitUsage;
        }
        out = &out_file;
      }
      return frog::harness::cmd_verify(
          suite, static_cast<std::uint64_t>(verify_seed), *out);
    }
  } catch (const frog::harness::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return frog::harness::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return frog::harness::kExitUsage;
  }
  return frog::harness::kExitUsage;
}
