// Command-line front end: run, sweep, compare, reproduce-paper.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lagproj/io.hpp"

namespace fs = std::filesystem;
using namespace lagproj;

namespace {

fs::path results_dir(const std::string& flag, const RunConfig& config, const std::string& config_path) {
  if (!flag.empty()) return flag;
  if (!config.output_path.empty()) return config.output_path;
  return fs::path("results") / fs::path(config_path).stem();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
}

void write_manifest(const fs::path& dir, const RunConfig& config, const std::string& extra) {
  std::ostringstream os;
  os << "version: " << version_string() << '\n' << extra << "\n[config]\n" << emit_config(config);
  write_file(dir / "manifest.txt", os.str());
}

std::string time_tag(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "snapshot_t%.6g.csv", t);
  return buf;
}

std::string format_norms(const ErrorReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "l1=%.17g l2=%.17g linf=%.17g cells=%lld", r.l1, r.l2, r.linf,
                static_cast<long long>(r.cells));
  return buf;
}

int cmd_run(const std::string& config_path, const std::string& out_flag) {
  const auto config = load_config(config_path);
  const auto dir = results_dir(out_flag, config, config_path);
  fs::create_directories(dir);

  std::ostringstream files;
  const auto result = run(config, [&](const Snapshot& s) {
    const auto name = time_tag(s.time);
    write_snapshot_csv(s, (dir / name).string());
    files << "snapshot: " << name << " t=" << s.time << " mass=" << s.diagnostics.total_mass
          << " min_rho=" << s.diagnostics.min_rho << '\n';
  });
  const auto& last = result.snapshots.back();
  write_snapshot_csv(last, (dir / "final.csv").string());

  std::ostringstream extra;
  extra << "steps: " << result.steps << "\nwall_clock_s: " << result.wall_clock_s << '\n' << files.str();
  if (config.reference.kind != ReferenceKind::none) {
    const auto ref = config.reference.kind == ReferenceKind::analytic ? analytic_reference(config, config.t_end)
                                                                      : read_snapshot_csv(config.reference.path);
    const auto report = error_norms(last, ref);
    extra << "error: " << format_norms(report) << '\n';
    std::cout << format_norms(report) << '\n';
  }
  write_manifest(dir, config, extra.str());
  std::cout << "wrote " << (dir / "final.csv").string() << " (" << result.steps << " steps)\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<Index>& cells, const std::string& out_flag) {
  const auto config = load_config(config_path);
  const auto rows = convergence_sweep(config, cells);
  const auto csv = sweep_csv(rows);
  std::cout << csv;
  const auto dir = results_dir(out_flag, config, config_path);
  fs::create_directories(dir);
  write_file(dir / "sweep.csv", csv);
  std::ostringstream extra;
  extra << "cells:";
  for (const auto n : cells) extra << ' ' << n;
  extra << '\n';
  for (const auto& r : rows) extra << "n=" << r.n_cells << " wall_clock_s=" << r.report.wall_clock_s << " dt_policy=" << r.report.dt_policy << '\n';
  write_manifest(dir, config, extra.str());
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b) {
  std::cout << format_norms(error_norms(read_snapshot_csv(a), read_snapshot_csv(b))) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrange-projection relaxation solver for the dispersed-phase moment system"};
  app.require_subcommand(1);

  std::string config_path, out_dir, csv_a, csv_b, repro_dir = "results/reproduce";
  std::vector<Index> cells;

  auto* run_cmd = app.add_subcommand("run", "run one configuration and write snapshots");
  run_cmd->add_option("config", config_path, "configuration file")->required();
  run_cmd->add_option("--out", out_dir, "results directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "error against the reference for several resolutions");
  sweep_cmd->add_option("config", config_path, "configuration file")->required();
  sweep_cmd->add_option("--cells", cells, "ascending cell counts")->delimiter(',')->required();
  sweep_cmd->add_option("--out", out_dir, "results directory");

  auto* compare_cmd = app.add_subcommand("compare", "density error norms of a against b");
  compare_cmd->add_option("a", csv_a)->required();
  compare_cmd->add_option("b", csv_b)->required();

  auto* repro_cmd = app.add_subcommand("reproduce-paper", "regenerate every test-case result");
  repro_cmd->add_option("--out", repro_dir, "results directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return cmd_run(config_path, out_dir);
    if (*sweep_cmd) return cmd_sweep(config_path, cells, out_dir);
    if (*compare_cmd) return cmd_compare(csv_a, csv_b);
    if (*repro_cmd) {
      reproduce_paper(repro_dir);
      std::cout << "wrote " << repro_dir << '\n';
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
