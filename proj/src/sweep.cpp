#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "lagproj/io.hpp"

namespace lagproj {
namespace {

std::string describe_policy(const RunConfig& c) {
  std::ostringstream os;
  os << "cfl=" << c.cfl << ";source_cap=" << (c.source_cap_enabled ? "on" : "off")
     << ";M=" << c.implicit_multiplier << ";safety=" << c.safety;
  return os.str();
}

Snapshot reference_for(const RunConfig& config) {
  switch (config.reference.kind) {
    case ReferenceKind::analytic:
      return analytic_reference(config, config.t_end);
    case ReferenceKind::file:
      return read_snapshot_csv(config.reference.path);
    case ReferenceKind::none:
      break;
  }
  throw ConfigError("a reference (analytic or a snapshot file) is required to measure errors");
}

ErrorReport measure(const RunConfig& config) {
  const auto result = run(config);
  auto report = error_norms(result.snapshots.back(), reference_for(config));
  report.dt_policy = describe_policy(config);
  report.wall_clock_s = result.wall_clock_s;
  return report;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
}

std::string stokes_tag(double st) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "st%g", st);
  return buf;
}

}  // namespace

std::vector<SweepRow> convergence_sweep(const RunConfig& base, const std::vector<Index>& cell_counts) {
  if (cell_counts.empty()) throw InvalidParameter("a sweep needs at least one cell count");
  for (std::size_t i = 1; i < cell_counts.size(); ++i) {
    if (cell_counts[i] <= cell_counts[i - 1]) throw InvalidParameter("cell counts must be strictly ascending");
  }
  std::vector<std::future<ErrorReport>> jobs;
  jobs.reserve(cell_counts.size());
  for (const Index n : cell_counts) {
    RunConfig c = base;
    c.n_cells = n;
    c.snapshot_times.clear();
    jobs.push_back(std::async(std::launch::async, [c] { return measure(c); }));
  }
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < jobs.size(); ++i) rows.push_back({cell_counts[i], jobs[i].get(), base.scheme});
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "n_cells,l1,l2,linf,scheme\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n_cells) + ',' + fmt(r.report.l1) + ',' + fmt(r.report.l2) + ',' + fmt(r.report.linf) +
           ',' + std::string(to_string(r.scheme)) + '\n';
  }
  return out;
}

void reproduce_paper(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root);

  struct Job {
    std::string name;
    RunConfig config;
  };
  const auto base = [](SchemeKind scheme, double st, Index n) {
    RunConfig c;
    c.scheme = scheme;
    c.st = st;
    c.n_cells = n;
    return c;
  };

  std::vector<Job> jobs;
  for (const double st : {0.1, 0.01, 0.001, 1e-4}) {
    for (const auto scheme : {SchemeKind::ap_explicit, SchemeKind::non_ap_explicit}) {
      RunConfig c = base(scheme, st, 100);
      c.reference = st <= 1e-3 ? ReferenceSpec{ReferenceKind::analytic, {}}
                               : ReferenceSpec{ReferenceKind::file, (root / (stokes_tag(st) + "_reference_n2000.csv")).string()};
      jobs.push_back({stokes_tag(st) + "_" + std::string(to_string(scheme)) + "_n100", c});
    }
  }
  for (const double m : {10.0, 50.0}) {
    for (const auto scheme : {SchemeKind::ap_implicit, SchemeKind::non_ap_implicit}) {
      RunConfig c = base(scheme, 1e-4, 100);
      c.implicit_multiplier = m;
      c.reference = {ReferenceKind::analytic, {}};
      jobs.push_back({"st0.0001_" + std::string(to_string(scheme)) + "_M" + std::to_string(static_cast<int>(m)) + "_n100", c});
    }
  }

  // Fine references first: the moderate-Stokes runs are measured against them.
  std::vector<Job> references;
  for (const double st : {0.1, 0.01}) references.push_back({stokes_tag(st) + "_reference_n2000", base(SchemeKind::ap_explicit, st, 2000)});

  std::ostringstream manifest;
  manifest << "version: " << version_string() << "\n\n";
  const auto record = [&](const Job& job) {
    write_text(root / (job.name + ".cfg"), emit_config(job.config));
    manifest << "[" << job.name << "]\n" << emit_config(job.config) << '\n';
  };

  {
    std::vector<std::future<Snapshot>> runs;
    for (const auto& job : references) runs.push_back(std::async(std::launch::async, [&job] { return run(job.config).snapshots.back(); }));
    for (std::size_t i = 0; i < runs.size(); ++i) {
      write_snapshot_csv(runs[i].get(), (root / (references[i].name + ".csv")).string());
      record(references[i]);
    }
  }

  RunConfig analytic_cfg = base(SchemeKind::asymptotic_reference, 1e-4, 100);
  write_snapshot_csv(analytic_reference(analytic_cfg, analytic_cfg.t_end), (root / "analytic_n100.csv").string());

  std::vector<std::future<std::pair<Snapshot, ErrorReport>>> runs;
  for (const auto& job : jobs) {
    runs.push_back(std::async(std::launch::async, [&job] {
      const auto result = run(job.config);
      auto report = error_norms(result.snapshots.back(), reference_for(job.config));
      report.wall_clock_s = result.wall_clock_s;
      return std::make_pair(result.snapshots.back(), report);
    }));
  }
  std::string errors = "name,n_cells,l1,l2,linf\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto [snapshot, report] = runs[i].get();
    write_snapshot_csv(snapshot, (root / (jobs[i].name + ".csv")).string());
    errors += jobs[i].name + ',' + std::to_string(report.cells) + ',' + fmt(report.l1) + ',' + fmt(report.l2) + ',' +
              fmt(report.linf) + '\n';
    record(jobs[i]);
  }
  write_text(root / "errors.csv", errors);

  const std::vector<Index> counts{25, 50, 100, 200};
  const auto sweep_pair = [&](SchemeKind ap, SchemeKind non_ap, double m, const std::string& name) {
    std::string table;
    for (const auto scheme : {ap, non_ap}) {
      RunConfig c = base(scheme, 1e-4, 100);
      c.implicit_multiplier = m;
      c.reference = {ReferenceKind::analytic, {}};
      const auto csv = sweep_csv(convergence_sweep(c, counts));
      table += table.empty() ? csv : csv.substr(csv.find('\n') + 1);
      record({name + "_" + std::string(to_string(scheme)), c});
    }
    write_text(root / (name + ".csv"), table);
  };
  sweep_pair(SchemeKind::ap_explicit, SchemeKind::non_ap_explicit, 1.0, "sweep_explicit");
  sweep_pair(SchemeKind::ap_implicit, SchemeKind::non_ap_implicit, 10.0, "sweep_implicit_M10");
  sweep_pair(SchemeKind::ap_implicit, SchemeKind::non_ap_implicit, 50.0, "sweep_implicit_M50");

  write_text(root / "manifest.txt", manifest.str());
}

}  // namespace lagproj
