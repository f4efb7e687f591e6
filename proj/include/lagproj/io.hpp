#pragma once
// Snapshot CSV files, error norms against references, convergence sweeps and
// the batch that regenerates every test-case result.

#include <string>
#include <vector>

#include "lagproj/config.hpp"
#include "lagproj/driver.hpp"

namespace lagproj {

struct ErrorReport {
  double l1 = 0;
  double l2 = 0;
  double linf = 0;
  Index cells = 0;
  std::string dt_policy;
  double wall_clock_s = 0;
};

/// Header `x,rho,u,eps,P`, one row per cell, 17 significant digits, LF endings.
void write_snapshot_csv(const Snapshot& snapshot, const std::string& path);
std::string snapshot_csv(const Snapshot& snapshot);
Snapshot read_snapshot_csv(const std::string& path);

/// Cell averages of groups of `factor` consecutive fine cells.
Array<double> restrict_average(const Array<double>& fine, Index factor);

/// Norms of rho - rho_ref. A reference that is finer by an integer factor is
/// cell-averaged onto the solution grid first.
ErrorReport error_norms(const Snapshot& solution, const Snapshot& reference);

/// Heat-kernel reference at time t on the config's grid: exact cell averages of
/// rho, pointwise closed-form u and eps.
Snapshot analytic_reference(const RunConfig& config, double t);

struct SweepRow {
  Index n_cells;
  ErrorReport report;
  SchemeKind scheme;
};

/// One run per cell count (in parallel), all measured against the base config's
/// reference at t_end.
std::vector<SweepRow> convergence_sweep(const RunConfig& base, const std::vector<Index>& cell_counts);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Runs every test-case experiment and writes CSVs plus manifest.txt into dir.
void reproduce_paper(const std::string& dir);

std::string version_string();

}  // namespace lagproj
