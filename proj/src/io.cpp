#include "lagproj/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lagproj/asymptotic.hpp"

#ifndef LAGPROJ_VERSION
#define LAGPROJ_VERSION "unknown"
#endif

namespace lagproj {
namespace {

constexpr const char* kHeader = "x,rho,u,eps,P";

void append_double(std::string& out, double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(len));
}

struct GridShape {
  double left;
  double right;
  double dx;
};

GridShape shape_of(const Snapshot& s) {
  if (s.size() < 2) throw InvalidParameter("snapshot needs at least two cells");
  const double dx = s.x(1) - s.x(0);
  return {s.x(0) - dx / 2, s.x(s.size() - 1) + dx / 2, dx};
}

}  // namespace

std::string version_string() { return LAGPROJ_VERSION; }

std::string snapshot_csv(const Snapshot& s) {
  std::string out = kHeader;
  out += '\n';
  for (Index j = 0; j < s.size(); ++j) {
    append_double(out, s.x(j));
    for (const double v : {s.rho(j), s.u(j), s.eps(j), s.P(j)}) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

void write_snapshot_csv(const Snapshot& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << snapshot_csv(s);
  if (!out) throw IoError("failed writing '" + path + "'");
}

Snapshot read_snapshot_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw IoError("'" + path + "' does not start with " + kHeader);

  std::vector<std::array<double, 5>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, 5> row{};
    const char* p = line.c_str();
    for (std::size_t c = 0; c < row.size(); ++c) {
      char* end = nullptr;
      row[c] = std::strtod(p, &end);
      const char expected = c + 1 < row.size() ? ',' : '\0';
      if (end == p || *end != expected) {
        throw IoError("'" + path + "' line " + std::to_string(line_no) + ": malformed row");
      }
      p = end + 1;
    }
    rows.push_back(row);
  }

  Snapshot s;
  const auto n = static_cast<Index>(rows.size());
  s.x.resize(n);
  s.rho.resize(n);
  s.u.resize(n);
  s.eps.resize(n);
  s.P.resize(n);
  for (Index j = 0; j < n; ++j) {
    const auto& r = rows[static_cast<std::size_t>(j)];
    s.x(j) = r[0];
    s.rho(j) = r[1];
    s.u(j) = r[2];
    s.eps(j) = r[3];
    s.P(j) = r[4];
  }
  if (n > 1) {
    s.diagnostics.total_mass = s.rho.sum() * (s.x(1) - s.x(0));
    s.diagnostics.max_abs_u = s.u.abs().maxCoeff();
    s.diagnostics.min_rho = s.rho.minCoeff();
  }
  return s;
}

Array<double> restrict_average(const Array<double>& fine, Index factor) {
  if (factor < 1 || fine.size() % factor != 0) throw InvalidParameter("restriction factor must divide the cell count");
  const Index n = fine.size() / factor;
  Array<double> coarse(n);
  for (Index j = 0; j < n; ++j) coarse(j) = fine.segment(j * factor, factor).sum() / static_cast<double>(factor);
  return coarse;
}

ErrorReport error_norms(const Snapshot& solution, const Snapshot& reference) {
  const auto a = shape_of(solution);
  const auto b = shape_of(reference);
  const double width = a.right - a.left;
  if (std::abs(a.left - b.left) > 1e-9 * width || std::abs(a.right - b.right) > 1e-9 * width) {
    throw InvalidParameter("solution and reference cover different domains");
  }
  const Index n = solution.size();
  if (reference.size() % n != 0) {
    throw InvalidParameter("reference resolution " + std::to_string(reference.size()) +
                           " is not an integer multiple of " + std::to_string(n));
  }
  const Array<double> ref = restrict_average(reference.rho, reference.size() / n);
  const Array<double> diff = (solution.rho - ref).abs();

  ErrorReport r;
  r.l1 = diff.sum() * a.dx;
  r.l2 = std::sqrt(diff.square().sum() * a.dx);
  r.linf = diff.maxCoeff();
  r.cells = n;
  return r;
}

Snapshot analytic_reference(const RunConfig& config, double t) {
  const auto grid = make_grid(config);
  const double lambda = subgrid_coefficients(config.st, config.gas()).lambda;
  Snapshot s;
  s.time = t;
  s.x = grid.centers;
  s.rho = heat_kernel_profile(grid, t, config.sigma0, config.tau_g, config.u_g);
  s.u.resize(grid.n_cells);
  s.eps.resize(grid.n_cells);
  for (Index j = 0; j < grid.n_cells; ++j) {
    s.u(j) = heat_kernel_velocity(grid.centers(j), t, config.sigma0, config.tau_g, config.u_g);
    s.eps(j) = heat_kernel_internal_energy(grid.centers(j), t, config.sigma0, config.tau_g, config.u_g);
  }
  s.P = s.rho * (2.0 * s.eps + lambda);
  s.diagnostics.total_mass = s.rho.sum() * grid.dx;
  s.diagnostics.max_abs_u = s.u.abs().maxCoeff();
  s.diagnostics.min_rho = s.rho.minCoeff();
  return s;
}

}  // namespace lagproj
