#include "lagproj/driver.hpp"

#include <chrono>

#include "lagproj/config.hpp"

namespace lagproj {

Snapshot make_snapshot(double time, const Grid1D<double>& grid, const FieldSet<double>& f, double lambda,
                       double dt_used) {
  Snapshot s;
  s.time = time;
  s.x = grid.centers;
  s.rho = f.interior_rho();
  s.u = f.velocity();
  s.eps = f.internal_energy();
  s.P = s.rho * (2.0 * s.eps + lambda);
  s.diagnostics.total_mass = s.rho.sum() * grid.dx;
  s.diagnostics.max_abs_u = s.u.abs().maxCoeff();
  s.diagnostics.min_rho = s.rho.minCoeff();
  s.diagnostics.dt = dt_used;
  return s;
}

SchemeSetup<double> make_setup(const RunConfig& config) {
  const auto gas = config.gas();
  return {(config.x_max - config.x_min) / static_cast<double>(config.n_cells), gas, make_coefficients(config.st, gas),
          config.policy(), config.boundary};
}

Grid1D<double> make_grid(const RunConfig& config) { return build_grid(config.x_min, config.x_max, config.n_cells); }

FieldSet<double> make_initial_fields(const RunConfig& config, const Grid1D<double>& grid) {
  auto f = gaussian_initial_condition(grid, config.sigma0, config.initial_sampling);
  apply_boundary(f, config.boundary);
  return f;
}

RunResult run(const RunConfig& config, const SnapshotSink& sink) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const auto grid = make_grid(config);
  const auto setup = make_setup(config);
  auto fields = make_initial_fields(config, grid);

  RunResult result;
  double t = 0.0;
  double last_dt = 0.0;
  const auto emit = [&](double time) {
    result.snapshots.push_back(make_snapshot(time, grid, fields, setup.coeffs.lambda, last_dt));
    if (sink) sink(result.snapshots.back());
  };

  for (const double target : config.output_times()) {
    while (t < target) {
      const double remaining = target - t;
      auto stepped = step(config.scheme, fields, setup, remaining);
      fields = std::move(stepped.fields);
      last_dt = stepped.dt;
      t = stepped.dt >= remaining ? target : t + stepped.dt;
      ++result.steps;
    }
    emit(target);
  }
  result.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace lagproj
