#pragma once
// Scheme composition and time-step selection.
//
// One step of a Lagrange-projection scheme is
//   Lagrangian (acoustic + drag)  ->  transport  ->  [pointwise drag]  ->  energy relaxation
// where the pointwise drag only appears in the non-asymptotic-preserving
// baseline, whose Lagrangian step carries no source at the faces.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string_view>
#include <vector>

#include "lagproj/acoustic.hpp"
#include "lagproj/asymptotic.hpp"
#include "lagproj/mesh.hpp"
#include "lagproj/model.hpp"
#include "lagproj/sources.hpp"
#include "lagproj/transport.hpp"

namespace lagproj {

enum class SchemeKind { ap_explicit, ap_implicit, non_ap_explicit, non_ap_implicit, asymptotic_reference };

constexpr bool is_implicit(SchemeKind s) { return s == SchemeKind::ap_implicit || s == SchemeKind::non_ap_implicit; }
constexpr bool is_lagrange_projection(SchemeKind s) { return s != SchemeKind::asymptotic_reference; }
constexpr SourceTreatment source_treatment(SchemeKind s) {
  return (s == SchemeKind::ap_explicit || s == SchemeKind::ap_implicit) ? SourceTreatment::upwinded
                                                                         : SourceTreatment::omitted;
}

struct TimeStepPolicy {
  double cfl = 0.5;
  bool source_cap_enabled = true;      ///< dt <= St / 2
  double implicit_multiplier = 1.0;    ///< implicit dt = M x explicit dt
  double safety = 1.05;                ///< relaxation speed a = safety * max(rho c)
};

/// Every bound that can limit the step; +inf when a bound does not apply.
template <typename Scalar>
struct TimeStepBounds {
  Scalar source = std::numeric_limits<Scalar>::infinity();
  Scalar acoustic = std::numeric_limits<Scalar>::infinity();
  Scalar lagrangian = std::numeric_limits<Scalar>::infinity();
  Scalar transport = std::numeric_limits<Scalar>::infinity();

  /// min(St/2, CFL dx / max c): the two constraints stated for the test case.
  [[nodiscard]] Scalar formula() const { return std::min(source, acoustic); }
  [[nodiscard]] Scalar dt() const { return std::min({source, acoustic, lagrangian, transport}); }

  [[nodiscard]] std::string_view binding() const {
    const Scalar d = dt();
    if (d == source) return "source";
    if (d == acoustic) return "acoustic";
    if (d == lagrangian) return "lagrangian";
    return "transport";
  }
};

/// Physics and numerics shared by every step of a run.
template <typename Scalar>
struct SchemeSetup {
  Scalar dx;
  GasClosure<Scalar> gas;
  ModelCoefficients<Scalar> coeffs;
  TimeStepPolicy policy;
  BoundaryPolicy boundary = BoundaryPolicy::transmissive;
};

template <typename Scalar>
struct StepResult {
  FieldSet<Scalar> fields;
  Scalar dt;
  int attempts;
};

namespace detail {

template <typename Scalar>
void require_finite_dt(Scalar dt) {
  using std::isfinite;
  if (!(isfinite(dt) && dt > Scalar(0))) {
    std::ostringstream os;
    os << "no finite positive time step is admissible (dt = " << dt << ")";
    throw ConfigError(os.str());
  }
}

}  // namespace detail

/// Explicit time-step bounds on the current state. Ghosts of f must be filled.
/// The transport bound uses the explicit star states of the requested source treatment;
/// for a pressureless state (a = 0) it falls back to the cell velocities.
template <typename Scalar>
TimeStepBounds<Scalar> explicit_dt(const FieldSet<Scalar>& f, const SchemeSetup<Scalar>& setup,
                                   SourceTreatment treatment = SourceTreatment::upwinded) {
  TimeStepBounds<Scalar> b;
  const auto& c = setup.coeffs;
  if (setup.policy.source_cap_enabled) b.source = c.st / Scalar(2);

  Scalar c_max = 0;
  for (Index j = 0; j < f.n_cells(); ++j) c_max = std::max(c_max, sound_speed(cons_to_prim(f.at(j)).eps, c.lambda));
  if (c_max > Scalar(0)) b.acoustic = Scalar(setup.policy.cfl) * setup.dx / c_max;

  const Scalar a = Scalar(setup.policy.safety) * max_impedance(f, c.lambda);
  if (a > Scalar(0)) {
    const auto mass = mass_geometry(f, setup.dx);
    b.lagrangian = lagrangian_cfl_dt(mass, a);
    const auto r = relaxation_state(f, c.lambda, a);
    const auto star = detail::interface_states(r.w_fwd, r.w_bwd, mass, a, c.st, setup.gas.u_g, treatment);
    b.transport = transport_cfl_dt(star.u_star, setup.dx);
  } else {
    using std::abs;
    const Scalar u_max = (f.mom / f.rho).abs().maxCoeff();
    if (u_max > Scalar(0)) b.transport = setup.dx / (Scalar(2) * u_max);
  }
  return b;
}

/// Step the scheme would take from f, before clipping to an output time.
template <typename Scalar>
Scalar planned_dt(SchemeKind scheme, const FieldSet<Scalar>& f, const SchemeSetup<Scalar>& setup) {
  Scalar dt;
  if (scheme == SchemeKind::asymptotic_reference) {
    dt = Scalar(setup.policy.cfl) * advection_diffusion_dt(setup.gas.u_g, setup.gas.tau_g, setup.dx);
  } else {
    const auto b = explicit_dt(f, setup, source_treatment(scheme));
    if (is_implicit(scheme)) {
      const Scalar base = std::min({b.source, b.acoustic, b.lagrangian});
      dt = std::min(Scalar(setup.policy.implicit_multiplier) * base, b.transport);
    } else {
      dt = b.dt();
    }
  }
  detail::require_finite_dt(dt);
  return dt;
}

/// Advances f by exactly dt; throws StepRejected if a stability bound is violated.
template <typename Scalar>
FieldSet<Scalar> advance(SchemeKind scheme, const FieldSet<Scalar>& f, const SchemeSetup<Scalar>& setup, Scalar dt) {
  const auto& gas = setup.gas;
  const auto& coeffs = setup.coeffs;
  FieldSet<Scalar> out(f.n_cells());

  if (scheme == SchemeKind::asymptotic_reference) {
    const Array<Scalar> rho = advection_diffusion_step(f.rho, gas.u_g, gas.tau_g, dt, setup.dx);
    const Array<Scalar> u = asymptotic_velocity(rho, gas.tau_g, gas.u_g, setup.dx);
    const Array<Scalar> eps = asymptotic_internal_energy(rho, gas.tau_g, setup.dx);
    for (Index j = 0; j < rho.size(); ++j) out.set(j, prim_to_cons(PrimitiveState<Scalar>{rho(j), u(j), eps(j)}));
    apply_boundary(out, setup.boundary);
    return out;
  }

  const auto treatment = source_treatment(scheme);
  const Scalar a = relaxation_speed(f, coeffs, Scalar(setup.policy.safety)).a;
  const auto lag = is_implicit(scheme)
                       ? lagrangian_implicit_step(f, setup.dx, gas, coeffs, a, dt, setup.boundary, treatment)
                       : lagrangian_explicit_step(f, setup.dx, gas, coeffs, a, dt, treatment);
  out = transport_step(to_fields(lag, setup.boundary), lag.star.u_star, dt, setup.dx);
  if (treatment == SourceTreatment::omitted) apply_pointwise_drag(out, gas, coeffs.st, dt);
  relax_internal_energy(out, coeffs, dt);
  apply_boundary(out, setup.boundary);
  if (!(out.interior_rho() > Scalar(0)).all()) throw PositivityError("density became non-positive after transport");
  return out;
}

/// One full step with the scheme's own time step (capped by dt_limit). A rejected
/// step is retried once with the admissible dt reported by the rejection.
template <typename Scalar>
StepResult<Scalar> step(SchemeKind scheme, const FieldSet<Scalar>& f, const SchemeSetup<Scalar>& setup,
                        Scalar dt_limit = std::numeric_limits<Scalar>::infinity()) {
  Scalar dt = std::min(planned_dt(scheme, f, setup), dt_limit);
  try {
    return {advance(scheme, f, setup, dt), dt, 1};
  } catch (const StepRejected& e) {
    const Scalar retry = Scalar(e.admissible_dt());
    if (!(retry < dt)) throw;
    return {advance(scheme, f, setup, retry), retry, 2};
  }
}

struct Diagnostics {
  double total_mass = 0;
  double max_abs_u = 0;
  double min_rho = 0;
  double dt = 0;
};

/// Time-stamped cell arrays.
struct Snapshot {
  double time = 0;
  Array<double> x;
  Array<double> rho;
  Array<double> u;
  Array<double> eps;
  Array<double> P;
  Diagnostics diagnostics;

  [[nodiscard]] Index size() const { return x.size(); }
};

Snapshot make_snapshot(double time, const Grid1D<double>& grid, const FieldSet<double>& f, double lambda,
                       double dt_used);

struct RunConfig;

struct RunResult {
  std::vector<Snapshot> snapshots;
  long steps = 0;
  double wall_clock_s = 0;
};

/// Called for every snapshot as soon as it is taken, so output survives a later failure.
using SnapshotSink = std::function<void(const Snapshot&)>;

SchemeSetup<double> make_setup(const RunConfig& config);
Grid1D<double> make_grid(const RunConfig& config);
FieldSet<double> make_initial_fields(const RunConfig& config, const Grid1D<double>& grid);

/// Integrates from t = 0 to t_end, landing exactly on every snapshot time.
RunResult run(const RunConfig& config, const SnapshotSink& sink = {});

}  // namespace lagproj
