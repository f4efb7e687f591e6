#pragma once
// Lagrangian step of the splitting: acoustic waves plus drag, solved through a
// Suliciu-type relaxation with the drag upwinded into the interface star
// states. The explicit update and its time-implicit counterpart share the
// star-state and tau/E machinery; the implicit one solves the two Riemann
// invariants w_fwd = Pi + a u, w_bwd = Pi - a u from a pentadiagonal system.
//
// Interface arrays have n + 1 entries: entry k is interface j + 1/2 with j = k - 1,
// so entry 0 is the left boundary face and entry n the right one.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lagproj/banded.hpp"
#include "lagproj/mesh.hpp"
#include "lagproj/model.hpp"

namespace lagproj {

/// Whether the drag enters the star states (asymptotic-preserving scheme) or is
/// left out of the Lagrangian step entirely (baseline splitting).
enum class SourceTreatment { upwinded, omitted };

/// Relaxation variables at equilibrium Pi = P, over all n + 2 cells.
template <typename Scalar>
struct RelaxationState {
  Array<Scalar> tau;
  Array<Scalar> w_fwd;
  Array<Scalar> w_bwd;
  Array<Scalar> etot;  ///< specific total energy E
};

template <typename Scalar>
struct StarState {
  Scalar u_star;
  Scalar p_star;
};

/// Lagrangian mass increments: dm_j = rho_j dx over n + 2 cells, dm_half over n + 1 faces.
template <typename Scalar>
struct MassGeometry {
  Array<Scalar> dm;
  Array<Scalar> dm_half;
};

template <typename Scalar>
struct RelaxationSpeed {
  Scalar a;
  Scalar safety;
};

/// Star quantities on every face, plus the drag rate (u_g - u*)/St (zero when omitted).
template <typename Scalar>
struct InterfaceStates {
  Array<Scalar> u_star;
  Array<Scalar> p_star;
  Array<Scalar> drag_rate;
};

/// Interior cells at t^{n+1=} and the faces used to get there.
template <typename Scalar>
struct LagrangianResult {
  Array<Scalar> tau;
  Array<Scalar> u;
  Array<Scalar> etot;
  InterfaceStates<Scalar> star;
};

template <typename Scalar>
MassGeometry<Scalar> mass_geometry(const FieldSet<Scalar>& f, Scalar dx) {
  const Index n = f.n_cells();
  MassGeometry<Scalar> m;
  m.dm = f.rho * dx;
  m.dm_half = (m.dm.head(n + 1) + m.dm.tail(n + 1)) / Scalar(2);
  return m;
}

template <typename Scalar>
RelaxationState<Scalar> relaxation_state(const FieldSet<Scalar>& f, Scalar lambda, Scalar a) {
  RelaxationState<Scalar> r;
  const Array<Scalar> u = f.mom / f.rho;
  r.etot = f.etot / f.rho;
  const Array<Scalar> eps = r.etot - u.square() / Scalar(2);
  const Array<Scalar> pi = f.rho * (Scalar(2) * eps + lambda);
  r.tau = f.rho.inverse();
  r.w_fwd = pi + a * u;
  r.w_bwd = pi - a * u;
  return r;
}

/// max_j rho_j c_j over the interior; zero for a pressureless state.
template <typename Scalar>
Scalar max_impedance(const FieldSet<Scalar>& f, Scalar lambda) {
  Scalar best = 0;
  for (Index j = 0; j < f.n_cells(); ++j) {
    const auto p = cons_to_prim(f.at(j));
    using std::isfinite;
    if (!(isfinite(p.u) && isfinite(p.eps))) throw AdmissibilityError("non-finite state in relaxation speed");
    best = std::max(best, p.rho * sound_speed(p.eps, lambda));
  }
  return best;
}

/// a = safety * max(rho c), the subcharacteristic bound inflated by the safety factor.
template <typename Scalar>
RelaxationSpeed<Scalar> relaxation_speed(const FieldSet<Scalar>& f, const ModelCoefficients<Scalar>& coeffs,
                                         Scalar safety = Scalar(1.05)) {
  if (!(safety >= Scalar(1))) throw InvalidParameter("relaxation safety factor must be >= 1");
  const Scalar a = safety * max_impedance(f, coeffs.lambda);
  if (!(a > Scalar(0))) throw DegenerateSpeed("relaxation speed is zero: state is pressureless");
  return {a, safety};
}

/// Star state with the drag upwinded at the face:
///   u* = (St (w_fwd_L - w_bwd_R) + u_g dm_half) / (2 a St + dm_half),  p* = (w_fwd_L + w_bwd_R) / 2.
template <typename Scalar>
StarState<Scalar> star_state_explicit(Scalar w_fwd_left, Scalar w_bwd_right, Scalar a, Scalar st, Scalar u_g,
                                      Scalar dm_half) {
  const Scalar jump = w_fwd_left - w_bwd_right;
  return {(st * jump + u_g * dm_half) / (Scalar(2) * a * st + dm_half), (w_fwd_left + w_bwd_right) / Scalar(2)};
}

/// Plain relaxation star state (no drag at the face).
template <typename Scalar>
StarState<Scalar> star_state_source_free(Scalar w_fwd_left, Scalar w_bwd_right, Scalar a) {
  return {(w_fwd_left - w_bwd_right) / (Scalar(2) * a), (w_fwd_left + w_bwd_right) / Scalar(2)};
}

namespace detail {

template <typename Scalar>
InterfaceStates<Scalar> interface_states(const Array<Scalar>& w_fwd, const Array<Scalar>& w_bwd,
                                         const MassGeometry<Scalar>& mass, Scalar a, Scalar st, Scalar u_g,
                                         SourceTreatment treatment) {
  const Index faces = mass.dm_half.size();
  InterfaceStates<Scalar> s{Array<Scalar>(faces), Array<Scalar>(faces), Array<Scalar>::Zero(faces)};
  for (Index k = 0; k < faces; ++k) {
    if (treatment == SourceTreatment::upwinded) {
      const auto star = star_state_explicit(w_fwd(k), w_bwd(k + 1), a, st, u_g, mass.dm_half(k));
      s.u_star(k) = star.u_star;
      s.p_star(k) = star.p_star;
      // (u_g - u*)/St without the cancellation of forming u_g - u* first.
      s.drag_rate(k) = (Scalar(2) * a * u_g - (w_fwd(k) - w_bwd(k + 1))) / (Scalar(2) * a * st + mass.dm_half(k));
    } else {
      const auto star = star_state_source_free(w_fwd(k), w_bwd(k + 1), a);
      s.u_star(k) = star.u_star;
      s.p_star(k) = star.p_star;
    }
  }
  return s;
}

/// First and fourth lines of the Lagrangian update, shared by both time integrations.
template <typename Scalar>
void update_volume_and_energy(LagrangianResult<Scalar>& out, const RelaxationState<Scalar>& r,
                              const MassGeometry<Scalar>& mass, Scalar dt) {
  const Index n = mass.dm.size() - 2;
  const auto& us = out.star.u_star;
  const auto& ps = out.star.p_star;
  const auto& d = out.star.drag_rate;
  out.tau.resize(n);
  out.etot.resize(n);
  for (Index j = 0; j < n; ++j) {
    const Index k = j + 1;
    const Scalar nu = dt / mass.dm(k);
    out.tau(j) = r.tau(k) + nu * (us(k) - us(k - 1));
    out.etot(j) = r.etot(k) - nu * (us(k) * ps(k) - us(k - 1) * ps(k - 1)) +
                  nu * (mass.dm_half(k) * us(k) * d(k) + mass.dm_half(k - 1) * us(k - 1) * d(k - 1)) / Scalar(2);
    if (!(out.tau(j) > Scalar(0))) {
      std::ostringstream os;
      os << "specific volume became non-positive in cell " << j << " (tau = " << out.tau(j) << ")";
      throw PositivityError(os.str());
    }
  }
}

template <typename Scalar>
void require_speed(Scalar a, Scalar dt) {
  if (!(a > Scalar(0))) throw DegenerateSpeed("relaxation speed must be positive");
  if (!(dt >= Scalar(0))) throw InvalidParameter("time step must be non-negative");
}

}  // namespace detail

/// Largest dt with a dt / dm_j <= 1/2 on every interior cell.
template <typename Scalar>
Scalar lagrangian_cfl_dt(const MassGeometry<Scalar>& mass, Scalar a) {
  const Index n = mass.dm.size() - 2;
  return mass.dm.segment(1, n).minCoeff() / (Scalar(2) * a);
}

/// Explicit Godunov-type Lagrangian step. Ghost cells of f must be filled.
template <typename Scalar>
LagrangianResult<Scalar> lagrangian_explicit_step(const FieldSet<Scalar>& f, Scalar dx, const GasClosure<Scalar>& gas,
                                                  const ModelCoefficients<Scalar>& coeffs, Scalar a, Scalar dt,
                                                  SourceTreatment treatment = SourceTreatment::upwinded) {
  detail::require_speed(a, dt);
  const Index n = f.n_cells();
  const auto mass = mass_geometry(f, dx);
  const Scalar dt_max = lagrangian_cfl_dt(mass, a);
  if (dt > dt_max * (Scalar(1) + Scalar(1e-12))) {
    std::ostringstream os;
    os << "Lagrangian CFL violated: dt = " << dt << " > " << dt_max;
    throw StepRejected(os.str(), static_cast<double>(dt_max));
  }
  const auto r = relaxation_state(f, coeffs.lambda, a);

  LagrangianResult<Scalar> out;
  out.star = detail::interface_states(r.w_fwd, r.w_bwd, mass, a, coeffs.st, gas.u_g, treatment);
  const auto& d = out.star.drag_rate;
  out.u.resize(n);
  for (Index j = 0; j < n; ++j) {
    const Index k = j + 1;
    const Scalar nu = a * dt / mass.dm(k);
    const Scalar w_fwd = r.w_fwd(k) - nu * (r.w_fwd(k) - r.w_fwd(k - 1)) +
                         dt * a * mass.dm_half(k - 1) / mass.dm(k) * d(k - 1);
    const Scalar w_bwd = r.w_bwd(k) + nu * (r.w_bwd(k + 1) - r.w_bwd(k)) -
                         dt * a * mass.dm_half(k) / mass.dm(k) * d(k);
    out.u(j) = (w_fwd - w_bwd) / (Scalar(2) * a);
  }
  detail::update_volume_and_energy(out, r, mass, dt);
  return out;
}

/// Linear system for the interleaved unknowns (w_fwd_0, w_bwd_0, w_fwd_1, ...) at t^{n+1=}.
/// Row 2j:   (1 + nu_j) W_fwd_j - nu_j (1 - th_{j-1/2}) W_fwd_{j-1} - nu_j th_{j-1/2} W_bwd_j
///             = w_fwd_j + 2 a nu_j th_{j-1/2} u_g
/// Row 2j+1: (1 + nu_j) W_bwd_j - nu_j (1 - th_{j+1/2}) W_bwd_{j+1} - nu_j th_{j+1/2} W_fwd_j
///             = w_bwd_j - 2 a nu_j th_{j+1/2} u_g
/// with nu_j = a dt / dm_j and th = dm_half / (2 a St + dm_half) (zero when the drag is omitted).
/// Transmissive ghosts enter the right-hand side at time t^n; periodic ones become corner entries.
template <typename Scalar>
BandedSystem<Scalar> assemble_implicit_system(const FieldSet<Scalar>& f, Scalar dx, const GasClosure<Scalar>& gas,
                                              const ModelCoefficients<Scalar>& coeffs, Scalar a, Scalar dt,
                                              BoundaryPolicy boundary = BoundaryPolicy::transmissive,
                                              SourceTreatment treatment = SourceTreatment::upwinded) {
  detail::require_speed(a, dt);
  const Index n = f.n_cells();
  const auto mass = mass_geometry(f, dx);
  const auto r = relaxation_state(f, coeffs.lambda, a);

  Array<Scalar> theta = Array<Scalar>::Zero(n + 1);
  if (treatment == SourceTreatment::upwinded)
    theta = mass.dm_half / (Scalar(2) * a * coeffs.st + mass.dm_half);

  BandedSystem<Scalar> sys{BandedMatrix<Scalar>(2 * n, 2, 2), {}, Vector<Scalar>(2 * n)};
  for (Index j = 0; j < n; ++j) {
    const Index k = j + 1;
    const Scalar nu = a * dt / mass.dm(k);
    const Index fwd = 2 * j;
    const Index bwd = 2 * j + 1;

    sys.matrix.coeffRef(fwd, fwd) = Scalar(1) + nu;
    sys.matrix.coeffRef(fwd, bwd) = -nu * theta(j);
    sys.rhs(fwd) = r.w_fwd(k) + Scalar(2) * a * nu * theta(j) * gas.u_g;
    const Scalar upwind_fwd = -nu * (Scalar(1) - theta(j));
    if (j > 0) {
      sys.matrix.coeffRef(fwd, fwd - 2) = upwind_fwd;
    } else if (boundary == BoundaryPolicy::periodic) {
      sys.corners.push_back({fwd, 2 * (n - 1), upwind_fwd});
    } else {
      sys.rhs(fwd) -= upwind_fwd * r.w_fwd(0);
    }

    sys.matrix.coeffRef(bwd, bwd) = Scalar(1) + nu;
    sys.matrix.coeffRef(bwd, fwd) = -nu * theta(j + 1);
    sys.rhs(bwd) = r.w_bwd(k) - Scalar(2) * a * nu * theta(j + 1) * gas.u_g;
    const Scalar upwind_bwd = -nu * (Scalar(1) - theta(j + 1));
    if (j < n - 1) {
      sys.matrix.coeffRef(bwd, bwd + 2) = upwind_bwd;
    } else if (boundary == BoundaryPolicy::periodic) {
      sys.corners.push_back({bwd, 1, upwind_bwd});
    } else {
      sys.rhs(bwd) -= upwind_bwd * r.w_bwd(n + 1);
    }
  }
  return sys;
}

/// Time-implicit Lagrangian step: solve for the invariants, rebuild the star
/// states from the solved values, then update tau and E explicitly.
template <typename Scalar>
LagrangianResult<Scalar> lagrangian_implicit_step(const FieldSet<Scalar>& f, Scalar dx, const GasClosure<Scalar>& gas,
                                                  const ModelCoefficients<Scalar>& coeffs, Scalar a, Scalar dt,
                                                  BoundaryPolicy boundary = BoundaryPolicy::transmissive,
                                                  SourceTreatment treatment = SourceTreatment::upwinded) {
  const auto system = assemble_implicit_system(f, dx, gas, coeffs, a, dt, boundary, treatment);
  const Vector<Scalar> x = solve_banded(system);

  const Index n = f.n_cells();
  const auto mass = mass_geometry(f, dx);
  const auto r = relaxation_state(f, coeffs.lambda, a);
  Array<Scalar> w_fwd = r.w_fwd;
  Array<Scalar> w_bwd = r.w_bwd;
  for (Index j = 0; j < n; ++j) {
    w_fwd(j + 1) = x(2 * j);
    w_bwd(j + 1) = x(2 * j + 1);
  }
  if (boundary == BoundaryPolicy::periodic) {
    w_fwd(0) = w_fwd(n);
    w_bwd(n + 1) = w_bwd(1);
  }

  LagrangianResult<Scalar> out;
  out.star = detail::interface_states(w_fwd, w_bwd, mass, a, coeffs.st, gas.u_g, treatment);
  out.u = (w_fwd.segment(1, n) - w_bwd.segment(1, n)) / (Scalar(2) * a);
  detail::update_volume_and_energy(out, r, mass, dt);
  return out;
}

/// Conserved fields at t^{n+1=} with ghosts filled.
template <typename Scalar>
FieldSet<Scalar> to_fields(const LagrangianResult<Scalar>& r, BoundaryPolicy boundary) {
  const Index n = r.tau.size();
  FieldSet<Scalar> f(n);
  f.rho.segment(1, n) = r.tau.inverse();
  f.mom.segment(1, n) = f.rho.segment(1, n) * r.u;
  f.etot.segment(1, n) = f.rho.segment(1, n) * r.etot;
  apply_boundary(f, boundary);
  return f;
}

}  // namespace lagproj
