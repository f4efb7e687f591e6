#pragma once
// Pointwise source steps: internal-energy relaxation (third splitting step) and
// the cell-centered implicit drag of the non-asymptotic-preserving baseline.

#include "lagproj/mesh.hpp"
#include "lagproj/model.hpp"

namespace lagproj {

/// Backward Euler on d eps/dt = -(2 eps - St mu)/St.
template <typename Scalar>
constexpr Scalar energy_relaxation(Scalar eps, Scalar st, Scalar mu, Scalar dt) {
  return st * (mu * dt + eps) / (st + Scalar(2) * dt);
}

template <typename Scalar>
struct DragResult {
  Scalar u;
  Scalar eps;
};

/// Backward Euler on du/dt = -(u - u_g)/St. Only the mean motion is affected.
template <typename Scalar>
constexpr DragResult<Scalar> pointwise_drag(Scalar u, Scalar eps, Scalar u_g, Scalar st, Scalar dt) {
  return {(st * u + dt * u_g) / (st + dt), eps};
}

/// Applies energy_relaxation to every interior cell; rho and u are untouched.
template <typename Scalar>
void relax_internal_energy(FieldSet<Scalar>& f, const ModelCoefficients<Scalar>& coeffs, Scalar dt) {
  for (Index j = 0; j < f.n_cells(); ++j) {
    auto p = cons_to_prim(f.at(j));
    p.eps = energy_relaxation(p.eps, coeffs.st, coeffs.mu, dt);
    f.set(j, prim_to_cons(p));
  }
}

template <typename Scalar>
void apply_pointwise_drag(FieldSet<Scalar>& f, const GasClosure<Scalar>& gas, Scalar st, Scalar dt) {
  for (Index j = 0; j < f.n_cells(); ++j) {
    auto p = cons_to_prim(f.at(j));
    const auto d = pointwise_drag(p.u, p.eps, gas.u_g, st, dt);
    p.u = d.u;
    p.eps = d.eps;
    f.set(j, prim_to_cons(p));
  }
}

}  // namespace lagproj
