#pragma once
// Projection step: first-order upwind advection of rho, rho u, rho E at the
// interface star velocities.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lagproj/mesh.hpp"

namespace lagproj {

template <typename Scalar>
constexpr Scalar positive_part(Scalar v) {
  return (v + (v < 0 ? -v : v)) / Scalar(2);
}

template <typename Scalar>
constexpr Scalar negative_part(Scalar v) {
  return (v - (v < 0 ? -v : v)) / Scalar(2);
}

/// dx / max_j (u*+_{j-1/2} - u*-_{j+1/2}); +inf when nothing moves.
template <typename Scalar>
Scalar transport_cfl_dt(const Array<Scalar>& u_star, Scalar dx) {
  Scalar worst = 0;
  for (Index j = 0; j + 1 < u_star.size(); ++j)
    worst = std::max(worst, positive_part(u_star(j)) - negative_part(u_star(j + 1)));
  return worst > Scalar(0) ? dx / worst : std::numeric_limits<Scalar>::infinity();
}

namespace detail {

template <typename Scalar>
void upwind_advect(Array<Scalar>& out, const Array<Scalar>& x, const Array<Scalar>& u_star, Scalar ratio) {
  const Index n = x.size() - 2;
  for (Index j = 0; j < n; ++j) {
    const Index k = j + 1;
    const Scalar left = positive_part(u_star(j));
    const Scalar right = negative_part(u_star(j + 1));
    out(k) = x(k) + ratio * (left * x(k - 1) + (right - left) * x(k) - right * x(k + 1));
  }
}

}  // namespace detail

/// X_j' = X_j + dt/dx [u*+_{j-1/2} X_{j-1} + (u*-_{j+1/2} - u*+_{j-1/2}) X_j - u*-_{j+1/2} X_{j+1}]
/// for X in {rho, rho u, rho E}. Input ghosts must be filled; output ghosts are copied
/// from the input and must be refilled by the caller.
template <typename Scalar>
FieldSet<Scalar> transport_step(const FieldSet<Scalar>& f, const Array<Scalar>& u_star, Scalar dt, Scalar dx) {
  const Index n = f.n_cells();
  if (u_star.size() != n + 1) throw InvalidParameter("transport needs one star velocity per face");
  const Scalar dt_max = transport_cfl_dt(u_star, dx);
  if (dt > dt_max * (Scalar(1) + Scalar(1e-12))) {
    std::ostringstream os;
    os << "transport CFL violated: dt = " << dt << " > " << dt_max;
    throw StepRejected(os.str(), static_cast<double>(dt_max));
  }
  FieldSet<Scalar> out = f;
  const Scalar ratio = dt / dx;
  detail::upwind_advect(out.rho, f.rho, u_star, ratio);
  detail::upwind_advect(out.mom, f.mom, u_star, ratio);
  detail::upwind_advect(out.etot, f.etot, u_star, ratio);
  return out;
}

/// Density at t^{n+1-} through the flux form
///   rho_j^n - dt/dx ({rho u}_{j+1/2} - {rho u}_{j-1/2}),  {rho u} = rho=_L u*+ + rho=_R u*-.
/// rho_n is interior (n), tau_lagrangian spans all n + 2 cells at t^{n+1=}.
template <typename Scalar>
Array<Scalar> conservative_mass_update(const Array<Scalar>& rho_n, const Array<Scalar>& tau_lagrangian,
                                       const Array<Scalar>& u_star, Scalar dt, Scalar dx) {
  const Index n = rho_n.size();
  const Array<Scalar> rho_eq = tau_lagrangian.inverse();
  Array<Scalar> flux(n + 1);
  for (Index k = 0; k <= n; ++k)
    flux(k) = rho_eq(k) * positive_part(u_star(k)) + rho_eq(k + 1) * negative_part(u_star(k));
  return rho_n - dt / dx * (flux.tail(n) - flux.head(n));
}

}  // namespace lagproj
