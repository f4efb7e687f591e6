#pragma once
// Small-Stokes limit of the moment system: rho obeys
//   d_t rho + d_x (rho u_g) = d_x (tau_g d_x rho),
// while u and eps are slaved to rho:
//   u = u_g - (tau_g / rho) d_x rho,   2 eps = tau_g (d_x((tau_g / rho) d_x rho) + 1).

#include <cmath>
#include <limits>
#include <sstream>

#include "lagproj/mesh.hpp"

namespace lagproj {

/// Width of the spreading bump, sigma(t)^2 = sigma0^2 + 2 tau_g t.
template <typename Scalar>
Scalar heat_kernel_width(Scalar t, Scalar sigma0, Scalar tau_g) {
  using std::sqrt;
  return sqrt(sigma0 * sigma0 + Scalar(2) * tau_g * t);
}

/// Closed-form solution on the unbounded line for the Gaussian-bump initial data.
template <typename Scalar>
Scalar heat_kernel_density(Scalar x, Scalar t, Scalar sigma0, Scalar tau_g, Scalar u_g) {
  using std::exp;
  const Scalar s = heat_kernel_width(t, sigma0, tau_g);
  const Scalar xi = x - u_g * t;
  return Scalar(1) + sigma0 / s * exp(-xi * xi / (Scalar(2) * s * s));
}

template <typename Scalar>
Scalar heat_kernel_cell_average(Scalar a, Scalar b, Scalar t, Scalar sigma0, Scalar tau_g, Scalar u_g) {
  const Scalar s = heat_kernel_width(t, sigma0, tau_g);
  return Scalar(1) + sigma0 / s * gaussian_integral(a, b, u_g * t, s) / (b - a);
}

/// Exact cell averages of the heat-kernel density on a grid.
template <typename Scalar>
Array<Scalar> heat_kernel_profile(const Grid1D<Scalar>& grid, Scalar t, Scalar sigma0, Scalar tau_g, Scalar u_g) {
  Array<Scalar> rho(grid.n_cells);
  const Scalar half = grid.dx / Scalar(2);
  for (Index j = 0; j < grid.n_cells; ++j)
    rho(j) = heat_kernel_cell_average(grid.centers(j) - half, grid.centers(j) + half, t, sigma0, tau_g, u_g);
  return rho;
}

/// Limit velocity u_g - (tau_g / rho) d_x rho of the heat kernel, in closed form.
template <typename Scalar>
Scalar heat_kernel_velocity(Scalar x, Scalar t, Scalar sigma0, Scalar tau_g, Scalar u_g) {
  using std::exp;
  const Scalar s = heat_kernel_width(t, sigma0, tau_g);
  const Scalar xi = x - u_g * t;
  const Scalar bump = sigma0 / s * exp(-xi * xi / (Scalar(2) * s * s));
  return u_g + tau_g * xi / (s * s) * bump / (Scalar(1) + bump);
}

/// Limit internal energy of the heat kernel, in closed form.
template <typename Scalar>
Scalar heat_kernel_internal_energy(Scalar x, Scalar t, Scalar sigma0, Scalar tau_g, Scalar u_g) {
  using std::exp;
  const Scalar s = heat_kernel_width(t, sigma0, tau_g);
  const Scalar xi = x - u_g * t;
  const Scalar bump = sigma0 / s * exp(-xi * xi / (Scalar(2) * s * s));
  const Scalar rho = Scalar(1) + bump;
  const Scalar d1 = -xi / (s * s) * bump;
  const Scalar d2 = (xi * xi / (s * s * s * s) - Scalar(1) / (s * s)) * bump;
  const Scalar dq = tau_g * (d2 * rho - d1 * d1) / (rho * rho);
  return tau_g / Scalar(2) * (Scalar(1) + dq);
}

/// Largest stable dt for the explicit advection-diffusion update.
template <typename Scalar>
Scalar advection_diffusion_dt(Scalar u_g, Scalar tau_g, Scalar dx) {
  using std::abs;
  const Scalar rate = Scalar(2) * tau_g / (dx * dx) + abs(u_g) / dx;
  return rate > Scalar(0) ? Scalar(1) / rate : std::numeric_limits<Scalar>::infinity();
}

/// One explicit finite-volume step: upwind advective flux plus centered diffusive flux.
/// rho spans n + 2 cells with ghosts filled; returns the n interior values.
template <typename Scalar>
Array<Scalar> advection_diffusion_step(const Array<Scalar>& rho, Scalar u_g, Scalar tau_g, Scalar dt, Scalar dx) {
  const Scalar dt_max = advection_diffusion_dt(u_g, tau_g, dx);
  if (dt > dt_max * (Scalar(1) + Scalar(1e-12))) {
    std::ostringstream os;
    os << "advection-diffusion stability violated: dt = " << dt << " > " << dt_max;
    throw StepRejected(os.str(), static_cast<double>(dt_max));
  }
  const Index n = rho.size() - 2;
  const Scalar up = u_g > Scalar(0) ? u_g : Scalar(0);
  const Scalar down = u_g < Scalar(0) ? u_g : Scalar(0);
  const Array<Scalar> left = rho.head(n + 1);
  const Array<Scalar> right = rho.tail(n + 1);
  const Array<Scalar> flux = up * left + down * right - tau_g * (right - left) / dx;
  return rho.segment(1, n) - dt / dx * (flux.tail(n) - flux.head(n));
}

/// Centered difference inside, one-sided first order at the two end cells.
template <typename Scalar>
Array<Scalar> centered_derivative(const Array<Scalar>& f, Scalar dx) {
  const Index n = f.size();
  Array<Scalar> d(n);
  d(0) = (f(1) - f(0)) / dx;
  d(n - 1) = (f(n - 1) - f(n - 2)) / dx;
  d.segment(1, n - 2) = (f.tail(n - 2) - f.head(n - 2)) / (Scalar(2) * dx);
  return d;
}

template <typename Scalar>
Array<Scalar> asymptotic_velocity(const Array<Scalar>& rho, Scalar tau_g, Scalar u_g, Scalar dx) {
  if (!(rho > Scalar(0)).all()) throw PositivityError("asymptotic reconstruction needs positive density");
  return u_g - tau_g / rho * centered_derivative(rho, dx);
}

template <typename Scalar>
Array<Scalar> asymptotic_internal_energy(const Array<Scalar>& rho, Scalar tau_g, Scalar dx) {
  if (!(rho > Scalar(0)).all()) throw PositivityError("asymptotic reconstruction needs positive density");
  const Array<Scalar> q = tau_g / rho * centered_derivative(rho, dx);
  return tau_g / Scalar(2) * (Scalar(1) + centered_derivative(q, dx));
}

}  // namespace lagproj
