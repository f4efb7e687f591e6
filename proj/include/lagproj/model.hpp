#pragma once
// Moment system for the dispersed phase: state variables, pressure law,
// sound speed and the subgrid coefficients of a homogeneous gas field.

#include <cmath>
#include <sstream>

#include "lagproj/error.hpp"

namespace lagproj {

template <typename Scalar>
struct PrimitiveState {
  Scalar rho{1};
  Scalar u{0};
  Scalar eps{0};  ///< internal energy; may dip below zero as long as 6 eps + 3 lambda >= 0
};

template <typename Scalar>
struct ConservedState {
  Scalar rho{1};
  Scalar mom{0};   ///< rho u
  Scalar etot{0};  ///< rho E, E = u^2/2 + eps
};

/// Filtered gas velocity and subgrid stress, constant over the whole run.
template <typename Scalar>
struct GasClosure {
  Scalar u_g{0};
  Scalar tau_g{0};
};

/// Long-time particle response to the gas: f_r, g_r, l_r.
template <typename Scalar>
struct ResponseCoefficients {
  Scalar f_r;
  Scalar g_r;
  Scalar l_r;
};

template <typename Scalar>
struct SubgridCoefficients {
  Scalar lambda;  ///< pressure augmentation
  Scalar mu;      ///< internal-energy relaxation target (2 eps -> St mu)
};

template <typename Scalar>
struct ModelCoefficients {
  Scalar st;
  Scalar f_r;
  Scalar g_r;
  Scalar l_r;
  Scalar lambda;
  Scalar mu;
};

namespace detail {

template <typename Scalar>
void require_stokes(Scalar st) {
  using std::isfinite;
  if (!(isfinite(st) && st > Scalar(0))) {
    std::ostringstream os;
    os << "Stokes number must be finite and positive, got " << st;
    throw InvalidParameter(os.str());
  }
}

}  // namespace detail

template <typename Scalar>
ResponseCoefficients<Scalar> response_coefficients(Scalar st) {
  detail::require_stokes(st);
  const Scalar one_plus = Scalar(1) + st;
  return {Scalar(1) / one_plus, Scalar(1) / (st * one_plus), Scalar(1) / (st * one_plus * one_plus)};
}

/// lambda = mu = tau_g / (St (1 + St)); velocity-gradient corrections to mu vanish
/// because the gas field is uniform.
template <typename Scalar>
SubgridCoefficients<Scalar> subgrid_coefficients(Scalar st, const GasClosure<Scalar>& gas) {
  detail::require_stokes(st);
  using std::isfinite;
  if (!(isfinite(gas.tau_g) && gas.tau_g >= Scalar(0))) {
    throw InvalidParameter("subgrid stress tau_g must be finite and non-negative");
  }
  const Scalar value = gas.tau_g / (st * (Scalar(1) + st));
  return {value, value};
}

template <typename Scalar>
ModelCoefficients<Scalar> make_coefficients(Scalar st, const GasClosure<Scalar>& gas) {
  const auto r = response_coefficients(st);
  const auto s = subgrid_coefficients(st, gas);
  return {st, r.f_r, r.g_r, r.l_r, s.lambda, s.mu};
}

template <typename Scalar>
constexpr Scalar pressure(Scalar rho, Scalar eps, Scalar lambda) {
  return rho * (Scalar(2) * eps + lambda);
}

template <typename Scalar>
Scalar sound_speed(Scalar eps, Scalar lambda) {
  using std::isfinite;
  using std::sqrt;
  const Scalar c2 = Scalar(6) * eps + Scalar(3) * lambda;
  if (!isfinite(c2) || c2 < Scalar(0)) {
    std::ostringstream os;
    os << "inadmissible state: 6 eps + 3 lambda = " << c2 << " (eps = " << eps << ", lambda = " << lambda
       << ")";
    throw AdmissibilityError(os.str());
  }
  return sqrt(c2);
}

template <typename Scalar>
constexpr ConservedState<Scalar> prim_to_cons(const PrimitiveState<Scalar>& p) {
  return {p.rho, p.rho * p.u, p.rho * (p.u * p.u / Scalar(2) + p.eps)};
}

template <typename Scalar>
PrimitiveState<Scalar> cons_to_prim(const ConservedState<Scalar>& c) {
  if (!(c.rho > Scalar(0))) {
    std::ostringstream os;
    os << "non-positive density " << c.rho;
    throw PositivityError(os.str());
  }
  const Scalar u = c.mom / c.rho;
  return {c.rho, u, c.etot / c.rho - u * u / Scalar(2)};
}

/// Zero of the relaxation source -(2 eps - St mu)/St.
template <typename Scalar>
constexpr Scalar equilibrium_internal_energy(Scalar st, Scalar mu) {
  return st * mu / Scalar(2);
}

}  // namespace lagproj
