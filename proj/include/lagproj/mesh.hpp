#pragma once
// Uniform 1D grid, fields with one ghost cell per side, boundary fill and the
// Gaussian-bump initial condition.

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lagproj/error.hpp"
#include "lagproj/model.hpp"

namespace lagproj {

template <typename Scalar>
using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

template <typename Scalar>
struct Grid1D {
  Scalar x_min;
  Scalar x_max;
  Index n_cells;
  Scalar dx;
  Array<Scalar> centers;
};

enum class BoundaryPolicy { transmissive, periodic };

/// How the initial profile is transferred to the cells.
enum class InitialSampling { cell_average, cell_center };

/// Conserved fields over n interior cells plus one ghost per side.
/// Storage index k = j + 1 for cell j in [-1, n].
template <typename Scalar>
struct FieldSet {
  Array<Scalar> rho;
  Array<Scalar> mom;
  Array<Scalar> etot;

  FieldSet() = default;
  explicit FieldSet(Index n_cells)
      : rho(Array<Scalar>::Ones(n_cells + 2)),
        mom(Array<Scalar>::Zero(n_cells + 2)),
        etot(Array<Scalar>::Zero(n_cells + 2)) {}

  [[nodiscard]] Index n_cells() const { return rho.size() - 2; }

  [[nodiscard]] ConservedState<Scalar> at(Index j) const { return {rho(j + 1), mom(j + 1), etot(j + 1)}; }

  void set(Index j, const ConservedState<Scalar>& s) {
    rho(j + 1) = s.rho;
    mom(j + 1) = s.mom;
    etot(j + 1) = s.etot;
  }

  auto interior_rho() const { return rho.segment(1, n_cells()); }
  auto interior_mom() const { return mom.segment(1, n_cells()); }
  auto interior_etot() const { return etot.segment(1, n_cells()); }

  /// Per-cell primitive arrays over the interior.
  [[nodiscard]] Array<Scalar> velocity() const { return interior_mom() / interior_rho(); }
  [[nodiscard]] Array<Scalar> internal_energy() const {
    const Array<Scalar> u = velocity();
    return interior_etot() / interior_rho() - u.square() / Scalar(2);
  }

  friend bool operator==(const FieldSet& a, const FieldSet& b) {
    return (a.rho == b.rho).all() && (a.mom == b.mom).all() && (a.etot == b.etot).all();
  }
};

template <typename Scalar>
Grid1D<Scalar> build_grid(Scalar x_min, Scalar x_max, Index n_cells) {
  using std::isfinite;
  if (!(isfinite(x_min) && isfinite(x_max) && x_max > x_min)) {
    throw InvalidParameter("grid bounds must be finite with x_max > x_min");
  }
  if (n_cells < 3) {
    std::ostringstream os;
    os << "grid needs at least 3 cells, got " << n_cells;
    throw InvalidParameter(os.str());
  }
  const Scalar dx = (x_max - x_min) / Scalar(n_cells);
  Array<Scalar> centers(n_cells);
  for (Index j = 0; j < n_cells; ++j) centers(j) = x_min + (Scalar(j) + Scalar(0.5)) * dx;
  return {x_min, x_max, n_cells, dx, std::move(centers)};
}

/// 1 + exp(-x^2 / (2 sigma0^2)).
template <typename Scalar>
Scalar gaussian_bump(Scalar x, Scalar sigma0) {
  using std::exp;
  return Scalar(1) + exp(-x * x / (Scalar(2) * sigma0 * sigma0));
}

/// Integral of exp(-(x - x0)^2 / (2 s^2)) over [a, b], written with erfc on the
/// side away from the peak so far-field cells do not lose precision.
template <typename Scalar>
Scalar gaussian_integral(Scalar a, Scalar b, Scalar x0, Scalar s) {
  using std::erf;
  using std::erfc;
  using std::sqrt;
  const Scalar scale = s * sqrt(Scalar(2));
  const Scalar za = (a - x0) / scale;
  const Scalar zb = (b - x0) / scale;
  Scalar diff;
  if (za >= Scalar(0)) {
    diff = erfc(za) - erfc(zb);
  } else if (zb <= Scalar(0)) {
    diff = erfc(-zb) - erfc(-za);
  } else {
    diff = erf(zb) - erf(za);
  }
  return s * sqrt(std::numbers::pi_v<Scalar> / Scalar(2)) * diff;
}

template <typename Scalar>
FieldSet<Scalar> uniform_fields(Index n_cells, const PrimitiveState<Scalar>& state) {
  FieldSet<Scalar> f(n_cells);
  const auto c = prim_to_cons(state);
  f.rho.setConstant(c.rho);
  f.mom.setConstant(c.mom);
  f.etot.setConstant(c.etot);
  return f;
}

/// Particles at rest with a Gaussian density bump centered at x = 0.
/// Ghost cells are left for apply_boundary.
template <typename Scalar>
FieldSet<Scalar> gaussian_initial_condition(const Grid1D<Scalar>& grid, Scalar sigma0,
                                            InitialSampling sampling = InitialSampling::cell_average) {
  using std::isfinite;
  if (!(isfinite(sigma0) && sigma0 > Scalar(0))) throw InvalidParameter("sigma0 must be positive");
  FieldSet<Scalar> f(grid.n_cells);
  for (Index j = 0; j < grid.n_cells; ++j) {
    const Scalar x = grid.centers(j);
    Scalar rho;
    if (sampling == InitialSampling::cell_center) {
      rho = gaussian_bump(x, sigma0);
    } else {
      const Scalar half = grid.dx / Scalar(2);
      rho = Scalar(1) + gaussian_integral(x - half, x + half, Scalar(0), sigma0) / grid.dx;
    }
    f.set(j, {rho, Scalar(0), Scalar(0)});
  }
  f.set(-1, f.at(0));
  f.set(grid.n_cells, f.at(grid.n_cells - 1));
  return f;
}

template <typename Scalar>
void apply_boundary(FieldSet<Scalar>& f, BoundaryPolicy policy) {
  const Index n = f.n_cells();
  if (policy == BoundaryPolicy::transmissive) {
    f.set(-1, f.at(0));
    f.set(n, f.at(n - 1));
  } else {
    f.set(-1, f.at(n - 1));
    f.set(n, f.at(0));
  }
}

/// Same ghost rule for a bare array of length n + 2.
template <typename Scalar>
void apply_boundary(Array<Scalar>& a, BoundaryPolicy policy) {
  const Index n = a.size() - 2;
  if (policy == BoundaryPolicy::transmissive) {
    a(0) = a(1);
    a(n + 1) = a(n);
  } else {
    a(0) = a(n);
    a(n + 1) = a(1);
  }
}

}  // namespace lagproj
