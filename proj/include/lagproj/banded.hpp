#pragma once
// Banded matrices and direct elimination without pivoting. Strict diagonal
// dominance is checked up front; it guarantees every pivot is non-zero and the
// elimination stays stable, so no pivot search is done. Cyclic systems (a few
// entries outside the band, as produced by periodic boundaries) go through a
// low-rank Woodbury correction on top of the banded factorization.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "lagproj/error.hpp"

namespace lagproj {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Square matrix with kl sub- and ku super-diagonals, LAPACK band layout:
/// A(i, j) lives in storage(ku + i - j, j).
template <typename Scalar>
class BandedMatrix {
 public:
  BandedMatrix(Eigen::Index n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), storage_(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(kl + ku + 1, n)) {}

  [[nodiscard]] Eigen::Index rows() const { return n_; }
  [[nodiscard]] int lower() const { return kl_; }
  [[nodiscard]] int upper() const { return ku_; }

  [[nodiscard]] bool in_band(Eigen::Index i, Eigen::Index j) const {
    return i >= 0 && j >= 0 && i < n_ && j < n_ && j - i <= ku_ && i - j <= kl_;
  }

  [[nodiscard]] Scalar operator()(Eigen::Index i, Eigen::Index j) const {
    return in_band(i, j) ? storage_(ku_ + i - j, j) : Scalar(0);
  }

  Scalar& coeffRef(Eigen::Index i, Eigen::Index j) {
    if (!in_band(i, j)) {
      std::ostringstream os;
      os << "entry (" << i << ", " << j << ") is outside the band";
      throw InvalidParameter(os.str());
    }
    return storage_(ku_ + i - j, j);
  }

  [[nodiscard]] Vector<Scalar> operator*(const Vector<Scalar>& x) const {
    Vector<Scalar> y = Vector<Scalar>::Zero(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Eigen::Index j0 = std::max<Eigen::Index>(0, i - kl_);
      const Eigen::Index j1 = std::min<Eigen::Index>(n_ - 1, i + ku_);
      for (Eigen::Index j = j0; j <= j1; ++j) y(i) += storage_(ku_ + i - j, j) * x(j);
    }
    return y;
  }

  [[nodiscard]] Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_, n_);
    for (Eigen::Index i = 0; i < n_; ++i)
      for (Eigen::Index j = std::max<Eigen::Index>(0, i - kl_); j <= std::min<Eigen::Index>(n_ - 1, i + ku_); ++j)
        d(i, j) = (*this)(i, j);
    return d;
  }

 private:
  Eigen::Index n_;
  int kl_;
  int ku_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> storage_;
};

/// Entry outside the band.
template <typename Scalar>
struct CornerEntry {
  Eigen::Index row;
  Eigen::Index col;
  Scalar value;
};

/// A x = rhs with A = band + corners.
template <typename Scalar>
struct BandedSystem {
  BandedMatrix<Scalar> matrix;
  std::vector<CornerEntry<Scalar>> corners;
  Vector<Scalar> rhs;

  [[nodiscard]] Vector<Scalar> apply(const Vector<Scalar>& x) const {
    Vector<Scalar> y = matrix * x;
    for (const auto& c : corners) y(c.row) += c.value * x(c.col);
    return y;
  }
};

/// Smallest row margin |a_ii| - sum_{j != i} |a_ij|; positive iff strictly dominant.
template <typename Scalar>
Scalar dominance_margin(const BandedMatrix<Scalar>& a, const std::vector<CornerEntry<Scalar>>& corners = {}) {
  using std::abs;
  Vector<Scalar> off = Vector<Scalar>::Zero(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = std::max<Eigen::Index>(0, i - a.lower()); j <= std::min<Eigen::Index>(a.rows() - 1, i + a.upper()); ++j)
      if (j != i) off(i) += abs(a(i, j));
  }
  for (const auto& c : corners) off(c.row) += abs(c.value);
  Scalar margin = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i) margin = std::min(margin, abs(a(i, i)) - off(i));
  return margin;
}

template <typename Scalar>
bool is_strictly_diagonally_dominant(const BandedMatrix<Scalar>& a,
                                     const std::vector<CornerEntry<Scalar>>& corners = {}) {
  return dominance_margin(a, corners) > Scalar(0);
}

/// In-place LU of a banded matrix, no pivoting. Fill-in stays inside the band.
template <typename Scalar>
class BandedLU {
 public:
  explicit BandedLU(BandedMatrix<Scalar> a) : lu_(std::move(a)) {
    const Eigen::Index n = lu_.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
      const Scalar pivot = lu_(k, k);
      if (pivot == Scalar(0)) throw SolverAssumption("zero pivot in banded elimination");
      const Eigen::Index i_end = std::min<Eigen::Index>(n - 1, k + lu_.lower());
      const Eigen::Index j_end = std::min<Eigen::Index>(n - 1, k + lu_.upper());
      for (Eigen::Index i = k + 1; i <= i_end; ++i) {
        const Scalar l = lu_(i, k) / pivot;
        lu_.coeffRef(i, k) = l;
        for (Eigen::Index j = k + 1; j <= j_end; ++j) lu_.coeffRef(i, j) -= l * lu_(k, j);
      }
    }
  }

  [[nodiscard]] Vector<Scalar> solve(Vector<Scalar> b) const {
    const Eigen::Index n = lu_.rows();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = std::max<Eigen::Index>(0, i - lu_.lower()); j < i; ++j) b(i) -= lu_(i, j) * b(j);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      for (Eigen::Index j = i + 1; j <= std::min<Eigen::Index>(n - 1, i + lu_.upper()); ++j) b(i) -= lu_(i, j) * b(j);
      b(i) /= lu_(i, i);
    }
    return b;
  }

 private:
  BandedMatrix<Scalar> lu_;
};

namespace detail {

template <typename Scalar>
void require_dominance(const BandedMatrix<Scalar>& a, const std::vector<CornerEntry<Scalar>>& corners) {
  const Scalar margin = dominance_margin(a, corners);
  if (!(margin > Scalar(0))) {
    std::ostringstream os;
    os << "matrix is not strictly diagonally dominant (worst row margin " << margin << ")";
    throw SolverAssumption(os.str());
  }
}

}  // namespace detail

template <typename Scalar>
Vector<Scalar> solve_banded(const BandedMatrix<Scalar>& a, const Vector<Scalar>& rhs) {
  detail::require_dominance(a, {});
  return BandedLU<Scalar>(a).solve(rhs);
}

/// Solves band + corners. With k corner entries A = B + U V^T, U = [e_row],
/// V^T = [value e_col^T]; then x = y - Z (I + V^T Z)^{-1} V^T y with B y = rhs, B Z = U.
template <typename Scalar>
Vector<Scalar> solve_banded(const BandedSystem<Scalar>& system) {
  detail::require_dominance(system.matrix, system.corners);
  const BandedLU<Scalar> lu(system.matrix);
  const Vector<Scalar> y = lu.solve(system.rhs);
  if (system.corners.empty()) return y;

  const auto k = static_cast<Eigen::Index>(system.corners.size());
  const Eigen::Index n = system.matrix.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> z(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    Vector<Scalar> e = Vector<Scalar>::Zero(n);
    e(system.corners[c].row) = Scalar(1);
    z.col(c) = lu.solve(e);
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cap = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(k, k);
  Vector<Scalar> vty(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto& corner = system.corners[r];
    cap.row(r) += corner.value * z.row(corner.col);
    vty(r) = corner.value * y(corner.col);
  }
  return y - z * cap.partialPivLu().solve(vty);
}

template <typename Scalar>
Scalar residual_norm(const BandedSystem<Scalar>& system, const Vector<Scalar>& x) {
  return (system.apply(x) - system.rhs).cwiseAbs().maxCoeff();
}

}  // namespace lagproj
