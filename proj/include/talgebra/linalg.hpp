#ifndef TALGEBRA_LINALG_HPP
#define TALGEBRA_LINALG_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include "talgebra/error.hpp"

namespace talgebra {

template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Relative tolerance for Hermitian-symmetry and PSD checks on a slice,
/// measured against the slice's Frobenius norm.
template <class Real>
constexpr Real decomposition_tolerance() {
  if constexpr (std::is_same_v<Real, float>) {
    return Real(1e-4);
  } else {
    return Real(1e-8);
  }
}

template <class Real>
struct RealOf {
  using type = Real;
};
template <class Real>
struct RealOf<std::complex<Real>> {
  using type = Real;
};

/// Eigenpairs of a Hermitian PSD matrix, eigenvalues descending.
template <class Scalar>
struct SortedEigen {
  using Real = typename RealOf<Scalar>::type;
  RVector<Real> values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
};

namespace detail {

/// Hermitian eigendecomposition with a descending, stable ordering.
///
/// Ties keep the solver's ascending-order position. Negative eigenvalues no
/// further below zero than tolerance * ||G||_F are clamped to 0; anything
/// lower, or a non-Hermitian input, raises NumericDomainError.
template <class Scalar>
SortedEigen<Scalar> sorted_hermitian_eigen(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g) {
  using Real = typename RealOf<Scalar>::type;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (g.rows() != g.cols()) throw std::invalid_argument("eigendecomposition needs a square matrix");
  const Real tol = decomposition_tolerance<Real>();
  const Real norm = g.norm();
  const Real asym = (g - g.adjoint()).norm();
  if (asym > tol * norm) {
    throw NumericDomainError("slice is not Hermitian: ||G - G^H||_F / ||G||_F = " +
                             std::to_string(norm > 0 ? asym / norm : asym));
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(g, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericDomainError("Hermitian eigensolver did not converge");
  }
  const auto n = g.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });

  SortedEigen<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    Real v = ev(src);
    if (v < 0) {
      if (v < -tol * norm) {
        throw NumericDomainError("slice is not positive semidefinite: eigenvalue " +
                                 std::to_string(v));
      }
      v = 0;
    }
    out.values(j) = v;
    out.vectors.col(j) = solver.eigenvectors().col(src);
  }
  return out;
}

}  // namespace detail
}  // namespace talgebra

#endif  // TALGEBRA_LINALG_HPP
