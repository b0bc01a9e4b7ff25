#ifndef TL_LINALG_HPP
#define TL_LINALG_HPP

#include <vector>

#include "tl/types.hpp"

namespace tl {

/// Eigendecomposition of a Hermitian matrix: H = vectors * diag(values) * vectors^*.
struct HermEig {
  RealVector values;  ///< ascending
  Matrix vectors;     ///< unitary, column k pairs with values(k)
};

/// Cyclic Jacobi eigensolver for Hermitian complex matrices. The sweep order
/// is fixed, so identical input bits give identical output bits.
/// Throws precondition_error for non-square or non-Hermitian input
/// (Frobenius test against tol.norm_tol * ||H||).
HermEig hermitian_eig(const Matrix& H, const Tolerances& tol = {});

/// Largest singular value, computed from the Hermitian eigenproblem of T^*T.
double operator_norm(const Matrix& T);

/// Smallest singular value of a square matrix; T is invertible iff
/// min_singular(T) > invert_tol * operator_norm(T).
double min_singular(const Matrix& T);

inline Complex frobenius_inner(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

inline Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

/// Orthonormal basis (Frobenius inner product) of the span of a list of
/// equally shaped matrices.
struct SpanBasis {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<Matrix> basis;
  int rank() const { return static_cast<int>(basis.size()); }
};

/// Span with singular values below rank_tol * largest treated as zero.
/// Rank decisions use directly computed orthogonalization residuals, which
/// stay at machine level for dependent inputs.
SpanBasis span_basis(const std::vector<Matrix>& mats, const Tolerances& tol = {});

struct SpanCoords {
  bool member = false;
  Vector coefficients;  ///< against the orthonormal basis, valid when member
  double residual = 0.0;
};

/// Membership test: member iff the projection residual is at most
/// rank_tol * ||T||_F. Throws precondition_error on shape mismatch.
SpanCoords in_span(const Matrix& T, const SpanBasis& basis, const Tolerances& tol = {});

/// Orthonormal basis of {v : ||Lv|| <= rank_tol * ||L|| * ||v||}, returned as
/// column vectors (cols == 1). Candidates come from the eigenvectors of L^*L;
/// acceptance uses the directly computed residual ||Lv||.
SpanBasis nullspace(const Matrix& L, const Tolerances& tol = {});

// Expression-friendly entry points: any Eigen expression is evaluated into a
// dense complex matrix and handed to the concrete kernel.

template <class Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& T) {
  return operator_norm(Matrix(T.template cast<Complex>()));
}

template <class Derived>
double min_singular(const Eigen::MatrixBase<Derived>& T) {
  return min_singular(Matrix(T.template cast<Complex>()));
}

template <class Derived>
HermEig hermitian_eig(const Eigen::MatrixBase<Derived>& H, const Tolerances& tol = {}) {
  return hermitian_eig(Matrix(H.template cast<Complex>()), tol);
}

}  // namespace tl

#endif
