#include "tl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tl {

namespace {

// Skip threshold for a Jacobi pivot, relative machine precision.
constexpr double kJacobiEps2 = 1e-30;
constexpr int kMaxSweeps = 64;

}  // namespace

HermEig hermitian_eig(const Matrix& H, const Tolerances& tol) {
  if (H.rows() != H.cols())
    throw precondition_error("hermitian_eig: matrix must be square");
  const Eigen::Index n = H.rows();
  const double scale = H.norm();
  if ((H - H.adjoint()).norm() > tol.norm_tol * scale)
    throw precondition_error("hermitian_eig: matrix is not Hermitian");

  Matrix A = (H + H.adjoint()) / 2.0;
  Matrix V = Matrix::Identity(n, n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const Complex apq = A(p, q);
        const double b = std::abs(apq);
        if (b * b <= kJacobiEps2 * (app * app + aqq * aqq + b * b)) continue;
        rotated = true;

        const Complex phase = apq / b;
        const double tau = (aqq - app) / (2.0 * b);
        const double hyp = std::sqrt(1.0 + tau * tau);
        const double t = (tau >= 0.0) ? 1.0 / (tau + hyp) : 1.0 / (tau - hyp);
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Plane rotation J: J(p,p)=phase*c, J(p,q)=phase*s, J(q,p)=-s, J(q,q)=c.
        // A <- J^* A J, V <- V J.
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex aip = A(i, p), aiq = A(i, q);
          A(i, p) = aip * (phase * c) - aiq * s;
          A(i, q) = aip * (phase * s) + aiq * c;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          const Complex apj = A(p, j), aqj = A(q, j);
          A(p, j) = std::conj(phase) * c * apj - s * aqj;
          A(q, j) = std::conj(phase) * s * apj + c * aqj;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex vip = V(i, p), viq = V(i, q);
          V(i, p) = vip * (phase * c) - viq * s;
          V(i, q) = vip * (phase * s) + viq * c;
        }
        A(p, q) = Complex(0, 0);
        A(q, p) = Complex(0, 0);
        A(p, p) = Complex(A(p, p).real(), 0);
        A(q, q) = Complex(A(q, q).real(), 0);
      }
    }
    if (!rotated) break;
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b2) {
    return A(a, a).real() < A(b2, b2).real();
  });

  HermEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = A(order[k], order[k]).real();
    out.vectors.col(k) = V.col(order[k]);
  }
  return out;
}

double operator_norm(const Matrix& T) {
  if (T.rows() == 0 || T.cols() == 0) return 0.0;
  // Use the smaller Gram matrix of the two choices.
  Matrix M = (T.rows() < T.cols()) ? Matrix(T * T.adjoint()) : Matrix(T.adjoint() * T);
  M = (M + M.adjoint()) / 2.0;
  const HermEig e = hermitian_eig(M);
  return std::sqrt(std::max(0.0, e.values(e.values.size() - 1)));
}

double min_singular(const Matrix& T) {
  if (T.rows() != T.cols())
    throw precondition_error("min_singular: matrix must be square");
  if (T.rows() == 0) return 0.0;
  Matrix M = T.adjoint() * T;
  M = (M + M.adjoint()) / 2.0;
  const HermEig e = hermitian_eig(M);
  return std::sqrt(std::max(0.0, e.values(0)));
}

SpanBasis span_basis(const std::vector<Matrix>& mats, const Tolerances& tol) {
  SpanBasis out;
  if (mats.empty()) return out;
  out.rows = mats[0].rows();
  out.cols = mats[0].cols();
  for (const Matrix& m : mats)
    if (m.rows() != out.rows || m.cols() != out.cols)
      throw precondition_error("span_basis: all matrices must share one shape");

  // Largest singular value of the stacked coordinate matrix, via its Gram matrix.
  const int n = static_cast<int>(mats.size());
  Matrix gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = frobenius_inner(mats[i], mats[j]);
  gram = (gram + gram.adjoint()) / 2.0;
  const HermEig ge = hermitian_eig(gram);
  const double smax = std::sqrt(std::max(0.0, ge.values(ge.values.size() - 1)));
  const double thresh = tol.rank_tol * smax;

  for (const Matrix& m : mats) {
    Matrix r = m;
    for (int pass = 0; pass < 2; ++pass)
      for (const Matrix& b : out.basis) r -= frobenius_inner(b, r) * b;
    const double nr = r.norm();
    if (nr > thresh) out.basis.push_back(r / nr);
  }
  return out;
}

SpanCoords in_span(const Matrix& T, const SpanBasis& basis, const Tolerances& tol) {
  if (T.rows() != basis.rows || T.cols() != basis.cols)
    throw precondition_error("in_span: shape does not match the basis");
  SpanCoords out;
  out.coefficients.resize(basis.rank());
  Matrix r = T;
  for (int k = 0; k < basis.rank(); ++k) {
    const Complex c = frobenius_inner(basis.basis[k], T);
    out.coefficients(k) = c;
    r -= c * basis.basis[k];
  }
  out.residual = r.norm();
  out.member = out.residual <= tol.rank_tol * T.norm();
  return out;
}

SpanBasis nullspace(const Matrix& L, const Tolerances& tol) {
  SpanBasis out;
  out.rows = L.cols();
  out.cols = 1;
  const Eigen::Index n = L.cols();
  if (n == 0) return out;
  Matrix M = L.adjoint() * L;
  M = (M + M.adjoint()) / 2.0;
  const HermEig e = hermitian_eig(M);
  const double lnorm = std::sqrt(std::max(0.0, e.values(e.values.size() - 1)));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vector v = e.vectors.col(k);
    if ((L * v).norm() <= tol.rank_tol * lnorm * v.norm())
      out.basis.push_back(Matrix(v));
  }
  return out;
}

}  // namespace tl
