#include "tl/algebra.hpp"

#include <algorithm>

namespace tl {

namespace {

void require_validated(const DynSystem& sys, const char* where) {
  if (!sys.validated) throw precondition_error(std::string(where) + ": system not validated");
}

void require_element(const DynSystem& sys, int g, const char* where) {
  if (g < 0 || g >= sys.group.order)
    throw precondition_error(std::string(where) + ": no such group element");
}

}  // namespace

AElement a_zero(const DynSystem& sys) {
  AElement a;
  a.value.assign(sys.points, Matrix::Zero(sys.fiber_dim, sys.fiber_dim));
  return a;
}

AElement a_identity(const DynSystem& sys) {
  AElement a;
  a.value.assign(sys.points, Matrix::Identity(sys.fiber_dim, sys.fiber_dim));
  return a;
}

AElement random_a(const DynSystem& sys, Rng& rng) {
  AElement a;
  a.value.reserve(sys.points);
  for (int x = 0; x < sys.points; ++x)
    a.value.push_back(rng.matrix(sys.fiber_dim, sys.fiber_dim));
  return a;
}

double a_norm(const DynSystem& sys, const AElement& a) {
  require_validated(sys, "a_norm");
  double best = 0.0;
  for (const Matrix& m : a.value) best = std::max(best, operator_norm(m));
  return best;
}

AElement a_adjoint(const AElement& a) {
  AElement out;
  out.value.reserve(a.value.size());
  for (const Matrix& m : a.value) out.value.push_back(m.adjoint());
  return out;
}

ZElement z_indicator(const DynSystem& sys, const std::vector<int>& blocks) {
  require_validated(sys, "z_indicator");
  ZElement z;
  z.value.assign(sys.num_blocks(), Complex(0.0, 0.0));
  for (int m : blocks) {
    if (m < 0 || m >= sys.num_blocks())
      throw precondition_error("z_indicator: no such block");
    z.value[m] = 1.0;
  }
  return z;
}

AElement a_from_z(const DynSystem& sys, const ZElement& z) {
  require_validated(sys, "a_from_z");
  AElement a = a_zero(sys);
  for (int x = 0; x < sys.points; ++x)
    a.value[x] = z.value[sys.block_of[x]] * Matrix::Identity(sys.fiber_dim, sys.fiber_dim);
  return a;
}

ZElement alpha_z(const DynSystem& sys, int g, const ZElement& z) {
  require_validated(sys, "alpha_z");
  require_element(sys, g, "alpha_z");
  ZElement out;
  out.value.resize(sys.num_blocks());
  for (int m = 0; m < sys.num_blocks(); ++m) out.value[m] = z.value[sys.beta(g, m)];
  return out;
}

CPElement cp_zero(const DynSystem& sys) {
  CPElement f;
  f.coeff.assign(sys.group.order, a_zero(sys));
  return f;
}

CPElement cp_delta(const DynSystem& sys, int g, const AElement& a) {
  require_element(sys, g, "cp_delta");
  CPElement f = cp_zero(sys);
  f.coeff[g] = a;
  return f;
}

CPElement random_cp(const DynSystem& sys, Rng& rng) {
  CPElement f;
  f.coeff.reserve(sys.group.order);
  for (int g = 0; g < sys.group.order; ++g) f.coeff.push_back(random_a(sys, rng));
  return f;
}

int cp_dim(const DynSystem& sys) {
  return sys.group.order * sys.points * sys.fiber_dim * sys.fiber_dim;
}

Vector cp_to_vec(const DynSystem& sys, const CPElement& f) {
  const int n = sys.fiber_dim;
  Vector v(cp_dim(sys));
  int k = 0;
  for (int g = 0; g < sys.group.order; ++g)
    for (int x = 0; x < sys.points; ++x)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v(k++) = f.coeff[g].value[x](i, j);
  return v;
}

CPElement cp_from_vec(const DynSystem& sys, const Vector& v) {
  if (v.size() != cp_dim(sys))
    throw precondition_error("cp_from_vec: wrong coordinate length");
  const int n = sys.fiber_dim;
  CPElement f = cp_zero(sys);
  int k = 0;
  for (int g = 0; g < sys.group.order; ++g)
    for (int x = 0; x < sys.points; ++x)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.coeff[g].value[x](i, j) = v(k++);
  return f;
}

AElement operator+(const AElement& a, const AElement& b) {
  AElement out = a;
  for (size_t x = 0; x < out.value.size(); ++x) out.value[x] += b.value[x];
  return out;
}

AElement operator-(const AElement& a, const AElement& b) {
  AElement out = a;
  for (size_t x = 0; x < out.value.size(); ++x) out.value[x] -= b.value[x];
  return out;
}

AElement operator*(const Complex& c, const AElement& a) {
  AElement out = a;
  for (auto& m : out.value) m *= c;
  return out;
}

CPElement operator+(const CPElement& f, const CPElement& h) {
  CPElement out = f;
  for (size_t g = 0; g < out.coeff.size(); ++g) out.coeff[g] = out.coeff[g] + h.coeff[g];
  return out;
}

CPElement operator-(const CPElement& f, const CPElement& h) {
  CPElement out = f;
  for (size_t g = 0; g < out.coeff.size(); ++g) out.coeff[g] = out.coeff[g] - h.coeff[g];
  return out;
}

CPElement operator*(const Complex& c, const CPElement& f) {
  CPElement out = f;
  for (auto& a : out.coeff) a = c * a;
  return out;
}

Matrix a_matrix(const DynSystem& sys, const AElement& a) {
  require_validated(sys, "a_matrix");
  const int n = sys.fiber_dim;
  Matrix out = Matrix::Zero(sys.dim_h(), sys.dim_h());
  for (int x = 0; x < sys.points; ++x) out.block(x * n, x * n, n, n) = a.value[x];
  return out;
}

Matrix z_matrix(const DynSystem& sys, const ZElement& z) {
  return a_matrix(sys, a_from_z(sys, z));
}

Matrix unitary(const DynSystem& sys, int g) {
  require_validated(sys, "unitary");
  require_element(sys, g, "unitary");
  const int n = sys.fiber_dim;
  const int ginv = sys.group.inv(g);
  Matrix out = Matrix::Zero(sys.dim_h(), sys.dim_h());
  for (int x = 0; x < sys.points; ++x)
    out.block(x * n, sys.sigma[ginv][x] * n, n, n) = sys.cocycle[g][x];
  return out;
}

AElement alpha(const DynSystem& sys, int g, const AElement& a) {
  require_validated(sys, "alpha");
  require_element(sys, g, "alpha");
  const int ginv = sys.group.inv(g);
  AElement out = a_zero(sys);
  for (int x = 0; x < sys.points; ++x) {
    const Matrix& v = sys.cocycle[g][x];
    out.value[x] = v * a.value[sys.sigma[ginv][x]] * v.adjoint();
  }
  return out;
}

Matrix phi(const DynSystem& sys, const CPElement& f) {
  require_validated(sys, "phi");
  Matrix out = Matrix::Zero(sys.dim_h(), sys.dim_h());
  for (int g = 0; g < sys.group.order; ++g)
    out += a_matrix(sys, f.coeff[g]) * unitary(sys, g);
  return out;
}

CPElement convolve(const DynSystem& sys, const CPElement& f, const CPElement& h) {
  require_validated(sys, "convolve");
  CPElement out = cp_zero(sys);
  for (int s = 0; s < sys.group.order; ++s)
    for (int t = 0; t < sys.group.order; ++t) {
      const AElement rhs = alpha(sys, t, h.coeff[sys.group.mul(sys.group.inv(t), s)]);
      for (int x = 0; x < sys.points; ++x)
        out.coeff[s].value[x] += f.coeff[t].value[x] * rhs.value[x];
    }
  return out;
}

CPElement involute(const DynSystem& sys, const CPElement& f) {
  require_validated(sys, "involute");
  CPElement out = cp_zero(sys);
  for (int s = 0; s < sys.group.order; ++s)
    out.coeff[s] = alpha(sys, s, a_adjoint(f.coeff[sys.group.inv(s)]));
  return out;
}

Matrix regular_rep(const DynSystem& sys, const CPElement& f) {
  require_validated(sys, "regular_rep");
  const int d = sys.dim_h();
  const int n = sys.group.order;
  Matrix out = Matrix::Zero(n * d, n * d);
  for (int g = 0; g < n; ++g)
    for (int gp = 0; gp < n; ++gp) {
      const int s = sys.group.mul(g, sys.group.inv(gp));
      out.block(g * d, gp * d, d, d) =
          a_matrix(sys, alpha(sys, sys.group.inv(g), f.coeff[s]));
    }
  return out;
}

double universal_norm(const DynSystem& sys, const CPElement& f) {
  return operator_norm(regular_rep(sys, f));
}

AElement eval_E(const DynSystem& sys, const CPElement& f, int s) {
  require_element(sys, s, "eval_E");
  return f.coeff[s];
}

AElement eval_Eprime(const DynSystem& sys, const Matrix& b, int s) {
  require_validated(sys, "eval_Eprime");
  require_element(sys, s, "eval_Eprime");
  if (b.rows() != sys.dim_h() || b.cols() != sys.dim_h())
    throw precondition_error("eval_Eprime: operator has the wrong shape");

  const int dim = cp_dim(sys);
  std::vector<Matrix> images;
  images.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    Vector e = Vector::Zero(dim);
    e(k) = 1.0;
    images.push_back(phi(sys, cp_from_vec(sys, e)));
  }

  Matrix gram(dim, dim);
  Vector rhs(dim);
  for (int k = 0; k < dim; ++k) {
    for (int l = 0; l < dim; ++l) gram(k, l) = frobenius_inner(images[k], images[l]);
    rhs(k) = frobenius_inner(images[k], b);
  }

  const auto eig = hermitian_eig(gram, sys.tol);
  const double cutoff = sys.tol.rank_tol * std::max(eig.values.cwiseAbs().maxCoeff(), 1e-300);
  int rank = 0;
  for (int k = 0; k < dim; ++k)
    if (eig.values(k) > cutoff) ++rank;
  if (rank < dim)
    throw unsupported_operation(
        "eval_Eprime: coefficients are not unique for this system (phi has a kernel)");

  Vector y = eig.vectors.adjoint() * rhs;
  for (int k = 0; k < dim; ++k) y(k) /= eig.values(k);
  const Vector coords = eig.vectors * y;

  Matrix rec = Matrix::Zero(b.rows(), b.cols());
  for (int k = 0; k < dim; ++k) rec += coords(k) * images[k];
  if ((rec - b).norm() > sys.tol.rank_tol * std::max(1.0, b.norm()))
    throw membership_error("eval_Eprime: operator is not in the image of phi");

  return cp_from_vec(sys, coords).coeff[s];
}

BStarB b_star_b_decomp(const DynSystem& sys, const CPElement& f) {
  require_validated(sys, "b_star_b_decomp");
  BStarB out{a_zero(sys), convolve(sys, involute(sys, f), f)};
  for (int s = 0; s < sys.group.order; ++s) {
    AElement sq = a_zero(sys);
    for (int x = 0; x < sys.points; ++x)
      sq.value[x] = f.coeff[s].value[x].adjoint() * f.coeff[s].value[x];
    out.a_tilde = out.a_tilde + alpha(sys, sys.group.inv(s), sq);
  }
  out.cross.coeff[sys.group.identity] = a_zero(sys);
  return out;
}

}  // namespace tl
