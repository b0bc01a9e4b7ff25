#ifndef TL_ALGEBRA_HPP
#define TL_ALGEBRA_HPP

#include <vector>

#include "tl/dynamics.hpp"
#include "tl/linalg.hpp"
#include "tl/types.hpp"

namespace tl {

// Block function a: one fiber matrix per point, acting block-diagonally.
struct AElement {
  std::vector<Matrix> value;
};

// Central scalar function: one value per block, constant over the block
// and scalar over the fiber.
struct ZElement {
  std::vector<Complex> value;
};

// Finitely supported map from the group into the block functions; the
// coefficient algebra element f = sum_g delta_g f(g).
struct CPElement {
  std::vector<AElement> coeff;
};

AElement a_zero(const DynSystem& sys);
AElement a_identity(const DynSystem& sys);
AElement random_a(const DynSystem& sys, Rng& rng);
double a_norm(const DynSystem& sys, const AElement& a);
AElement a_adjoint(const AElement& a);

ZElement z_indicator(const DynSystem& sys, const std::vector<int>& blocks);
AElement a_from_z(const DynSystem& sys, const ZElement& z);
// alpha_z(g, z)(m) = z(beta_g(m)); agrees with alpha on the embedded element.
ZElement alpha_z(const DynSystem& sys, int g, const ZElement& z);

CPElement cp_zero(const DynSystem& sys);
CPElement cp_delta(const DynSystem& sys, int g, const AElement& a);
CPElement random_cp(const DynSystem& sys, Rng& rng);

// Coordinate layout: index = ((g * points + x) * N + i) * N + j.
int cp_dim(const DynSystem& sys);
Vector cp_to_vec(const DynSystem& sys, const CPElement& f);
CPElement cp_from_vec(const DynSystem& sys, const Vector& v);

AElement operator+(const AElement& a, const AElement& b);
AElement operator-(const AElement& a, const AElement& b);
AElement operator*(const Complex& c, const AElement& a);
CPElement operator+(const CPElement& f, const CPElement& h);
CPElement operator-(const CPElement& f, const CPElement& h);
CPElement operator*(const Complex& c, const CPElement& f);

// Block-diagonal embedding into operators on the coordinate space.
Matrix a_matrix(const DynSystem& sys, const AElement& a);
Matrix z_matrix(const DynSystem& sys, const ZElement& z);

// (U_g xi)(x) = V_g(x) xi(sigma_{g^-1}(x)).
Matrix unitary(const DynSystem& sys, int g);

// alpha_g(a)(x) = V_g(x) a(sigma_{g^-1}(x)) V_g(x)*.
AElement alpha(const DynSystem& sys, int g, const AElement& a);

// phi(f) = sum_g a_matrix(f(g)) unitary(g).
Matrix phi(const DynSystem& sys, const CPElement& f);

// (f*h)(s) = sum_t f(t) alpha_t(h(t^-1 s)).
CPElement convolve(const DynSystem& sys, const CPElement& f, const CPElement& h);

// f*(s) = alpha_s(f(s^-1)*), the convention with (a U_g)* = alpha_{g^-1}(a*) U_{g^-1}.
CPElement involute(const DynSystem& sys, const CPElement& f);

// Block (g,g') = alpha_{g^-1}(f(g g'^-1)) acting on the coordinate space.
Matrix regular_rep(const DynSystem& sys, const CPElement& f);

// Operator norm of the regular representation; equals the universal norm
// because the group is finite and the defining representation is faithful.
double universal_norm(const DynSystem& sys, const CPElement& f);

AElement eval_E(const DynSystem& sys, const CPElement& f, int s);

// Recovers the s-coefficient of b = sum_g a_g U_g by a least-squares solve
// over the image of phi. Throws unsupported_operation when phi is not
// injective (coefficients are not unique) and membership_error when b is
// not in the image.
AElement eval_Eprime(const DynSystem& sys, const Matrix& b, int s);

struct BStarB {
  AElement a_tilde;  // sum_s alpha_{s^-1}(f(s)* f(s)), positive per point
  CPElement cross;   // the off-identity part of f* * f
};
BStarB b_star_b_decomp(const DynSystem& sys, const CPElement& f);

}  // namespace tl

#endif  // TL_ALGEBRA_HPP
