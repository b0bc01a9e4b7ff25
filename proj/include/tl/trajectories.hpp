#ifndef TL_TRAJECTORIES_HPP
#define TL_TRAJECTORIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "tl/algebra.hpp"
#include "tl/dynamics.hpp"

namespace tl {

// One representation per orbit of the block action, built over the
// smallest block of the orbit.
struct OrbitRep {
  int orbit_index = 0;
  std::vector<int> orbit;        // ascending block indices
  int base_block = 0;            // smallest block in the orbit
  std::vector<int> base_points;  // points of the base block, ascending
  int d = 0;                     // |base block| * fiber_dim
};

std::vector<OrbitRep> orbit_reps(const DynSystem& sys);

// Restriction of a block function to the base block, as a d x d matrix.
Matrix pi_prime(const DynSystem& sys, const OrbitRep& rep, const AElement& a);

// Block (t,t') = pi_prime(alpha_{t^-1}(f(t t'^-1))), size |G| d.
Matrix pi_omega(const DynSystem& sys, const OrbitRep& rep, const CPElement& f);

struct NormPair {
  double lhs = 0.0;  // norm of pi_omega(delta_e a)
  double rhs = 0.0;  // max over g of norm of pi_prime(alpha_{g^-1}(a))
};
NormPair pi_norm_identity(const DynSystem& sys, const OrbitRep& rep, const AElement& a);

struct IsoReport {
  int expected_dim = 0;
  int achieved_rank = 0;
  bool iso = false;
  std::vector<CPElement> kernel;      // basis of the kernel when not iso
  std::optional<CPElement> witness;   // normalized norm-violating element
};

// Rank of the coefficient-to-operator map f -> phi(f) against its domain
// dimension, with kernel basis and a witness when deficient.
IsoReport phi_iso_check(const DynSystem& sys);

// Turns a kernel element of phi into a witness w with ||w(e)|| = 1 and
// phi(w) still numerically zero: shift the largest coefficient to the
// identity and normalize.
CPElement b0_witness(const DynSystem& sys, const CPElement& kernel_f);

struct CentralSearch {
  bool holds = false;
  std::optional<ZElement> z;  // the successful candidate
  int candidates = 0;         // indicator candidates tried
  std::string note;
};

// Searches z over indicator functions of nonempty subsets of V for
// ||z phi(f* f)|| >= ||z a_tilde|| - norm_tol. A failed search refutes
// only the indicator family, which the note records.
CentralSearch check_B1(const DynSystem& sys, const CPElement& f, const std::vector<int>& v);

// Same search for ||z phi(f)|| >= ||z f(e)|| - norm_tol, for f supported
// on a set D of elements that each fix every block of V.
CentralSearch check_B2(const DynSystem& sys, const std::vector<int>& d,
                       const std::vector<int>& v, const CPElement& f);

struct B2PrevResult {
  double lhs = 0.0;  // ||z_delta phi(f* f)||
  double rhs = 0.0;  // ||z_delta (a_tilde + surviving cross terms)||
  FixedPointPartition partition;
};

// Shrinks V against the difference set of supp(f) and compares the two
// sides of the localized inequality; lhs >= rhs - norm_tol always.
B2PrevResult check_B2prev(const DynSystem& sys, const CPElement& f, const std::vector<int>& v);

struct OrbitInvertibility {
  int orbit_index = 0;
  double min_sing = 0.0;
  double norm = 0.0;
  bool invertible = false;
  double inverse_norm = 0.0;  // 1 / min_sing when invertible
};

struct InvertVerdict {
  std::vector<OrbitInvertibility> per_orbit;
  bool invertible = false;        // every orbit invertible
  double max_inverse_norm = 0.0;  // over invertible orbits
  double phi_min_sing = 0.0;
  double phi_norm = 0.0;
  bool phi_invertible = false;
  bool phi_iso = false;   // the cross-check is conclusive only when true
  bool agreement = false;
};

// Orbit-wise invertibility of pi_omega(f) with the direct check on phi(f)
// alongside. Invertible means min_sing > invert_tol * norm.
InvertVerdict invertibility_by_trajectories(const DynSystem& sys, const CPElement& f);

// For commutative fibers: freeze every coefficient at the block m. The
// rows of phi at m are unchanged: z_m phi(f) = z_m phi(result) exactly.
CPElement localize_scalar(const DynSystem& sys, const CPElement& f, int m);

struct RhoPeak {
  int orbit_index = 0;
  int g = 0;
};

// For a real central 0 <= rho <= 1 with peak value 1, finds an orbit and a
// translating element so that alpha_{g^-1}(rho) is 1 across the base block.
RhoPeak rho_peak_finder(const DynSystem& sys, const ZElement& rho);

// The (g,g) diagonal block of an operator in the pi_omega picture.
Matrix jg_compress(const DynSystem& sys, const OrbitRep& rep, int g, const Matrix& t);

// Rank check for the direct sum of the orbit representations on the
// coefficient algebra; predicted to be injective for every valid system.
IsoReport check_pi_side_iso(const DynSystem& sys);

struct MultProbeResult {
  bool found = false;
  AElement a;                     // indicator-style left factor
  std::vector<Complex> b_coeff;   // coefficients of b = sum c_g U_g
  Matrix b;                       // the right factor as an operator
  std::string note;
};

// Searches for nonzero a in A and nonzero b in the span of the U_g with
// a b = 0. Structured sweep over indicator supports plus seeded random
// trials; finding nothing is not a proof of absence.
MultProbeResult nontrivial_mult_probe(const DynSystem& sys, int trials, std::uint64_t seed);

}  // namespace tl

#endif  // TL_TRAJECTORIES_HPP
