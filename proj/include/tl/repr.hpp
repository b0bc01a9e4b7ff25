#ifndef TL_REPR_HPP
#define TL_REPR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tl/algebra.hpp"
#include "tl/dynamics.hpp"
#include "tl/linalg.hpp"
#include "tl/trajectories.hpp"
#include "tl/types.hpp"

namespace tl {

// Matrix span containing the identity and closed under product and adjoint.
// The basis is orthonormal for the Frobenius inner product; star_closure is
// the only constructor that guarantees the closure properties.
struct StarSpan {
  Eigen::Index side = 0;
  std::vector<Matrix> basis;
  int rank() const { return static_cast<int>(basis.size()); }
};

// Smallest identity-containing *-closed span of the generators, grown by
// product and adjoint augmentation to a fixpoint. Every pair product and
// every adjoint of the returned basis has been membership-tested, so the
// closure is verified rather than assumed.
StarSpan star_closure(const std::vector<Matrix>& generators, const Tolerances& tol = {});

// The span basis in the shape the membership test expects.
SpanBasis as_span_basis(const StarSpan& span);

// Block structure of a *-closed span: minimal central projections e_i and
// the matrix dimension d_i of each block, with sum d_i^2 == span_rank.
// Blocks are ordered by descending dimension, ties keeping the spectral
// order of the separating central element.
struct WedderburnData {
  Eigen::Index side = 0;
  std::vector<Matrix> projections;
  std::vector<int> block_dims;
  int span_rank = 0;
};

// Splits the span along its center. The center is solved from linear
// commutation equations; the projections are eigenvalue-cluster projections
// of a generic Hermitian central element drawn from the given seed. When a
// draw fails to separate the center (eigenvalue collision), a fresh element
// is drawn, up to five attempts, then validation_error.
// Throws precondition_error when the span misses identity, adjoint, or
// product closure.
WedderburnData wedderburn(const StarSpan& span, const Tolerances& tol = {},
                          std::uint64_t seed = 12345);

// Norms of the block compressions e_i b. For b in the span the maximum over
// blocks equals the operator norm of b.
RealVector block_norms(const WedderburnData& data, const Matrix& b);

// Basis of {f : pi_omega(f) = 0} in coordinate space. Its identity
// coefficient part is exactly the ideal of block functions vanishing on
// every block of the orbit.
std::vector<CPElement> kernel_of_pi_omega(const DynSystem& sys, const OrbitRep& rep);

// Representation of the coefficient algebra given by its values on the
// coordinate basis, in the layout of cp_to_vec.
struct LinearRep {
  std::string name;
  Eigen::Index side = 0;
  std::vector<Matrix> images;
};

Matrix rep_apply(const DynSystem& sys, const LinearRep& rep, const CPElement& f);

// pi_omega packaged as a linear map on coordinates.
LinearRep rep_from_orbit(const DynSystem& sys, const OrbitRep& rep);

// A representation together with the *-closed span of its image; family
// verdicts are computed against such a target.
struct Target {
  LinearRep rep;
  StarSpan span;
};

// Faithful matrix model of the full coefficient algebra through the regular
// representation.
Target crossed_product_target(const DynSystem& sys);

// Matrix model generated by the defining representation. It presents the
// operator algebra on the original space, which is a proper quotient when
// the defining representation has a kernel.
Target image_algebra_target(const DynSystem& sys);

struct FamilyOptions {
  int norming_samples = 100;   // random elements for the norming check
  int transfer_samples = 500;  // random elements for invertibility transfer
  std::uint64_t seed = 12345;
};

struct FamilyVerdict {
  bool faithful = false;
  bool strictly_norming = false;
  bool exhaustive = false;
  bool sufficient = false;
  std::optional<CPElement> faithful_witness;  // killed by the family, nonzero in the target
  std::optional<CPElement> norming_witness;   // family norm falls short of the target norm
  double norming_gap = 0.0;                   // target norm minus family norm at the witness
  std::optional<int> uncovered_block;         // block index no member kernel avoids
  std::optional<CPElement> transfer_witness;  // invertibility disagreement
  std::string note;
};

// Verdicts for a family of representations against a target model:
//   faithful          the common kernel is no larger than the target kernel
//   strictly_norming  max member norm equals the target norm on every
//                     coordinate element and on seeded random elements
//   exhaustive        every minimal central projection e of the target has a
//                     member whose kernel lands in (1-e) * target
//   sufficient        exhaustive, cross-checked by sampled invertibility
//                     transfer (the sampled part alone is heuristic)
// Preconditions: every member (and the target) maps the identity coordinate
// to the identity and respects product and adjoint on sampled pairs, and
// every member vanishes on the target kernel; violations throw
// precondition_error naming the member.
FamilyVerdict family_verdicts(const DynSystem& sys, const std::vector<LinearRep>& family,
                              const Target& target, const FamilyOptions& opts = {});

// Orbit closure statement for ideal intersections: in a finite orbit space
// every orbit is closed, so the check holds structurally; the note spells
// out why instead of silently omitting the hypothesis.
struct OrbitClosureCheck {
  bool holds = false;
  std::string note;
};
OrbitClosureCheck karideals_check(const DynSystem& sys, const OrbitRep& rep);

}  // namespace tl

#endif  // TL_REPR_HPP
