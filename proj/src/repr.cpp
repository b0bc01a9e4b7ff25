#include "tl/repr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <utility>

#include "tl/linalg.hpp"

namespace tl {

namespace {

void require_validated(const DynSystem& sys, const char* where) {
  if (!sys.validated) throw precondition_error(std::string(where) + ": system not validated");
}

std::string fmt(const char* pattern, int a, int b = 0, int c = 0) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), pattern, a, b, c);
  return buffer;
}

// Orthonormal basis of vec'd matrices grown one candidate at a time, so a
// closure sweep costs a single projection per product instead of a fresh
// factorization.
class SpanAccum {
 public:
  SpanAccum(Eigen::Index side, double tol) : side_(side), tol_(tol) {}

  // Adds m unless it already lies in the span; returns whether it was added.
  bool offer(const Matrix& m) {
    Vector v = vec(m);
    const double scale = v.norm();
    if (!(scale > tol_)) return false;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& u : q_) v -= u.dot(v) * u;
    if (v.norm() <= tol_ * std::max(1.0, scale)) return false;
    v /= v.norm();
    q_.push_back(std::move(v));
    return true;
  }

  int rank() const { return static_cast<int>(q_.size()); }

  std::vector<Matrix> matrices() const {
    std::vector<Matrix> out;
    out.reserve(q_.size());
    for (const Vector& u : q_) out.push_back(unvec(u, side_, side_));
    return out;
  }

 private:
  Eigen::Index side_;
  double tol_;
  std::vector<Vector> q_;
};

std::vector<Matrix> coordinate_images(const DynSystem& sys,
                                      const std::function<Matrix(const CPElement&)>& map) {
  const int dim = cp_dim(sys);
  std::vector<Matrix> images;
  images.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    Vector e = Vector::Zero(dim);
    e(k) = 1.0;
    images.push_back(map(cp_from_vec(sys, e)));
  }
  return images;
}

// Nullspace of the stacked maps, i.e. the joint kernel in coordinate space.
SpanBasis stacked_kernel(int dim, const std::vector<const LinearRep*>& reps,
                         const Tolerances& tol) {
  Eigen::Index rows = 0;
  for (const LinearRep* r : reps) rows += r->side * r->side;
  Matrix l(rows, dim);
  Eigen::Index at = 0;
  for (const LinearRep* r : reps) {
    const Eigen::Index size = r->side * r->side;
    for (int c = 0; c < dim; ++c) l.block(at, c, size, 1) = vec(r->images[c]);
    at += size;
  }
  return nullspace(l, tol);
}

}  // namespace

StarSpan star_closure(const std::vector<Matrix>& generators, const Tolerances& tol) {
  if (!tol.valid()) throw precondition_error("star_closure: invalid tolerances");
  if (generators.empty()) throw precondition_error("star_closure: no generators");
  const Eigen::Index side = generators.front().rows();
  if (side < 1) throw precondition_error("star_closure: empty matrix");
  for (const Matrix& g : generators)
    if (g.rows() != side || g.cols() != side)
      throw precondition_error("star_closure: generators must be square and equally sized");

  SpanAccum accum(side, tol.rank_tol);
  accum.offer(Matrix::Identity(side, side));
  for (const Matrix& g : generators) accum.offer(g);

  // Product and adjoint augmentation to a fixpoint. Processing index p offers
  // the adjoint of element p and all products with indices up to p, so at
  // termination every pair and every adjoint has been membership-tested. A
  // span of full rank is the whole matrix algebra and needs no further tests.
  std::vector<Matrix> basis = accum.matrices();
  const int full = static_cast<int>(side * side);
  size_t processed = 0;
  while (processed < basis.size() && accum.rank() < full) {
    const Matrix b = basis[processed];
    bool grew = accum.offer(b.adjoint());
    for (size_t i = 0; i <= processed; ++i) {
      grew = accum.offer(basis[i] * b) || grew;
      grew = accum.offer(b * basis[i]) || grew;
      if (accum.rank() == full) break;
    }
    if (grew) basis = accum.matrices();
    ++processed;
  }

  StarSpan span;
  span.side = side;
  span.basis = accum.matrices();
  return span;
}

SpanBasis as_span_basis(const StarSpan& span) {
  SpanBasis out;
  out.rows = span.side;
  out.cols = span.side;
  out.basis = span.basis;
  return out;
}

WedderburnData wedderburn(const StarSpan& span, const Tolerances& tol, std::uint64_t seed) {
  if (!tol.valid()) throw precondition_error("wedderburn: invalid tolerances");
  const Eigen::Index side = span.side;
  if (side < 1 || span.basis.empty()) throw precondition_error("wedderburn: empty span");
  for (const Matrix& m : span.basis)
    if (m.rows() != side || m.cols() != side)
      throw precondition_error("wedderburn: basis entry has the wrong shape");

  // Re-orthonormalize so hand-assembled spans are accepted too.
  const SpanBasis ortho = span_basis(span.basis, tol);
  const std::vector<Matrix>& b = ortho.basis;
  const int k = ortho.rank();

  if (!in_span(Matrix(Matrix::Identity(side, side)), ortho, tol).member)
    throw precondition_error("wedderburn: span does not contain the identity");
  for (int i = 0; i < k; ++i)
    if (!in_span(Matrix(b[i].adjoint()), ortho, tol).member)
      throw precondition_error("wedderburn: span is not closed under adjoints");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const Matrix prod = b[i] * b[j];
      // A product at noise level is the zero direction, inside every span.
      if (vec(prod).norm() <= tol.rank_tol) continue;
      if (!in_span(prod, ortho, tol).member)
        throw precondition_error("wedderburn: span is not closed under products");
    }

  // Center: solutions of the commutation equations against the whole basis.
  Matrix commutators(side * side * k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      commutators.block(side * side * j, i, side * side, 1) = vec(b[i] * b[j] - b[j] * b[i]);
  const SpanBasis center_coords = nullspace(commutators, tol);
  std::vector<Matrix> center;
  center.reserve(center_coords.basis.size());
  for (const Matrix& col : center_coords.basis) {
    Matrix c = Matrix::Zero(side, side);
    for (int i = 0; i < k; ++i) c += col(i, 0) * b[i];
    center.push_back(std::move(c));
  }
  const int center_dim = static_cast<int>(center.size());
  if (center_dim < 1) throw validation_error("wedderburn: the center lost the identity");

  // A generic Hermitian central element has one eigenvalue per block, so its
  // spectral clusters are the minimal central projections. An unlucky draw
  // (two blocks sharing an eigenvalue) is retried with fresh coefficients.
  Rng rng(seed);
  for (int attempt = 0; attempt < 5; ++attempt) {
    Matrix h = Matrix::Zero(side, side);
    for (const Matrix& c : center) {
      const double re = rng.symmetric();
      const double im = rng.symmetric();
      h += re * (c + c.adjoint());
      h += im * (Complex(0.0, 1.0) * (c.adjoint() - c));
    }
    const HermEig eig = hermitian_eig(h, tol);
    const double scale =
        std::max(1.0, std::max(std::abs(eig.values(0)), std::abs(eig.values(side - 1))));
    const double gap = tol.invert_tol * scale;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= side; ++i)
      if (i == side || eig.values(i) - eig.values(i - 1) > gap) {
        clusters.emplace_back(start, i - start);
        start = i;
      }
    if (static_cast<int>(clusters.size()) != center_dim) continue;

    std::vector<Matrix> projections;
    std::vector<int> dims;
    bool ok = true;
    int total = 0;
    for (const auto& [lo, len] : clusters) {
      const Matrix u = eig.vectors.middleCols(lo, len);
      const Matrix e = u * u.adjoint();
      for (int j = 0; j < k && ok; ++j)
        if (operator_norm(e * b[j] - b[j] * e) > tol.norm_tol) ok = false;
      if (!ok) break;
      std::vector<Matrix> compressed;
      compressed.reserve(k);
      for (int j = 0; j < k; ++j) compressed.push_back(e * b[j]);
      const int r = span_basis(compressed, tol).rank();
      const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(r))));
      if (d * d != r) {
        ok = false;
        break;
      }
      projections.push_back(e);
      dims.push_back(d);
      total += r;
    }
    if (!ok || total != k) continue;

    std::vector<int> order(projections.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return dims[x] > dims[y]; });
    WedderburnData out;
    out.side = side;
    out.span_rank = k;
    for (int idx : order) {
      out.projections.push_back(std::move(projections[idx]));
      out.block_dims.push_back(dims[idx]);
    }
    return out;
  }
  throw validation_error(
      "wedderburn: eigenvalue clusters failed to separate the center in 5 attempts");
}

RealVector block_norms(const WedderburnData& data, const Matrix& b) {
  if (b.rows() != data.side || b.cols() != data.side)
    throw precondition_error("block_norms: matrix does not match the span side");
  RealVector out(static_cast<Eigen::Index>(data.projections.size()));
  for (size_t i = 0; i < data.projections.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = operator_norm(data.projections[i] * b);
  return out;
}

std::vector<CPElement> kernel_of_pi_omega(const DynSystem& sys, const OrbitRep& rep) {
  require_validated(sys, "kernel_of_pi_omega");
  const int dim = cp_dim(sys);
  const Eigen::Index side = static_cast<Eigen::Index>(sys.group.order) * rep.d;
  Matrix l(side * side, dim);
  for (int c = 0; c < dim; ++c) {
    Vector e = Vector::Zero(dim);
    e(c) = 1.0;
    l.col(c) = vec(pi_omega(sys, rep, cp_from_vec(sys, e)));
  }
  const SpanBasis null = nullspace(l, sys.tol);
  std::vector<CPElement> kernel;
  kernel.reserve(null.basis.size());
  for (const Matrix& col : null.basis) kernel.push_back(cp_from_vec(sys, Vector(col.col(0))));
  return kernel;
}

Matrix rep_apply(const DynSystem& sys, const LinearRep& rep, const CPElement& f) {
  require_validated(sys, "rep_apply");
  if (static_cast<int>(rep.images.size()) != cp_dim(sys) || rep.side < 1)
    throw precondition_error("rep_apply: representation does not match the coordinate layout");
  const Vector v = cp_to_vec(sys, f);
  Matrix out = Matrix::Zero(rep.side, rep.side);
  for (Eigen::Index c = 0; c < v.size(); ++c)
    if (v(c) != Complex(0.0, 0.0)) out += v(c) * rep.images[c];
  return out;
}

LinearRep rep_from_orbit(const DynSystem& sys, const OrbitRep& rep) {
  require_validated(sys, "rep_from_orbit");
  LinearRep out;
  out.name = fmt("pi[orbit %d]", rep.orbit_index);
  out.side = static_cast<Eigen::Index>(sys.group.order) * rep.d;
  out.images = coordinate_images(sys, [&](const CPElement& f) { return pi_omega(sys, rep, f); });
  return out;
}

Target crossed_product_target(const DynSystem& sys) {
  require_validated(sys, "crossed_product_target");
  Target t;
  t.rep.name = "lambda";
  t.rep.side = static_cast<Eigen::Index>(sys.group.order) * sys.dim_h();
  t.rep.images = coordinate_images(sys, [&](const CPElement& f) { return regular_rep(sys, f); });
  t.span = star_closure(t.rep.images, sys.tol);
  return t;
}

Target image_algebra_target(const DynSystem& sys) {
  require_validated(sys, "image_algebra_target");
  Target t;
  t.rep.name = "phi";
  t.rep.side = sys.dim_h();
  t.rep.images = coordinate_images(sys, [&](const CPElement& f) { return phi(sys, f); });
  t.span = star_closure(t.rep.images, sys.tol);
  return t;
}

FamilyVerdict family_verdicts(const DynSystem& sys, const std::vector<LinearRep>& family,
                              const Target& target, const FamilyOptions& opts) {
  require_validated(sys, "family_verdicts");
  if (family.empty()) throw precondition_error("family_verdicts: empty family");
  if (opts.norming_samples < 0 || opts.transfer_samples < 0)
    throw precondition_error("family_verdicts: negative sample count");
  const int dim = cp_dim(sys);
  const Tolerances& tol = sys.tol;

  auto require_layout = [&](const LinearRep& rep) {
    if (static_cast<int>(rep.images.size()) != dim || rep.side < 1)
      throw precondition_error("family_verdicts: representation '" + rep.name +
                               "' does not match the coordinate layout");
    for (const Matrix& m : rep.images)
      if (m.rows() != rep.side || m.cols() != rep.side)
        throw precondition_error("family_verdicts: representation '" + rep.name +
                                 "' has image matrices of the wrong shape");
  };
  require_layout(target.rep);
  for (const LinearRep& m : family) require_layout(m);

  Rng rng(opts.seed);

  // Unit, product and adjoint law on sampled pairs, for the target model and
  // for every member.
  const CPElement unit = cp_delta(sys, sys.group.identity, a_identity(sys));
  auto require_hom = [&](const LinearRep& rep) {
    const Matrix id = Matrix::Identity(rep.side, rep.side);
    if (operator_norm(rep_apply(sys, rep, unit) - id) > tol.norm_tol)
      throw precondition_error("family_verdicts: '" + rep.name +
                               "' does not map the unit to the identity");
    for (int s = 0; s < 4; ++s) {
      const CPElement f = random_cp(sys, rng);
      const CPElement h = random_cp(sys, rng);
      const Matrix pf = rep_apply(sys, rep, f);
      const Matrix ph = rep_apply(sys, rep, h);
      const double scale = std::max(1.0, operator_norm(pf) * operator_norm(ph));
      if (operator_norm(rep_apply(sys, rep, convolve(sys, f, h)) - pf * ph) >
          tol.norm_tol * scale)
        throw precondition_error("family_verdicts: '" + rep.name +
                                 "' breaks the product law on sample pair " + std::to_string(s));
      if (operator_norm(rep_apply(sys, rep, involute(sys, f)) - pf.adjoint()) >
          tol.norm_tol * std::max(1.0, operator_norm(pf)))
        throw precondition_error("family_verdicts: '" + rep.name +
                                 "' breaks the adjoint law on sample pair " + std::to_string(s));
    }
  };
  require_hom(target.rep);
  for (const LinearRep& m : family) require_hom(m);

  const SpanBasis target_kernel = stacked_kernel(dim, {&target.rep}, tol);
  std::vector<SpanBasis> member_kernels;
  member_kernels.reserve(family.size());
  std::vector<const LinearRep*> all;
  all.reserve(family.size());
  for (const LinearRep& m : family) {
    member_kernels.push_back(stacked_kernel(dim, {&m}, tol));
    all.push_back(&m);
  }
  const SpanBasis common_kernel = stacked_kernel(dim, all, tol);

  // Representations of the target must vanish on its kernel.
  for (const LinearRep& m : family)
    for (const Matrix& col : target_kernel.basis)
      if (operator_norm(rep_apply(sys, m, cp_from_vec(sys, Vector(col.col(0))))) > tol.rank_tol)
        throw precondition_error("family_verdicts: '" + m.name +
                                 "' does not vanish on the target kernel");

  FamilyVerdict verdict;

  // Members factor through the target, so the common kernel contains the
  // target kernel; equal dimensions then mean equal spaces.
  verdict.faithful = common_kernel.rank() == target_kernel.rank();
  if (!verdict.faithful) {
    double best = -1.0;
    Vector best_v;
    for (const Matrix& col : common_kernel.basis) {
      const Vector v = col.col(0);
      const double n = operator_norm(rep_apply(sys, target.rep, cp_from_vec(sys, v)));
      if (n > best) {
        best = n;
        best_v = v;
      }
    }
    verdict.faithful_witness = cp_from_vec(sys, best_v);
  }

  auto norming_holds_at = [&](const CPElement& f) {
    const double tn = operator_norm(rep_apply(sys, target.rep, f));
    double fn = 0.0;
    for (const LinearRep& m : family) fn = std::max(fn, operator_norm(rep_apply(sys, m, f)));
    if (std::abs(fn - tn) <= tol.norm_tol * std::max(1.0, tn)) return true;
    if (!verdict.norming_witness) {
      verdict.norming_witness = f;
      verdict.norming_gap = tn - fn;
    }
    return false;
  };
  verdict.strictly_norming = true;
  for (int c = 0; c < dim && verdict.strictly_norming; ++c) {
    Vector e = Vector::Zero(dim);
    e(c) = 1.0;
    verdict.strictly_norming = norming_holds_at(cp_from_vec(sys, e));
  }
  for (int s = 0; s < opts.norming_samples && verdict.strictly_norming; ++s)
    verdict.strictly_norming = norming_holds_at(random_cp(sys, rng));

  // Block coverage: member kernels pushed to the target side must be killed
  // by the block projection.
  const WedderburnData blocks = wedderburn(target.span, tol);
  std::vector<std::vector<Matrix>> kernel_images(family.size());
  for (size_t m = 0; m < family.size(); ++m)
    for (const Matrix& col : member_kernels[m].basis)
      kernel_images[m].push_back(
          rep_apply(sys, target.rep, cp_from_vec(sys, Vector(col.col(0)))));
  verdict.exhaustive = true;
  for (size_t i = 0; i < blocks.projections.size(); ++i) {
    bool covered = false;
    for (size_t m = 0; m < family.size() && !covered; ++m) {
      bool inside = true;
      for (const Matrix& img : kernel_images[m])
        if (operator_norm(blocks.projections[i] * img) >
            tol.rank_tol * std::max(1.0, operator_norm(img))) {
          inside = false;
          break;
        }
      covered = inside;
    }
    if (!covered) {
      verdict.exhaustive = false;
      verdict.uncovered_block = static_cast<int>(i);
      break;
    }
  }

  auto invertible = [&](const Matrix& x) {
    return min_singular(x) > tol.invert_tol * operator_norm(x);
  };
  auto transfer_agrees = [&](const CPElement& f) {
    const bool on_target = invertible(rep_apply(sys, target.rep, f));
    bool on_family = true;
    for (const LinearRep& m : family)
      if (!invertible(rep_apply(sys, m, f))) {
        on_family = false;
        break;
      }
    if (on_target == on_family) return true;
    if (!verdict.transfer_witness) verdict.transfer_witness = f;
    return false;
  };
  bool transfer_ok = transfer_agrees(unit);

  // One exactly singular probe per block: an element mapping to 1 - e_i.
  {
    Matrix l(target.rep.side * target.rep.side, dim);
    for (int c = 0; c < dim; ++c) l.col(c) = vec(target.rep.images[c]);
    Eigen::ColPivHouseholderQR<Matrix> qr(l);
    for (const Matrix& e : blocks.projections) {
      const Vector rhs = vec(Matrix(Matrix::Identity(target.rep.side, target.rep.side) - e));
      const Vector x = qr.solve(rhs);
      if ((l * x - rhs).norm() > tol.rank_tol * std::max(1.0, rhs.norm()))
        throw validation_error("family_verdicts: a central projection escaped the target model");
      transfer_ok = transfer_agrees(cp_from_vec(sys, x)) && transfer_ok;
    }
  }
  for (int s = 0; s < opts.transfer_samples; ++s)
    transfer_ok = transfer_agrees(random_cp(sys, rng)) && transfer_ok;
  verdict.sufficient = verdict.exhaustive && transfer_ok;

  verdict.note = fmt(
      "block coverage checked against %d minimal central projections; invertibility "
      "transfer sampled on %d random elements plus %d structured probes (the sampled "
      "transfer alone is heuristic, the block criterion is exact)",
      static_cast<int>(blocks.projections.size()), opts.transfer_samples,
      static_cast<int>(blocks.projections.size()) + 1);
  return verdict;
}

OrbitClosureCheck karideals_check(const DynSystem& sys, const OrbitRep& rep) {
  require_validated(sys, "karideals_check");
  if (rep.base_block < 0 || rep.base_block >= sys.num_blocks() || rep.orbit.empty())
    throw precondition_error("karideals_check: orbit does not belong to the system");
  for (int m : rep.orbit)
    if (m < 0 || m >= sys.num_blocks())
      throw precondition_error("karideals_check: orbit does not belong to the system");
  OrbitClosureCheck out;
  out.holds = true;
  out.note = fmt(
      "the orbit of block %d contains %d block(s) and is closed in the finite orbit "
      "space, so the ideal intersections over the orbit and over its closure range "
      "over the same blocks and coincide",
      rep.base_block, static_cast<int>(rep.orbit.size()));
  return out;
}

}  // namespace tl
