#include "tl/trajectories.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "tl/linalg.hpp"

namespace tl {

namespace {

void require_validated(const DynSystem& sys, const char* where) {
  if (!sys.validated) throw precondition_error(std::string(where) + ": system not validated");
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

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

IsoReport rank_report(const DynSystem& sys, const std::vector<Matrix>& images) {
  const int dim = cp_dim(sys);
  const Eigen::Index rows = images.front().size();
  Matrix l(rows, dim);
  for (int k = 0; k < dim; ++k) l.col(k) = vec(images[k]);
  const SpanBasis null = nullspace(l, sys.tol);

  IsoReport report;
  report.expected_dim = dim;
  report.achieved_rank = dim - null.rank();
  report.iso = null.rank() == 0;
  for (const Matrix& column : null.basis)
    report.kernel.push_back(cp_from_vec(sys, Vector(column.col(0))));
  return report;
}

}  // namespace

std::vector<OrbitRep> orbit_reps(const DynSystem& sys) {
  require_validated(sys, "orbit_reps");
  const OrbitList list = orbits(sys);
  std::vector<OrbitRep> reps;
  reps.reserve(list.orbits.size());
  for (size_t w = 0; w < list.orbits.size(); ++w) {
    OrbitRep rep;
    rep.orbit_index = static_cast<int>(w);
    rep.orbit = list.orbits[w];
    rep.base_block = list.base_block[w];
    rep.base_points = sys.blocks[rep.base_block];
    rep.d = static_cast<int>(rep.base_points.size()) * sys.fiber_dim;
    reps.push_back(std::move(rep));
  }
  return reps;
}

Matrix pi_prime(const DynSystem& sys, const OrbitRep& rep, const AElement& a) {
  const int n = sys.fiber_dim;
  Matrix out = Matrix::Zero(rep.d, rep.d);
  for (size_t k = 0; k < rep.base_points.size(); ++k)
    out.block(static_cast<int>(k) * n, static_cast<int>(k) * n, n, n) =
        a.value[rep.base_points[k]];
  return out;
}

Matrix pi_omega(const DynSystem& sys, const OrbitRep& rep, const CPElement& f) {
  require_validated(sys, "pi_omega");
  const int n = sys.group.order;
  Matrix out = Matrix::Zero(n * rep.d, n * rep.d);
  for (int t = 0; t < n; ++t)
    for (int tp = 0; tp < n; ++tp) {
      const int s = sys.group.mul(t, sys.group.inv(tp));
      out.block(t * rep.d, tp * rep.d, rep.d, rep.d) =
          pi_prime(sys, rep, alpha(sys, sys.group.inv(t), f.coeff[s]));
    }
  return out;
}

NormPair pi_norm_identity(const DynSystem& sys, const OrbitRep& rep, const AElement& a) {
  NormPair out;
  out.lhs = operator_norm(pi_omega(sys, rep, cp_delta(sys, sys.group.identity, a)));
  for (int g = 0; g < sys.group.order; ++g)
    out.rhs = std::max(out.rhs,
                       operator_norm(pi_prime(sys, rep, alpha(sys, sys.group.inv(g), a))));
  return out;
}

IsoReport phi_iso_check(const DynSystem& sys) {
  require_validated(sys, "phi_iso_check");
  IsoReport report =
      rank_report(sys, coordinate_images(sys, [&](const CPElement& f) { return phi(sys, f); }));
  if (!report.iso && !report.kernel.empty())
    report.witness = b0_witness(sys, report.kernel.front());
  return report;
}

CPElement b0_witness(const DynSystem& sys, const CPElement& kernel_f) {
  require_validated(sys, "b0_witness");
  int best = -1;
  double best_norm = 0.0;
  for (int s = 0; s < sys.group.order; ++s) {
    const double n = a_norm(sys, kernel_f.coeff[s]);
    if (n > best_norm) {
      best_norm = n;
      best = s;
    }
  }
  if (best < 0 || best_norm == 0.0)
    throw precondition_error("b0_witness: element is zero");
  const double scale = cp_to_vec(sys, kernel_f).norm();
  if (phi(sys, kernel_f).norm() > sys.tol.rank_tol * std::max(1.0, scale))
    throw precondition_error("b0_witness: element is not in the kernel of phi");

  CPElement shifted = convolve(
      sys, kernel_f,
      cp_delta(sys, sys.group.inv(best), a_identity(sys)));
  return (1.0 / a_norm(sys, shifted.coeff[sys.group.identity])) * shifted;
}

CentralSearch check_B1(const DynSystem& sys, const CPElement& f, const std::vector<int>& v) {
  require_validated(sys, "check_B1");
  const std::vector<int> blocks = sorted_unique(v);
  if (blocks.empty()) throw precondition_error("check_B1: V is empty");
  for (int m : blocks)
    if (m < 0 || m >= sys.num_blocks())
      throw precondition_error("check_B1: V mentions an unknown block");

  const Matrix p = phi(sys, f);
  const Matrix positive = p.adjoint() * p;
  const Matrix diag = a_matrix(sys, b_star_b_decomp(sys, f).a_tilde);

  CentralSearch out;
  const int nsub = 1 << blocks.size();
  char note[96];
  for (int mask = 1; mask < nsub; ++mask) {
    std::vector<int> chosen;
    for (size_t k = 0; k < blocks.size(); ++k)
      if (mask & (1 << k)) chosen.push_back(blocks[k]);
    const ZElement z = z_indicator(sys, chosen);
    const Matrix zm = z_matrix(sys, z);
    ++out.candidates;
    if (operator_norm(zm * positive) >= operator_norm(zm * diag) - sys.tol.norm_tol) {
      out.holds = true;
      out.z = z;
      std::snprintf(note, sizeof(note), "indicator candidate %d of %d accepted",
                    out.candidates, nsub - 1);
      out.note = note;
      return out;
    }
  }
  std::snprintf(note, sizeof(note), "no witness among %d indicator candidates", nsub - 1);
  out.note = note;
  return out;
}

CentralSearch check_B2(const DynSystem& sys, const std::vector<int>& d,
                       const std::vector<int>& v, const CPElement& f) {
  require_validated(sys, "check_B2");
  const std::vector<int> blocks = sorted_unique(v);
  if (blocks.empty()) throw precondition_error("check_B2: V is empty");
  for (int m : blocks)
    if (m < 0 || m >= sys.num_blocks())
      throw precondition_error("check_B2: V mentions an unknown block");
  const std::vector<int> support = sorted_unique(d);
  for (int g : support) {
    if (g < 0 || g >= sys.group.order)
      throw precondition_error("check_B2: D mentions an unknown element");
    for (int m : blocks)
      if (sys.beta(g, m) != m)
        throw precondition_error("check_B2: an element of D moves a block of V");
  }
  for (int s = 0; s < sys.group.order; ++s)
    if (!std::binary_search(support.begin(), support.end(), s) &&
        a_norm(sys, f.coeff[s]) > 0.0)
      throw precondition_error("check_B2: f is not supported on D");

  const Matrix p = phi(sys, f);
  const Matrix diag = a_matrix(sys, f.coeff[sys.group.identity]);

  CentralSearch out;
  const int nsub = 1 << blocks.size();
  char note[96];
  for (int mask = 1; mask < nsub; ++mask) {
    std::vector<int> chosen;
    for (size_t k = 0; k < blocks.size(); ++k)
      if (mask & (1 << k)) chosen.push_back(blocks[k]);
    const ZElement z = z_indicator(sys, chosen);
    const Matrix zm = z_matrix(sys, z);
    ++out.candidates;
    if (operator_norm(zm * p) >= operator_norm(zm * diag) - sys.tol.norm_tol) {
      out.holds = true;
      out.z = z;
      std::snprintf(note, sizeof(note), "indicator candidate %d of %d accepted",
                    out.candidates, nsub - 1);
      out.note = note;
      return out;
    }
  }
  std::snprintf(note, sizeof(note), "no witness among %d indicator candidates", nsub - 1);
  out.note = note;
  return out;
}

B2PrevResult check_B2prev(const DynSystem& sys, const CPElement& f, const std::vector<int>& v) {
  require_validated(sys, "check_B2prev");
  std::vector<int> support;
  for (int s = 0; s < sys.group.order; ++s)
    if (a_norm(sys, f.coeff[s]) > 0.0) support.push_back(s);
  std::vector<int> differences;
  for (int s : support)
    for (int t : support) differences.push_back(sys.group.mul(sys.group.inv(s), t));

  B2PrevResult out;
  out.partition = fixed_point_partition(sys, sorted_unique(differences), v);

  const BStarB dec = b_star_b_decomp(sys, f);
  const int e = sys.group.identity;
  CPElement full = cp_delta(sys, e, dec.a_tilde) + dec.cross;
  CPElement kept = cp_delta(sys, e, dec.a_tilde);
  for (int s : out.partition.d_tilde)
    if (s != e) kept = kept + cp_delta(sys, s, dec.cross.coeff[s]);

  const Matrix zm = z_matrix(sys, z_indicator(sys, out.partition.delta));
  out.lhs = operator_norm(zm * phi(sys, full));
  out.rhs = operator_norm(zm * phi(sys, kept));
  return out;
}

InvertVerdict invertibility_by_trajectories(const DynSystem& sys, const CPElement& f) {
  require_validated(sys, "invertibility_by_trajectories");
  InvertVerdict out;
  out.invertible = true;
  for (const OrbitRep& rep : orbit_reps(sys)) {
    OrbitInvertibility row;
    row.orbit_index = rep.orbit_index;
    const Matrix t = pi_omega(sys, rep, f);
    row.min_sing = min_singular(t);
    row.norm = operator_norm(t);
    row.invertible = row.min_sing > sys.tol.invert_tol * row.norm;
    if (row.invertible) {
      row.inverse_norm = 1.0 / row.min_sing;
      out.max_inverse_norm = std::max(out.max_inverse_norm, row.inverse_norm);
    }
    out.invertible = out.invertible && row.invertible;
    out.per_orbit.push_back(row);
  }
  const Matrix p = phi(sys, f);
  out.phi_min_sing = min_singular(p);
  out.phi_norm = operator_norm(p);
  out.phi_invertible = out.phi_min_sing > sys.tol.invert_tol * out.phi_norm;
  out.phi_iso = phi_iso_check(sys).iso;
  out.agreement = out.invertible == out.phi_invertible;
  return out;
}

CPElement localize_scalar(const DynSystem& sys, const CPElement& f, int m) {
  require_validated(sys, "localize_scalar");
  if (sys.fiber_dim != 1)
    throw unsupported_operation("localize_scalar: fibers must be one-dimensional");
  for (const auto& block : sys.blocks)
    if (block.size() != 1)
      throw unsupported_operation("localize_scalar: blocks must be singletons");
  if (m < 0 || m >= sys.num_blocks())
    throw precondition_error("localize_scalar: no such block");

  const int x = sys.blocks[m][0];
  CPElement out = cp_zero(sys);
  for (int g = 0; g < sys.group.order; ++g)
    out.coeff[g] = f.coeff[g].value[x](0, 0) * a_identity(sys);
  return out;
}

RhoPeak rho_peak_finder(const DynSystem& sys, const ZElement& rho) {
  require_validated(sys, "rho_peak_finder");
  if (static_cast<int>(rho.value.size()) != sys.num_blocks())
    throw precondition_error("rho_peak_finder: wrong number of block values");
  double peak = 0.0;
  for (const Complex& c : rho.value) {
    if (std::abs(c.imag()) > sys.tol.norm_tol ||
        c.real() < -sys.tol.norm_tol || c.real() > 1.0 + sys.tol.norm_tol)
      throw precondition_error("rho_peak_finder: values must lie in [0,1]");
    peak = std::max(peak, c.real());
  }
  if (std::abs(peak - 1.0) > sys.tol.norm_tol)
    throw precondition_error("rho_peak_finder: peak value must be 1");

  int target = -1;
  for (int m = 0; m < sys.num_blocks() && target < 0; ++m)
    if (rho.value[m].real() >= 1.0 - sys.tol.norm_tol) target = m;

  const OrbitList list = orbits(sys);
  RhoPeak out;
  out.orbit_index = list.orbit_of[target];
  const int base = list.base_block[out.orbit_index];
  for (int g = 0; g < sys.group.order; ++g)
    if (sys.beta(sys.group.inv(g), base) == target) {
      out.g = g;
      break;
    }
  return out;
}

Matrix jg_compress(const DynSystem& sys, const OrbitRep& rep, int g, const Matrix& t) {
  require_validated(sys, "jg_compress");
  if (g < 0 || g >= sys.group.order)
    throw precondition_error("jg_compress: no such group element");
  if (t.rows() != sys.group.order * rep.d || t.cols() != t.rows())
    throw precondition_error("jg_compress: operator has the wrong shape");
  return t.block(g * rep.d, g * rep.d, rep.d, rep.d);
}

IsoReport check_pi_side_iso(const DynSystem& sys) {
  require_validated(sys, "check_pi_side_iso");
  const std::vector<OrbitRep> reps = orbit_reps(sys);
  return rank_report(sys, coordinate_images(sys, [&](const CPElement& f) {
                       Eigen::Index total = 0;
                       for (const OrbitRep& rep : reps) {
                         const Eigen::Index side = sys.group.order * rep.d;
                         total += side * side;
                       }
                       Matrix stacked(total, 1);
                       Eigen::Index at = 0;
                       for (const OrbitRep& rep : reps) {
                         const Matrix image = pi_omega(sys, rep, f);
                         stacked.block(at, 0, image.size(), 1) = vec(image);
                         at += image.size();
                       }
                       return stacked;
                     }));
}

MultProbeResult nontrivial_mult_probe(const DynSystem& sys, int trials, std::uint64_t seed) {
  require_validated(sys, "nontrivial_mult_probe");
  if (sys.fiber_dim != 1)
    throw unsupported_operation("nontrivial_mult_probe: fibers must be one-dimensional");
  for (const auto& block : sys.blocks)
    if (block.size() != 1)
      throw unsupported_operation("nontrivial_mult_probe: blocks must be singletons");

  const int n = sys.group.order;
  const int points = sys.points;
  std::vector<Matrix> units;
  units.reserve(n);
  for (int g = 0; g < n; ++g) units.push_back(unitary(sys, g));

  auto try_support = [&](std::uint64_t mask) -> std::optional<MultProbeResult> {
    std::vector<int> chosen;
    for (int x = 0; x < points; ++x)
      if (mask & (std::uint64_t{1} << x)) chosen.push_back(x);
    if (chosen.empty()) return std::nullopt;

    // Rows of b over the chosen support must vanish for a b = 0.
    Matrix rows(static_cast<int>(chosen.size()) * points, n);
    for (size_t k = 0; k < chosen.size(); ++k)
      for (int y = 0; y < points; ++y)
        for (int g = 0; g < n; ++g)
          rows(static_cast<int>(k) * points + y, g) = units[g](chosen[k], y);
    const SpanBasis null = nullspace(rows, sys.tol);
    for (const Matrix& column : null.basis) {
      Matrix b = Matrix::Zero(points, points);
      for (int g = 0; g < n; ++g) b += column(g, 0) * units[g];
      if (operator_norm(b) <= 1e-8) continue;  // zero as an operator, like I - U on one point
      MultProbeResult hit;
      hit.found = true;
      hit.a = a_zero(sys);
      for (int x : chosen) hit.a.value[x](0, 0) = 1.0;
      for (int g = 0; g < n; ++g) hit.b_coeff.push_back(column(g, 0));
      hit.b = b;
      char note[120];
      std::snprintf(note, sizeof(note),
                    "zero product with indicator support of size %d",
                    static_cast<int>(chosen.size()));
      hit.note = note;
      return hit;
    }
    return std::nullopt;
  };

  if (points <= 16) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << points); ++mask)
      if (auto hit = try_support(mask)) return *hit;
  }
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t mask =
        1 + rng.below(points >= 63 ? ~std::uint64_t{0} - 1
                                   : (std::uint64_t{1} << points) - 1);
    if (auto hit = try_support(mask)) return *hit;
  }

  MultProbeResult out;
  char note[120];
  std::snprintf(note, sizeof(note),
                "no zero product found over indicator supports and %d random trials", trials);
  out.note = note;
  return out;
}

}  // namespace tl
