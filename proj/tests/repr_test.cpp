#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "tl/repr.hpp"

using tl::Complex;
using tl::CPElement;
using tl::Matrix;
using tl::Vector;

namespace {

Matrix shift3() {
  Matrix s = Matrix::Zero(3, 3);
  s(1, 0) = 1.0;
  s(2, 1) = 1.0;
  s(0, 2) = 1.0;
  return s;
}

Matrix swap2() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  s(1, 0) = 1.0;
  return s;
}

// Random element of the span with coefficients in the complex unit box.
Matrix span_element(const tl::StarSpan& span, tl::Rng& rng) {
  Matrix b = Matrix::Zero(span.side, span.side);
  for (const Matrix& m : span.basis) b += rng.complex_box() * m;
  return b;
}

bool contains_matrix(const std::vector<Matrix>& set, const Matrix& m, double tol) {
  for (const Matrix& s : set)
    if ((s - m).norm() <= tol) return true;
  return false;
}

// The expensive fixture's targets, built once per binary.
const tl::DynSystem& s5_sys() {
  static const tl::DynSystem sys = tlt::make_s5();
  return sys;
}
const tl::Target& s5_crossed() {
  static const tl::Target t = tl::crossed_product_target(s5_sys());
  return t;
}
const tl::Target& s5_image() {
  static const tl::Target t = tl::image_algebra_target(s5_sys());
  return t;
}

void check_wedderburn_invariants(const tl::StarSpan& span, const tl::WedderburnData& wd) {
  const Matrix id = Matrix::Identity(span.side, span.side);
  REQUIRE(wd.projections.size() == wd.block_dims.size());

  int dim_square_sum = 0;
  Matrix sum = Matrix::Zero(span.side, span.side);
  for (size_t i = 0; i < wd.projections.size(); ++i) {
    const Matrix& e = wd.projections[i];
    CHECK(tl::operator_norm(e - e.adjoint()) <= 1e-10);
    CHECK(tl::operator_norm(e * e - e) <= 1e-10);
    for (size_t j = i + 1; j < wd.projections.size(); ++j)
      CHECK(tl::operator_norm(e * wd.projections[j]) <= 1e-10);
    for (const Matrix& b : span.basis) CHECK(tl::operator_norm(e * b - b * e) <= 1e-10);
    sum += e;
    dim_square_sum += wd.block_dims[i] * wd.block_dims[i];
  }
  CHECK(tl::operator_norm(sum - id) <= 1e-10);
  CHECK(dim_square_sum == wd.span_rank);
  CHECK(wd.span_rank == span.rank());
  CHECK(std::is_sorted(wd.block_dims.begin(), wd.block_dims.end(), std::greater<int>()));
}

}  // namespace

TEST_CASE("star closure of the identity alone") {
  const tl::StarSpan span = tl::star_closure({Matrix::Identity(2, 2)});
  REQUIRE(span.rank() == 1);
  CHECK(span.side == 2);
  // The one basis element is the normalized identity.
  CHECK((span.basis[0] - Matrix::Identity(2, 2) / std::sqrt(2.0)).norm() <= 1e-14);
}

TEST_CASE("star closure of a cyclic shift closes under powers") {
  const Matrix s = shift3();
  const tl::StarSpan span = tl::star_closure({s});
  REQUIRE(span.rank() == 3);
  const tl::SpanBasis basis = tl::as_span_basis(span);
  CHECK(tl::in_span(Matrix(s * s), basis).member);
  CHECK(tl::in_span(Matrix(Matrix::Identity(3, 3)), basis).member);
  CHECK(tl::in_span(Matrix(s.adjoint()), basis).member);
  // A matrix outside the circulant span stays outside.
  Matrix e00 = Matrix::Zero(3, 3);
  e00(0, 0) = 1.0;
  CHECK(!tl::in_span(e00, basis).member);
}

TEST_CASE("star closure from the defining representation generators") {
  const tl::DynSystem sys = tlt::make_s3();
  std::vector<Matrix> generators;
  for (int x = 0; x < sys.points; ++x) {
    tl::AElement a = tl::a_zero(sys);
    a.value[x](0, 0) = 1.0;
    generators.push_back(tl::a_matrix(sys, a));
  }
  generators.push_back(tl::unitary(sys, 1));

  const tl::StarSpan span = tl::star_closure(generators);
  CHECK(span.rank() == 5);
  // Same span as the one generated by all coordinate images.
  CHECK(span.rank() == tl::image_algebra_target(sys).span.rank());
}

TEST_CASE("star closure output is orthonormal and verified closed") {
  const tl::DynSystem sys = tlt::make_s3();
  std::vector<Matrix> generators = {tl::unitary(sys, 1)};
  tl::AElement a = tl::a_zero(sys);
  a.value[0](0, 0) = 1.0;
  generators.push_back(tl::a_matrix(sys, a));

  for (const tl::StarSpan& span : {tl::star_closure({shift3()}), tl::star_closure(generators)}) {
    const tl::SpanBasis basis = tl::as_span_basis(span);
    for (size_t i = 0; i < span.basis.size(); ++i) {
      for (size_t j = 0; j < span.basis.size(); ++j) {
        const Complex inner = tl::frobenius_inner(span.basis[i], span.basis[j]);
        const Complex want = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        CHECK(std::abs(inner - want) <= 1e-12);
        const Matrix prod = span.basis[i] * span.basis[j];
        if (prod.norm() > 1e-9) CHECK(tl::in_span(prod, basis).member);
      }
      CHECK(tl::in_span(Matrix(span.basis[i].adjoint()), basis).member);
    }
  }
}

TEST_CASE("star closure preconditions") {
  CHECK_THROWS_AS(tl::star_closure({}), tl::precondition_error);
  CHECK_THROWS_AS(tl::star_closure({Matrix::Zero(2, 3)}), tl::precondition_error);
  CHECK_THROWS_AS(tl::star_closure({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}),
                  tl::precondition_error);
  tl::Tolerances bad;
  bad.rank_tol = 0.0;
  CHECK_THROWS_AS(tl::star_closure({Matrix::Identity(2, 2)}, bad), tl::precondition_error);
}

TEST_CASE("wedderburn splits the swap span into two characters") {
  const tl::StarSpan span = tl::star_closure({swap2()});
  REQUIRE(span.rank() == 2);
  const tl::WedderburnData wd = tl::wedderburn(span);
  REQUIRE(wd.block_dims == std::vector<int>{1, 1});
  check_wedderburn_invariants(span, wd);

  const Matrix plus = (Matrix::Identity(2, 2) + swap2()) / 2.0;
  const Matrix minus = (Matrix::Identity(2, 2) - swap2()) / 2.0;
  CHECK(contains_matrix(wd.projections, plus, 1e-10));
  CHECK(contains_matrix(wd.projections, minus, 1e-10));
}

TEST_CASE("wedderburn sees a generated full matrix algebra as one block") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  const tl::StarSpan span = tl::star_closure({shift3(), d});
  REQUIRE(span.rank() == 9);
  const tl::WedderburnData wd = tl::wedderburn(span);
  CHECK(wd.block_dims == std::vector<int>{3});
  CHECK(tl::operator_norm(wd.projections[0] - Matrix::Identity(3, 3)) <= 1e-10);
  check_wedderburn_invariants(span, wd);
}

TEST_CASE("wedderburn rejects spans missing closure properties") {
  // No identity.
  tl::StarSpan no_unit;
  no_unit.side = 2;
  no_unit.basis = {swap2()};
  CHECK_THROWS_AS(tl::wedderburn(no_unit), tl::precondition_error);

  // Not adjoint closed.
  Matrix e01 = Matrix::Zero(2, 2);
  e01(0, 1) = 1.0;
  tl::StarSpan no_adjoint;
  no_adjoint.side = 2;
  no_adjoint.basis = {Matrix::Identity(2, 2), e01};
  CHECK_THROWS_AS(tl::wedderburn(no_adjoint), tl::precondition_error);

  // Not product closed.
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  tl::StarSpan no_product;
  no_product.side = 3;
  no_product.basis = {Matrix::Identity(3, 3), d};
  CHECK_THROWS_AS(tl::wedderburn(no_product), tl::precondition_error);

  tl::StarSpan empty;
  CHECK_THROWS_AS(tl::wedderburn(empty), tl::precondition_error);
}

TEST_CASE("wedderburn block structure of the fixture targets") {
  struct Expected {
    tl::DynSystem sys;
    std::vector<int> crossed;
    std::vector<int> image;
  };
  std::vector<Expected> table;
  table.push_back({tlt::make_s1(), {3}, {3}});
  table.push_back({tlt::make_s2(), {1, 1}, {1}});
  table.push_back({tlt::make_s3(), {2, 1, 1}, {2, 1}});
  table.push_back({tlt::make_s3_minus(), {2, 1, 1}, {2, 1}});
  table.push_back({tlt::make_s4(), {2}, {2}});

  for (size_t i = 0; i < table.size(); ++i) {
    CAPTURE(i);
    const tl::Target crossed = tl::crossed_product_target(table[i].sys);
    const tl::WedderburnData wc = tl::wedderburn(crossed.span);
    CHECK(wc.block_dims == table[i].crossed);
    check_wedderburn_invariants(crossed.span, wc);

    const tl::Target image = tl::image_algebra_target(table[i].sys);
    const tl::WedderburnData wi = tl::wedderburn(image.span);
    CHECK(wi.block_dims == table[i].image);
    check_wedderburn_invariants(image.span, wi);
  }

  const tl::WedderburnData w5c = tl::wedderburn(s5_crossed().span);
  CHECK(w5c.block_dims == std::vector<int>{8});
  check_wedderburn_invariants(s5_crossed().span, w5c);

  const tl::WedderburnData w5i = tl::wedderburn(s5_image().span);
  CHECK(w5i.block_dims == std::vector<int>{8});
  check_wedderburn_invariants(s5_image().span, w5i);
}

TEST_CASE("wedderburn recovers the hand-built projections of the two-orbit system") {
  // Crossed product of the swap-with-fixed-point system: one 2x2 block on
  // the moving pair and two characters on the fixed point.
  const tl::DynSystem sys = tlt::make_s3();
  const tl::Target target = tl::crossed_product_target(sys);
  const tl::WedderburnData wd = tl::wedderburn(target.span);
  REQUIRE(wd.block_dims == std::vector<int>{2, 1, 1});

  Matrix top = Matrix::Zero(6, 6);
  top(0, 0) = 1.0;
  top(1, 1) = 1.0;
  top(3, 3) = 1.0;
  top(4, 4) = 1.0;
  Matrix plus = Matrix::Zero(6, 6);
  plus(2, 2) = 0.5;
  plus(5, 5) = 0.5;
  plus(2, 5) = 0.5;
  plus(5, 2) = 0.5;
  Matrix minus = Matrix::Zero(6, 6);
  minus(2, 2) = 0.5;
  minus(5, 5) = 0.5;
  minus(2, 5) = -0.5;
  minus(5, 2) = -0.5;

  CHECK(contains_matrix(wd.projections, top, 1e-10));
  CHECK(contains_matrix(wd.projections, plus, 1e-10));
  CHECK(contains_matrix(wd.projections, minus, 1e-10));
}

TEST_CASE("block norms reconstruct the operator norm on the span") {
  const tl::DynSystem sys = tlt::make_s3();
  const tl::Target target = tl::crossed_product_target(sys);
  const tl::WedderburnData wd = tl::wedderburn(target.span);

  tl::Rng rng(2026);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix b = span_element(target.span, rng);
    const tl::RealVector norms = tl::block_norms(wd, b);
    CHECK(std::abs(norms.maxCoeff() - tl::operator_norm(b)) <= 1e-10);
  }
  CHECK_THROWS_AS(tl::block_norms(wd, Matrix::Identity(2, 2)), tl::precondition_error);
}

TEST_CASE("wedderburn is deterministic and seed-stable as a set") {
  const tl::DynSystem sys = tlt::make_s3();
  const tl::Target target = tl::crossed_product_target(sys);

  const tl::WedderburnData a = tl::wedderburn(target.span);
  const tl::WedderburnData b = tl::wedderburn(target.span);
  REQUIRE(a.projections.size() == b.projections.size());
  for (size_t i = 0; i < a.projections.size(); ++i)
    CHECK((a.projections[i] - b.projections[i]).norm() == 0.0);

  // A different seed may reorder equal-dimension blocks but must produce the
  // same set of projections.
  const tl::WedderburnData c = tl::wedderburn(target.span, sys.tol, 777);
  CHECK(c.block_dims == a.block_dims);
  for (const Matrix& e : a.projections) CHECK(contains_matrix(c.projections, e, 1e-10));
}

TEST_CASE("kernel of pi_omega on transitive systems is trivial") {
  for (const tl::DynSystem& sys : {tlt::make_s1(), tlt::make_s2(), tlt::make_s4()}) {
    for (const tl::OrbitRep& rep : tl::orbit_reps(sys))
      CHECK(tl::kernel_of_pi_omega(sys, rep).empty());
  }
  CHECK(tl::kernel_of_pi_omega(s5_sys(), tl::orbit_reps(s5_sys())[0]).empty());
}

TEST_CASE("kernel of pi_omega is the ideal vanishing on the orbit") {
  for (const tl::DynSystem& sys : {tlt::make_s3(), tlt::make_s3_minus()}) {
    const auto reps = tl::orbit_reps(sys);
    REQUIRE(reps.size() == 2);

    // Orbit of the moving pair: one free coordinate (the fixed point) per
    // group element. Orbit of the fixed point: two free coordinates each.
    const std::vector<size_t> expected = {2, 4};
    for (size_t w = 0; w < reps.size(); ++w) {
      CAPTURE(w);
      const auto kernel = tl::kernel_of_pi_omega(sys, reps[w]);
      CHECK(kernel.size() == expected[w]);

      std::vector<bool> on_orbit(sys.points, false);
      for (int m : reps[w].orbit)
        for (int x : sys.blocks[m]) on_orbit[x] = true;

      // Kernel elements vanish on the orbit...
      for (const CPElement& f : kernel)
        for (int s = 0; s < sys.group.order; ++s)
          for (int x = 0; x < sys.points; ++x)
            if (on_orbit[x]) CHECK(std::abs(f.coeff[s].value[x](0, 0)) <= 1e-12);

      // ...and every coordinate off the orbit lies in the kernel, so the
      // dimension count identifies the two spaces.
      size_t off_orbit = 0;
      for (int s = 0; s < sys.group.order; ++s)
        for (int x = 0; x < sys.points; ++x) {
          if (on_orbit[x]) continue;
          ++off_orbit;
          tl::AElement a = tl::a_zero(sys);
          a.value[x](0, 0) = 1.0;
          CHECK(tl::operator_norm(tl::pi_omega(sys, reps[w], tl::cp_delta(sys, s, a))) <= 1e-12);
        }
      CHECK(off_orbit == kernel.size());
    }
  }
}

TEST_CASE("identity coefficient part of the kernel is the vanishing ideal") {
  std::vector<tl::DynSystem> fixtures = {tlt::make_s1(), tlt::make_s2(), tlt::make_s3(),
                                         tlt::make_s3_minus(), tlt::make_s4()};
  fixtures.push_back(s5_sys());
  for (size_t fi = 0; fi < fixtures.size(); ++fi) {
    CAPTURE(fi);
    const tl::DynSystem& sys = fixtures[fi];
    const int n = sys.fiber_dim;
    for (const tl::OrbitRep& rep : tl::orbit_reps(sys)) {
      int orbit_points = 0;
      for (int m : rep.orbit) orbit_points += static_cast<int>(sys.blocks[m].size());

      // Restrict the representation to identity coefficients and count the
      // nullity; it must equal the number of coordinates off the orbit.
      const Eigen::Index side = static_cast<Eigen::Index>(sys.group.order) * rep.d;
      Matrix l(side * side, static_cast<Eigen::Index>(sys.points) * n * n);
      Eigen::Index col = 0;
      for (int x = 0; x < sys.points; ++x)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            tl::AElement a = tl::a_zero(sys);
            a.value[x](i, j) = 1.0;
            l.col(col++) =
                tl::vec(tl::pi_omega(sys, rep, tl::cp_delta(sys, sys.group.identity, a)));
          }
      const int nullity = tl::nullspace(l, sys.tol).rank();
      CHECK(nullity == (sys.points - orbit_points) * n * n);
    }
  }
}

TEST_CASE("packaged orbit representations apply like direct evaluation") {
  const tl::DynSystem sys = tlt::make_s3();
  const auto reps = tl::orbit_reps(sys);
  const tl::LinearRep r0 = tl::rep_from_orbit(sys, reps[0]);
  const tl::LinearRep r1 = tl::rep_from_orbit(sys, reps[1]);
  CHECK(!r0.name.empty());
  CHECK(r0.name != r1.name);

  tl::Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const CPElement f = tl::random_cp(sys, rng);
    CHECK((tl::rep_apply(sys, r0, f) - tl::pi_omega(sys, reps[0], f)).norm() <= 1e-12);
    CHECK((tl::rep_apply(sys, r1, f) - tl::pi_omega(sys, reps[1], f)).norm() <= 1e-12);
  }

  tl::LinearRep broken = r0;
  broken.images.pop_back();
  CHECK_THROWS_AS(tl::rep_apply(sys, broken, tl::random_cp(sys, rng)), tl::precondition_error);
}

TEST_CASE("crossed product target models the regular representation") {
  std::vector<tl::DynSystem> fixtures = {tlt::make_s1(), tlt::make_s2(), tlt::make_s3(),
                                         tlt::make_s4()};
  for (size_t fi = 0; fi < fixtures.size(); ++fi) {
    CAPTURE(fi);
    const tl::DynSystem& sys = fixtures[fi];
    const tl::Target target = tl::crossed_product_target(sys);
    CHECK(target.rep.side == sys.group.order * sys.dim_h());
    CHECK(target.span.rank() == tl::cp_dim(sys));

    tl::Rng rng(5 + static_cast<std::uint64_t>(fi));
    for (int trial = 0; trial < 3; ++trial) {
      const CPElement f = tl::random_cp(sys, rng);
      CHECK((tl::rep_apply(sys, target.rep, f) - tl::regular_rep(sys, f)).norm() <= 1e-12);
    }
  }
  CHECK(s5_crossed().span.rank() == tl::cp_dim(s5_sys()));
  tl::Rng rng(99);
  const CPElement f = tl::random_cp(s5_sys(), rng);
  CHECK((tl::rep_apply(s5_sys(), s5_crossed().rep, f) - tl::regular_rep(s5_sys(), f)).norm() <=
        1e-12);
}

TEST_CASE("image algebra target models the defining representation") {
  struct Expected {
    tl::DynSystem sys;
    int rank;
  };
  std::vector<Expected> table;
  table.push_back({tlt::make_s1(), 9});
  table.push_back({tlt::make_s2(), 1});
  table.push_back({tlt::make_s3(), 5});
  table.push_back({tlt::make_s3_minus(), 5});
  table.push_back({tlt::make_s4(), 4});

  for (size_t i = 0; i < table.size(); ++i) {
    CAPTURE(i);
    const tl::Target target = tl::image_algebra_target(table[i].sys);
    CHECK(target.rep.side == table[i].sys.dim_h());
    CHECK(target.span.rank() == table[i].rank);

    tl::Rng rng(17 + static_cast<std::uint64_t>(i));
    const CPElement f = tl::random_cp(table[i].sys, rng);
    CHECK((tl::rep_apply(table[i].sys, target.rep, f) - tl::phi(table[i].sys, f)).norm() <=
          1e-12);
  }
  CHECK(s5_image().span.rank() == 64);
}

TEST_CASE("the full trajectory family earns every verdict") {
  std::vector<tl::DynSystem> fixtures = {tlt::make_s1(), tlt::make_s2(), tlt::make_s3(),
                                         tlt::make_s3_minus(), tlt::make_s4()};
  for (size_t fi = 0; fi < fixtures.size(); ++fi) {
    CAPTURE(fi);
    const tl::DynSystem& sys = fixtures[fi];
    std::vector<tl::LinearRep> family;
    for (const tl::OrbitRep& rep : tl::orbit_reps(sys))
      family.push_back(tl::rep_from_orbit(sys, rep));
    const tl::Target target = tl::crossed_product_target(sys);

    const tl::FamilyVerdict v = tl::family_verdicts(sys, family, target);
    CHECK(v.faithful);
    CHECK(v.strictly_norming);
    CHECK(v.exhaustive);
    CHECK(v.sufficient);
    CHECK(!v.faithful_witness.has_value());
    CHECK(!v.norming_witness.has_value());
    CHECK(!v.uncovered_block.has_value());
    CHECK(!v.transfer_witness.has_value());
    CHECK(!v.note.empty());

    // Implication chain, checked on the outputs.
    CHECK((!v.exhaustive || v.strictly_norming));
    CHECK((!v.strictly_norming || v.faithful));
    // The three notions coincide on finite systems.
    CHECK(v.faithful == v.strictly_norming);
    CHECK(v.strictly_norming == v.exhaustive);
  }

  std::vector<tl::LinearRep> family5 = {
      tl::rep_from_orbit(s5_sys(), tl::orbit_reps(s5_sys())[0])};
  const tl::FamilyVerdict v5 = tl::family_verdicts(s5_sys(), family5, s5_crossed());
  CHECK(v5.faithful);
  CHECK(v5.strictly_norming);
  CHECK(v5.exhaustive);
  CHECK(v5.sufficient);
}

TEST_CASE("dropping the fixed point orbit flips every verdict") {
  const tl::DynSystem sys = tlt::make_s3();
  const auto reps = tl::orbit_reps(sys);
  std::vector<tl::LinearRep> family = {tl::rep_from_orbit(sys, reps[0])};
  const tl::Target target = tl::crossed_product_target(sys);

  const tl::FamilyVerdict v = tl::family_verdicts(sys, family, target);
  CHECK(!v.faithful);
  CHECK(!v.strictly_norming);
  CHECK(!v.exhaustive);
  CHECK(!v.sufficient);
  CHECK(v.faithful == v.strictly_norming);
  CHECK(v.strictly_norming == v.exhaustive);

  // The common kernel witness is killed by the family but visible in the
  // target, and it lives over the dropped fixed point.
  REQUIRE(v.faithful_witness.has_value());
  const CPElement& w = *v.faithful_witness;
  CHECK(tl::operator_norm(tl::regular_rep(sys, w)) > 0.1);
  CHECK(tl::operator_norm(tl::pi_omega(sys, reps[0], w)) <= 1e-8);
  for (int s = 0; s < sys.group.order; ++s) {
    CHECK(std::abs(w.coeff[s].value[0](0, 0)) <= 1e-10);
    CHECK(std::abs(w.coeff[s].value[1](0, 0)) <= 1e-10);
  }

  // The norming gap is the full norm of a dropped coordinate.
  REQUIRE(v.norming_witness.has_value());
  CHECK(v.norming_gap > 0.5);

  // The uncovered block is one of the characters of the fixed point.
  REQUIRE(v.uncovered_block.has_value());
  const tl::WedderburnData wd = tl::wedderburn(target.span);
  CHECK(wd.block_dims[*v.uncovered_block] == 1);

  // The transfer witness really disagrees: singular in the target, regular
  // for every member.
  REQUIRE(v.transfer_witness.has_value());
  const Matrix tm = tl::regular_rep(sys, *v.transfer_witness);
  CHECK(tl::min_singular(tm) <= 1e-8 * tl::operator_norm(tm));
  const Matrix pm = tl::pi_omega(sys, reps[0], *v.transfer_witness);
  CHECK(tl::min_singular(pm) > 1e-8 * tl::operator_norm(pm));
}

TEST_CASE("dropping an orbit flips the verdicts of the sign variant too") {
  const tl::DynSystem sys = tlt::make_s3_minus();
  const auto reps = tl::orbit_reps(sys);
  std::vector<tl::LinearRep> family = {tl::rep_from_orbit(sys, reps[0])};
  tl::FamilyOptions opts;
  opts.norming_samples = 20;
  opts.transfer_samples = 50;
  const tl::FamilyVerdict v =
      tl::family_verdicts(sys, family, tl::crossed_product_target(sys), opts);
  CHECK(!v.faithful);
  CHECK(!v.strictly_norming);
  CHECK(!v.exhaustive);
  CHECK(!v.sufficient);
}

TEST_CASE("family verdicts against the image algebra target") {
  // On a system with an isomorphic image model the full family passes.
  const tl::DynSystem s1 = tlt::make_s1();
  std::vector<tl::LinearRep> family1;
  for (const tl::OrbitRep& rep : tl::orbit_reps(s1)) family1.push_back(tl::rep_from_orbit(s1, rep));
  const tl::FamilyVerdict v1 = tl::family_verdicts(s1, family1, tl::image_algebra_target(s1));
  CHECK(v1.faithful);
  CHECK(v1.strictly_norming);
  CHECK(v1.exhaustive);
  CHECK(v1.sufficient);

  // The moving-pair representation factors through the image model of the
  // two-orbit system, but misses the character block of the fixed point.
  const tl::DynSystem s3 = tlt::make_s3();
  const auto reps = tl::orbit_reps(s3);
  std::vector<tl::LinearRep> family3 = {tl::rep_from_orbit(s3, reps[0])};
  const tl::Target image = tl::image_algebra_target(s3);
  const tl::FamilyVerdict v3 = tl::family_verdicts(s3, family3, image);
  CHECK(!v3.faithful);
  CHECK(!v3.exhaustive);
  REQUIRE(v3.uncovered_block.has_value());
  const tl::WedderburnData wd = tl::wedderburn(image.span);
  CHECK(wd.block_dims[*v3.uncovered_block] == 1);

  // The fixed point representation does not factor through the image model:
  // it separates elements the defining representation cancels.
  std::vector<tl::LinearRep> bad = {tl::rep_from_orbit(s3, reps[1])};
  CHECK_THROWS_AS(tl::family_verdicts(s3, bad, image), tl::precondition_error);
}

TEST_CASE("family preconditions reject broken members") {
  const tl::DynSystem sys = tlt::make_s3();
  const auto reps = tl::orbit_reps(sys);
  const tl::Target target = tl::crossed_product_target(sys);

  CHECK_THROWS_AS(tl::family_verdicts(sys, {}, target), tl::precondition_error);

  // Doubling the images breaks the unit law.
  tl::LinearRep doubled = tl::rep_from_orbit(sys, reps[0]);
  for (Matrix& m : doubled.images) m *= 2.0;
  CHECK_THROWS_AS(tl::family_verdicts(sys, {doubled}, target), tl::precondition_error);

  // Zeroing one coordinate image breaks the product law.
  tl::LinearRep chopped = tl::rep_from_orbit(sys, reps[0]);
  chopped.images[1] = Matrix::Zero(chopped.side, chopped.side);
  CHECK_THROWS_AS(tl::family_verdicts(sys, {chopped}, target), tl::precondition_error);

  // Wrong coordinate layout.
  tl::LinearRep short_rep = tl::rep_from_orbit(sys, reps[0]);
  short_rep.images.pop_back();
  CHECK_THROWS_AS(tl::family_verdicts(sys, {short_rep}, target), tl::precondition_error);

  tl::FamilyOptions negative;
  negative.transfer_samples = -1;
  std::vector<tl::LinearRep> family = {tl::rep_from_orbit(sys, reps[0]),
                                       tl::rep_from_orbit(sys, reps[1])};
  CHECK_THROWS_AS(tl::family_verdicts(sys, family, target, negative), tl::precondition_error);
}

TEST_CASE("family verdicts are deterministic and seed-stable") {
  const tl::DynSystem sys = tlt::make_s3();
  const auto reps = tl::orbit_reps(sys);
  std::vector<tl::LinearRep> family = {tl::rep_from_orbit(sys, reps[0])};
  const tl::Target target = tl::crossed_product_target(sys);

  const tl::FamilyVerdict a = tl::family_verdicts(sys, family, target);
  const tl::FamilyVerdict b = tl::family_verdicts(sys, family, target);
  CHECK(a.faithful == b.faithful);
  CHECK(a.strictly_norming == b.strictly_norming);
  CHECK(a.exhaustive == b.exhaustive);
  CHECK(a.sufficient == b.sufficient);
  CHECK(a.norming_gap == b.norming_gap);
  CHECK(a.note == b.note);
  REQUIRE(a.faithful_witness.has_value());
  REQUIRE(b.faithful_witness.has_value());
  CHECK((tl::cp_to_vec(sys, *a.faithful_witness) - tl::cp_to_vec(sys, *b.faithful_witness))
            .norm() == 0.0);
  REQUIRE(a.transfer_witness.has_value());
  REQUIRE(b.transfer_witness.has_value());
  CHECK((tl::cp_to_vec(sys, *a.transfer_witness) - tl::cp_to_vec(sys, *b.transfer_witness))
            .norm() == 0.0);

  // Verdicts do not depend on the sampling seed.
  tl::FamilyOptions other;
  other.seed = 991;
  const tl::FamilyVerdict c = tl::family_verdicts(sys, family, target, other);
  CHECK(c.faithful == a.faithful);
  CHECK(c.strictly_norming == a.strictly_norming);
  CHECK(c.exhaustive == a.exhaustive);
  CHECK(c.sufficient == a.sufficient);
}

TEST_CASE("orbit closure check holds with an explanatory note") {
  for (const tl::DynSystem& sys : tlt::all_fixtures()) {
    for (const tl::OrbitRep& rep : tl::orbit_reps(sys)) {
      const tl::OrbitClosureCheck check = tl::karideals_check(sys, rep);
      CHECK(check.holds);
      CHECK(check.note.find("closed") != std::string::npos);
    }
  }

  const tl::DynSystem sys = tlt::make_s1();
  tl::OrbitRep bogus;
  bogus.base_block = 99;
  bogus.orbit = {99};
  CHECK_THROWS_AS(tl::karideals_check(sys, bogus), tl::precondition_error);

  tl::DynSystem raw;
  tl::OrbitRep rep = tl::orbit_reps(sys)[0];
  CHECK_THROWS_AS(tl::karideals_check(raw, rep), tl::precondition_error);
}
