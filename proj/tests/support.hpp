#ifndef TL_TESTS_SUPPORT_HPP
#define TL_TESTS_SUPPORT_HPP

#include <vector>

#include "tl/dynamics.hpp"

// Reference systems used across the test suite. These mirror the shipped
// fixture files; io_test checks that the parsed files agree with them.
namespace tlt {

// Cyclic order 3 shifting 3 points, scalar fibers, singleton blocks.
inline tl::DynSystem make_s1() {
  tl::DynSystem sys;
  sys.group = tl::cyclic_group(3);
  sys.points = 3;
  sys.fiber_dim = 1;
  sys.sigma.assign(3, std::vector<int>(3));
  for (int g = 0; g < 3; ++g)
    for (int x = 0; x < 3; ++x) sys.sigma[g][x] = (x + g) % 3;
  sys.cocycle.assign(3, std::vector<tl::Matrix>(3, tl::Matrix::Identity(1, 1)));
  sys.blocks = {{0}, {1}, {2}};
  return tl::validate(sys);
}

// Order-2 group acting trivially on a single point.
inline tl::DynSystem make_s2() {
  tl::DynSystem sys;
  sys.group = tl::cyclic_group(2);
  sys.points = 1;
  sys.fiber_dim = 1;
  sys.sigma.assign(2, std::vector<int>(1, 0));
  sys.cocycle.assign(2, std::vector<tl::Matrix>(1, tl::Matrix::Identity(1, 1)));
  sys.blocks = {{0}};
  return tl::validate(sys);
}

// Order-2 group swapping points 0,1 and fixing 2; the sign at the fixed
// point selects the cocycle variant.
inline tl::DynSystem make_s3(double sign_at_fixed_point = 1.0) {
  tl::DynSystem sys;
  sys.group = tl::cyclic_group(2);
  sys.points = 3;
  sys.fiber_dim = 1;
  sys.sigma = {{0, 1, 2}, {1, 0, 2}};
  sys.cocycle.assign(2, std::vector<tl::Matrix>(3, tl::Matrix::Identity(1, 1)));
  sys.cocycle[1][2](0, 0) = sign_at_fixed_point;
  sys.blocks = {{0}, {1}, {2}};
  return tl::validate(sys);
}

inline tl::DynSystem make_s3_minus() { return make_s3(-1.0); }

// Order-2 group swapping two points that share one block, so the induced
// block action is trivial while the point action is free.
inline tl::DynSystem make_s4() {
  tl::DynSystem sys;
  sys.group = tl::cyclic_group(2);
  sys.points = 2;
  sys.fiber_dim = 1;
  sys.sigma = {{0, 1}, {1, 0}};
  sys.cocycle.assign(2, std::vector<tl::Matrix>(2, tl::Matrix::Identity(1, 1)));
  sys.blocks = {{0, 1}};
  return tl::validate(sys);
}

// Cyclic order 4 shifting 4 points with 2-dimensional fibers and a
// nonscalar cocycle built from one unitary per point.
inline tl::DynSystem make_s5() {
  using tl::Complex;
  tl::DynSystem sys;
  sys.group = tl::cyclic_group(4);
  sys.points = 4;
  sys.fiber_dim = 2;
  sys.sigma.assign(4, std::vector<int>(4));
  for (int g = 0; g < 4; ++g)
    for (int x = 0; x < 4; ++x) sys.sigma[g][x] = (x + g) % 4;

  const Complex i(0.0, 1.0);
  std::vector<tl::Matrix> w(4, tl::Matrix::Zero(2, 2));
  w[0] << i, 0, 0, 1;
  w[1] << 0, 1, 1, 0;
  w[2] << 1, 0, 0, i;
  w[3] << 0, -1, 1, 0;

  sys.cocycle.assign(4, std::vector<tl::Matrix>(4, tl::Matrix::Identity(2, 2)));
  for (int k = 1; k < 4; ++k)
    for (int x = 0; x < 4; ++x) {
      tl::Matrix v = tl::Matrix::Identity(2, 2);
      for (int step = 0; step < k; ++step) v = v * w[((x - step) % 4 + 4) % 4];
      sys.cocycle[k][x] = v;
    }
  sys.blocks = {{0}, {1}, {2}, {3}};
  return tl::validate(sys);
}

inline std::vector<tl::DynSystem> all_fixtures() {
  return {make_s1(), make_s2(), make_s3(), make_s3_minus(), make_s4(), make_s5()};
}

}  // namespace tlt

#endif  // TL_TESTS_SUPPORT_HPP
