#ifndef TL_DYNAMICS_HPP
#define TL_DYNAMICS_HPP

#include <string>
#include <vector>

#include "tl/types.hpp"

namespace tl {

struct FiniteGroup {
  int order = 0;
  std::vector<std::vector<int>> cayley;  // cayley[g][h] = g*h
  int identity = 0;
  std::vector<int> inverse;

  int mul(int g, int h) const { return cayley[g][h]; }
  int inv(int g) const { return inverse[g]; }
};

FiniteGroup cyclic_group(int n);

// Witnessed defects of a multiplication table (empty means it is a group).
std::vector<std::string> group_issues(const std::vector<std::vector<int>>& cayley);
FiniteGroup group_from_table(const std::vector<std::vector<int>>& cayley);

// Closure of permutation generators on {0..letters-1} under composition,
// breadth-first from the identity (element 0). When element_perms is non-null
// it receives the permutation realized by each element, in element order.
FiniteGroup group_from_permutations(int letters,
                                    const std::vector<std::vector<int>>& generators,
                                    std::vector<std::vector<int>>* element_perms = nullptr);

struct DynSystem {
  FiniteGroup group;
  int points = 0;
  int fiber_dim = 1;
  std::vector<std::vector<int>> sigma;       // sigma[g][x], a left action
  std::vector<std::vector<Matrix>> cocycle;  // cocycle[g][x], unitary N x N
  std::vector<std::vector<int>> blocks;      // z-partition of the point set
  Tolerances tol;

  // populated by validate()
  std::vector<int> block_of;                 // x -> block index
  std::vector<std::vector<int>> beta_table;  // beta_table[g][m], right action on blocks
  bool validated = false;

  int dim_h() const { return points * fiber_dim; }
  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int act(int g, int x) const { return sigma[g][x]; }
  int beta(int g, int m) const { return beta_table[g][m]; }
};

// Witnessed defects of a raw system description (empty means valid).
std::vector<std::string> system_issues(const DynSystem& sys);

// Checks every invariant and fills in the derived fields, or throws
// validation_error listing each violation with its witness.
DynSystem validate(DynSystem sys);

struct OrbitList {
  std::vector<std::vector<int>> orbits;  // ascending block indices, ordered by base
  std::vector<int> base_block;           // smallest block of each orbit
  std::vector<int> orbit_of;             // block -> orbit index
};

OrbitList orbits(const DynSystem& sys);

// Blocks m with beta_g(m) = m, ascending.
std::vector<int> fixed_blocks(const DynSystem& sys, int g);

// Freeness of beta: no nontrivial element fixes any block. On a finite block
// space every singleton is open, so topological freeness reduces to this.
bool check_A3(const DynSystem& sys);

struct FixedPointPartition {
  std::vector<int> delta;    // nonempty subset of V
  std::vector<int> d_tilde;  // elements fixing every block of delta
  std::vector<int> d_zero;   // elements moving delta wholly off itself
  bool symmetrized = false;  // g0 had to be closed under inverses first
};

// Shrinks V to a nonempty delta on which every g in g0 either fixes all
// blocks or moves delta entirely off itself. Scans g0 ascending; on a moving
// element keeps the greedy earliest-index subset of delta with
// beta_g(delta) and delta disjoint.
FixedPointPartition fixed_point_partition(const DynSystem& sys,
                                          std::vector<int> g0,
                                          const std::vector<int>& v);

}  // namespace tl

#endif  // TL_DYNAMICS_HPP
