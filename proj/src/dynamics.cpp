#include "tl/dynamics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace tl {

namespace {

std::string fmt(const char* pattern, int a, int b = 0, int c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

bool is_permutation_of_range(const std::vector<int>& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : p) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

}  // namespace

FiniteGroup cyclic_group(int n) {
  if (n < 1) throw precondition_error("cyclic_group: order must be positive");
  FiniteGroup g;
  g.order = n;
  g.identity = 0;
  g.cayley.assign(n, std::vector<int>(n));
  g.inverse.resize(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) g.cayley[a][b] = (a + b) % n;
    g.inverse[a] = (n - a) % n;
  }
  return g;
}

std::vector<std::string> group_issues(const std::vector<std::vector<int>>& cayley) {
  std::vector<std::string> issues;
  const int n = static_cast<int>(cayley.size());
  if (n == 0) {
    issues.push_back("multiplication table is empty");
    return issues;
  }
  for (int g = 0; g < n; ++g) {
    if (static_cast<int>(cayley[g].size()) != n) {
      issues.push_back(fmt("row %d of the multiplication table has the wrong length", g));
      return issues;
    }
    for (int h = 0; h < n; ++h) {
      if (cayley[g][h] < 0 || cayley[g][h] >= n) {
        issues.push_back(fmt("entry (%d,%d) of the multiplication table is out of range", g, h));
        return issues;
      }
    }
  }
  // Rows and columns must be permutations (cancellation).
  for (int g = 0; g < n; ++g) {
    if (!is_permutation_of_range(cayley[g], n)) {
      issues.push_back(fmt("row %d of the multiplication table is not a permutation", g));
      break;
    }
  }
  for (int h = 0; h < n; ++h) {
    std::vector<int> col(n);
    for (int g = 0; g < n; ++g) col[g] = cayley[g][h];
    if (!is_permutation_of_range(col, n)) {
      issues.push_back(fmt("column %d of the multiplication table is not a permutation", h));
      break;
    }
  }
  int identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g)
      ok = cayley[e][g] == g && cayley[g][e] == g;
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0) issues.push_back("no two-sided identity element");
  if (identity >= 0) {
    for (int g = 0; g < n; ++g) {
      bool found = false;
      for (int h = 0; h < n && !found; ++h)
        found = cayley[g][h] == identity && cayley[h][g] == identity;
      if (!found) {
        issues.push_back(fmt("element %d has no two-sided inverse", g));
        break;
      }
    }
  }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        if (cayley[cayley[g][h]][k] != cayley[g][cayley[h][k]]) {
          issues.push_back(fmt("associativity fails at (%d,%d,%d)", g, h, k));
          return issues;
        }
  return issues;
}

FiniteGroup group_from_table(const std::vector<std::vector<int>>& cayley) {
  auto issues = group_issues(cayley);
  if (!issues.empty()) {
    std::ostringstream msg;
    msg << "not a group:";
    for (const auto& s : issues) msg << " " << s << ";";
    throw precondition_error(msg.str());
  }
  FiniteGroup g;
  g.order = static_cast<int>(cayley.size());
  g.cayley = cayley;
  for (int e = 0; e < g.order; ++e) {
    bool ok = true;
    for (int h = 0; h < g.order && ok; ++h)
      ok = cayley[e][h] == h && cayley[h][e] == h;
    if (ok) {
      g.identity = e;
      break;
    }
  }
  g.inverse.resize(g.order);
  for (int a = 0; a < g.order; ++a)
    for (int h = 0; h < g.order; ++h)
      if (cayley[a][h] == g.identity && cayley[h][a] == g.identity) {
        g.inverse[a] = h;
        break;
      }
  return g;
}

FiniteGroup group_from_permutations(int letters,
                                    const std::vector<std::vector<int>>& generators,
                                    std::vector<std::vector<int>>* element_perms) {
  if (letters < 1) throw precondition_error("group_from_permutations: need at least one letter");
  for (size_t i = 0; i < generators.size(); ++i)
    if (!is_permutation_of_range(generators[i], letters))
      throw precondition_error(fmt("generator %d is not a permutation of the letters",
                                   static_cast<int>(i)));

  std::vector<int> id(letters);
  std::iota(id.begin(), id.end(), 0);

  std::vector<std::vector<int>> elems = {id};
  std::map<std::vector<int>, int> index = {{id, 0}};
  std::queue<int> todo;
  todo.push(0);
  while (!todo.empty()) {
    const int cur = todo.front();
    todo.pop();
    for (const auto& gen : generators) {
      std::vector<int> next(letters);
      for (int x = 0; x < letters; ++x) next[x] = gen[elems[cur][x]];
      if (index.emplace(next, static_cast<int>(elems.size())).second) {
        elems.push_back(next);
        todo.push(static_cast<int>(elems.size()) - 1);
      }
    }
  }

  const int n = static_cast<int>(elems.size());
  FiniteGroup g;
  g.order = n;
  g.identity = 0;
  g.cayley.assign(n, std::vector<int>(n));
  g.inverse.resize(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> prod(letters);
      for (int x = 0; x < letters; ++x) prod[x] = elems[a][elems[b][x]];
      g.cayley[a][b] = index.at(prod);
      if (g.cayley[a][b] == 0) g.inverse[a] = b;
    }
  if (element_perms) *element_perms = elems;
  return g;
}

std::vector<std::string> system_issues(const DynSystem& sys) {
  std::vector<std::string> issues = group_issues(sys.group.cayley);
  const int n = sys.group.order;
  if (n != static_cast<int>(sys.group.cayley.size()))
    issues.push_back("group order disagrees with the table size");
  if (sys.points < 1) issues.push_back("point set is empty");
  if (sys.fiber_dim < 1) issues.push_back("fiber dimension must be at least 1");
  if (!sys.tol.valid()) issues.push_back("tolerances must be positive");
  if (!issues.empty()) return issues;

  const FiniteGroup& grp = sys.group;
  if (grp.identity < 0 || grp.identity >= n ||
      static_cast<int>(grp.inverse.size()) != n) {
    issues.push_back("group identity or inverse table inconsistent");
    return issues;
  }

  // Shapes first; semantic checks index into these tables.
  if (static_cast<int>(sys.sigma.size()) != n) {
    issues.push_back("action table must have one row per group element");
    return issues;
  }
  for (int g = 0; g < n; ++g) {
    if (static_cast<int>(sys.sigma[g].size()) != sys.points) {
      issues.push_back(fmt("action row %d has the wrong length", g));
      return issues;
    }
    for (int x = 0; x < sys.points; ++x)
      if (sys.sigma[g][x] < 0 || sys.sigma[g][x] >= sys.points) {
        issues.push_back(fmt("action entry (%d,%d) is out of range", g, x));
        return issues;
      }
  }
  if (static_cast<int>(sys.cocycle.size()) != n) {
    issues.push_back("cocycle table must have one row per group element");
    return issues;
  }
  for (int g = 0; g < n; ++g) {
    if (static_cast<int>(sys.cocycle[g].size()) != sys.points) {
      issues.push_back(fmt("cocycle row %d has the wrong length", g));
      return issues;
    }
    for (int x = 0; x < sys.points; ++x) {
      const Matrix& v = sys.cocycle[g][x];
      if (v.rows() != sys.fiber_dim || v.cols() != sys.fiber_dim) {
        issues.push_back(fmt("cocycle matrix (%d,%d) has the wrong shape", g, x));
        return issues;
      }
    }
  }
  if (sys.blocks.empty()) {
    issues.push_back("z-partition has no blocks");
    return issues;
  }
  {
    std::vector<int> owner(sys.points, -1);
    for (size_t m = 0; m < sys.blocks.size(); ++m) {
      if (sys.blocks[m].empty()) {
        issues.push_back(fmt("block %d is empty", static_cast<int>(m)));
        return issues;
      }
      for (int x : sys.blocks[m]) {
        if (x < 0 || x >= sys.points) {
          issues.push_back(fmt("block %d mentions a point out of range", static_cast<int>(m)));
          return issues;
        }
        if (owner[x] >= 0) {
          issues.push_back(fmt("point %d appears in blocks %d and %d", x, owner[x],
                               static_cast<int>(m)));
          return issues;
        }
        owner[x] = static_cast<int>(m);
      }
    }
    for (int x = 0; x < sys.points; ++x)
      if (owner[x] < 0) {
        issues.push_back(fmt("point %d belongs to no block", x));
        return issues;
      }
  }

  const int e = grp.identity;
  for (int x = 0; x < sys.points; ++x)
    if (sys.sigma[e][x] != x) {
      issues.push_back(fmt("identity acts nontrivially at point %d", x));
      break;
    }
  for (int g = 0; g < n; ++g) {
    std::vector<char> hit(sys.points, 0);
    for (int x = 0; x < sys.points; ++x) hit[sys.sigma[g][x]] = 1;
    for (int y = 0; y < sys.points; ++y)
      if (!hit[y]) {
        issues.push_back(fmt("element %d does not act bijectively (point %d missed)", g, y));
        g = n;
        break;
      }
  }
  bool action_ok = true;
  for (int g = 0; g < n && action_ok; ++g)
    for (int h = 0; h < n && action_ok; ++h)
      for (int x = 0; x < sys.points; ++x)
        if (sys.sigma[grp.mul(g, h)][x] != sys.sigma[g][sys.sigma[h][x]]) {
          issues.push_back(fmt("action fails composition at (g=%d,h=%d,x=%d)", g, h, x));
          action_ok = false;
          break;
        }

  const Matrix eye = Matrix::Identity(sys.fiber_dim, sys.fiber_dim);
  for (int x = 0; x < sys.points; ++x)
    if ((sys.cocycle[e][x] - eye).norm() > sys.tol.norm_tol) {
      issues.push_back(fmt("cocycle at the identity is not I at point %d", x));
      break;
    }
  for (int g = 0; g < n; ++g) {
    bool bad = false;
    for (int x = 0; x < sys.points; ++x) {
      const Matrix& v = sys.cocycle[g][x];
      if ((v.adjoint() * v - eye).norm() > sys.tol.norm_tol) {
        issues.push_back(fmt("cocycle matrix (%d,%d) is not unitary", g, x));
        bad = true;
        break;
      }
    }
    if (bad) break;
  }
  if (action_ok) {
    bool cocycle_ok = true;
    for (int g = 0; g < n && cocycle_ok; ++g)
      for (int h = 0; h < n && cocycle_ok; ++h)
        for (int x = 0; x < sys.points; ++x) {
          const Matrix lhs = sys.cocycle[grp.mul(g, h)][x];
          const Matrix rhs = sys.cocycle[g][x] * sys.cocycle[h][sys.sigma[grp.inv(g)][x]];
          if ((lhs - rhs).norm() > sys.tol.norm_tol) {
            issues.push_back(fmt("cocycle identity fails at (g=%d,h=%d,x=%d)", g, h, x));
            cocycle_ok = false;
            break;
          }
        }
  }

  // (A1): the action permutes the blocks of the z-partition.
  if (action_ok) {
    std::vector<int> owner(sys.points);
    for (size_t m = 0; m < sys.blocks.size(); ++m)
      for (int x : sys.blocks[m]) owner[x] = static_cast<int>(m);
    for (int g = 0; g < n; ++g) {
      bool bad = false;
      for (size_t m = 0; m < sys.blocks.size() && !bad; ++m) {
        const int first = owner[sys.sigma[g][sys.blocks[m][0]]];
        for (int x : sys.blocks[m])
          if (owner[sys.sigma[g][x]] != first) {
            issues.push_back(fmt("element %d splits block %d across blocks", g,
                                 static_cast<int>(m)));
            bad = true;
            break;
          }
      }
      if (bad) break;
    }
  }
  return issues;
}

DynSystem validate(DynSystem sys) {
  // Canonical block order: points ascending inside, blocks by first point.
  for (auto& b : sys.blocks) std::sort(b.begin(), b.end());
  std::sort(sys.blocks.begin(), sys.blocks.end());

  auto issues = system_issues(sys);
  if (!issues.empty()) {
    std::ostringstream msg;
    msg << "invalid system:";
    for (const auto& s : issues) msg << "\n  - " << s;
    throw validation_error(msg.str());
  }

  sys.block_of.assign(sys.points, -1);
  for (size_t m = 0; m < sys.blocks.size(); ++m)
    for (int x : sys.blocks[m]) sys.block_of[x] = static_cast<int>(m);

  const int n = sys.group.order;
  const int nb = sys.num_blocks();
  sys.beta_table.assign(n, std::vector<int>(nb));
  for (int g = 0; g < n; ++g) {
    const int ginv = sys.group.inv(g);
    for (int m = 0; m < nb; ++m)
      sys.beta_table[g][m] = sys.block_of[sys.sigma[ginv][sys.blocks[m][0]]];
  }
  sys.validated = true;
  return sys;
}

OrbitList orbits(const DynSystem& sys) {
  if (!sys.validated) throw precondition_error("orbits: system not validated");
  OrbitList out;
  const int nb = sys.num_blocks();
  out.orbit_of.assign(nb, -1);
  for (int m = 0; m < nb; ++m) {
    if (out.orbit_of[m] >= 0) continue;
    std::vector<int> orbit;
    for (int g = 0; g < sys.group.order; ++g) {
      const int im = sys.beta(g, m);
      if (out.orbit_of[im] < 0) {
        out.orbit_of[im] = static_cast<int>(out.orbits.size());
        orbit.push_back(im);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.base_block.push_back(orbit.front());
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

std::vector<int> fixed_blocks(const DynSystem& sys, int g) {
  if (!sys.validated) throw precondition_error("fixed_blocks: system not validated");
  if (g < 0 || g >= sys.group.order) throw precondition_error("fixed_blocks: no such element");
  std::vector<int> out;
  for (int m = 0; m < sys.num_blocks(); ++m)
    if (sys.beta(g, m) == m) out.push_back(m);
  return out;
}

bool check_A3(const DynSystem& sys) {
  if (!sys.validated) throw precondition_error("check_A3: system not validated");
  for (int g = 0; g < sys.group.order; ++g) {
    if (g == sys.group.identity) continue;
    if (!fixed_blocks(sys, g).empty()) return false;
  }
  return true;
}

FixedPointPartition fixed_point_partition(const DynSystem& sys,
                                          std::vector<int> g0,
                                          const std::vector<int>& v) {
  if (!sys.validated) throw precondition_error("fixed_point_partition: system not validated");

  FixedPointPartition out;
  out.delta = v;
  std::sort(out.delta.begin(), out.delta.end());
  out.delta.erase(std::unique(out.delta.begin(), out.delta.end()), out.delta.end());
  if (out.delta.empty()) throw precondition_error("fixed_point_partition: V is empty");
  for (int m : out.delta)
    if (m < 0 || m >= sys.num_blocks())
      throw precondition_error("fixed_point_partition: V mentions an unknown block");

  std::sort(g0.begin(), g0.end());
  g0.erase(std::unique(g0.begin(), g0.end()), g0.end());
  for (int g : g0)
    if (g < 0 || g >= sys.group.order)
      throw precondition_error("fixed_point_partition: G0 mentions an unknown element");
  {
    const size_t before = g0.size();
    std::vector<int> sym = g0;
    for (int g : g0) sym.push_back(sys.group.inv(g));
    std::sort(sym.begin(), sym.end());
    sym.erase(std::unique(sym.begin(), sym.end()), sym.end());
    out.symmetrized = sym.size() != before;
    g0 = std::move(sym);
  }

  for (int g : g0) {
    bool fixes_all = true;
    for (int m : out.delta)
      if (sys.beta(g, m) != m) {
        fixes_all = false;
        break;
      }
    if (fixes_all) {
      out.d_tilde.push_back(g);
      continue;
    }
    // Earliest-index greedy subset with beta_g(delta) disjoint from delta.
    std::vector<int> next;
    for (int m : out.delta) {
      const int im = sys.beta(g, m);
      if (im == m) continue;
      bool clash = std::binary_search(next.begin(), next.end(), im);
      for (int prev : next)
        if (!clash && sys.beta(g, prev) == m) clash = true;
      if (!clash) next.push_back(m);
    }
    out.delta = std::move(next);
    out.d_zero.push_back(g);
  }
  return out;
}

}  // namespace tl
