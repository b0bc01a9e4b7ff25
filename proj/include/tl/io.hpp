#ifndef TL_IO_HPP
#define TL_IO_HPP

#include <string>

#include "tl/algebra.hpp"
#include "tl/dynamics.hpp"

namespace tl {

// System description documents are structured text with the fields
//   group:        {kind: "cyclic", n} | {kind: "permutation-generators",
//                 letters, generators} | {kind: "cayley", table}
//   points:       number of points
//   action:       {kind: "table", table} | {kind: "generators", images}
//                 | {kind: "natural"}
//   fiber_dim:    optional, default 1
//   cocycle:      optional [g][x] table of N x N matrices as [re, im]
//                 pairs, default trivial
//   z_partition:  optional list of blocks, default singletons
//   tolerances:   optional {rank_tol, invert_tol, norm_tol} overrides
// Malformed documents raise parse_error naming the offending field.
// The raw variants skip validation so defective systems can still be
// inspected; the plain variants return a validated system or throw
// validation_error.
DynSystem parse_system_raw(const std::string& text);
DynSystem parse_system(const std::string& text);
DynSystem load_system_raw(const std::string& path);
DynSystem load_system(const std::string& path);

// Canonical serialization: explicit multiplication table, action table,
// cocycle and partition, fixed key order. Parsing the output reproduces
// every field of the system exactly.
std::string serialize_system(const DynSystem& sys);

// FNV-1a over the canonical serialization, as 16 hex digits.
std::string system_digest(const DynSystem& sys);

// Element documents carry one block function per group element:
//   coefficients: [g][x] table of N x N matrices as [re, im] pairs.
CPElement parse_element(const DynSystem& sys, const std::string& text);
CPElement load_element(const DynSystem& sys, const std::string& path);
std::string serialize_element(const DynSystem& sys, const CPElement& f);

}  // namespace tl

#endif  // TL_IO_HPP
