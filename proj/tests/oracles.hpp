#pragma once

// Deliberately naive reference implementations, kept independent of the
// library's optimized code paths. These are the oracles the test suite and
// the acceptance checks compare against.

#include <algorithm>
#include <vector>

#include "rubin/finite_group.hpp"
#include "rubin/perm.hpp"

namespace rubin::oracle {

/// Quadruple loop straight from the definition: h, b, a all range over the
/// whole group, with centralizer membership tested inline.
inline bool naive_is_algebraically_disjoint(const FiniteGroup& G, const Perm& g, const Perm& f) {
  for (const Perm& h : G.elements()) {
    if (commutator(f, h).is_identity()) continue;
    bool witnessed = false;
    for (const Perm& a : G.elements()) {
      if (!commutator(a, g).is_identity()) continue;
      for (const Perm& b : G.elements()) {
        if (!commutator(b, g).is_identity()) continue;
        Perm c = commutator(a, commutator(b, h));
        if (!c.is_identity() && commutator(c, g).is_identity()) {
          witnessed = true;
          break;
        }
      }
      if (witnessed) break;
    }
    if (!witnessed) return false;
  }
  return true;
}

/// Inclusion order recomputed from scratch over materialized node sets.
inline bool naive_subset(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  for (uint32_t x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) return false;
  return true;
}

}  // namespace rubin::oracle
