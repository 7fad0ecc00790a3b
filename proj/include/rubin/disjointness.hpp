#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rubin/finite_group.hpp"
#include "rubin/perm.hpp"

namespace rubin {

/// g is algebraically disjoint from f when for every h with [f,h] != 1 there
/// are a,b in C(g) such that [a,[b,h]] is non-trivial and lies in C(g).
/// Quantifiers are evaluated exhaustively with early exit.
inline bool is_algebraically_disjoint(const FiniteGroup& G, const Perm& g, const Perm& f) {
  if (!G.contains(g) || !G.contains(f)) throw group_error("element not in group");

  std::vector<uint32_t> cz = G.centralizer(g);
  std::vector<Perm> c_elems;
  c_elems.reserve(cz.size());
  for (uint32_t i : cz) c_elems.push_back(G.element(i));

  for (const Perm& h : G.elements()) {
    if (commutator(f, h).is_identity()) continue;
    bool found = false;
    for (const Perm& b : c_elems) {
      Perm t = commutator(b, h);
      if (t.is_identity()) continue;
      for (const Perm& a : c_elems) {
        Perm c = commutator(a, t);
        if (c.is_identity()) continue;
        if (c * g == g * c) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) return false;
  }
  return true;
}

/// Full pairwise disjointness relation, indexed by canonical element order:
/// at(gi, fi) = element gi is algebraically disjoint from element fi.
struct DisjointnessMatrix {
  size_t order = 0;
  std::vector<bool> data;

  bool at(uint32_t gi, uint32_t fi) const { return data[gi * order + fi]; }
  bool all_true() const {
    return std::all_of(data.begin(), data.end(), [](bool b) { return b; });
  }
};

inline DisjointnessMatrix compute_disjointness_matrix(const FiniteGroup& G) {
  DisjointnessMatrix m;
  m.order = G.order();
  m.data.assign(m.order * m.order, false);
  for (uint32_t gi = 0; gi < m.order; ++gi)
    for (uint32_t fi = 0; fi < m.order; ++fi)
      m.data[gi * m.order + fi] = is_algebraically_disjoint(G, G.element(gi), G.element(fi));
  return m;
}

/// S_f: the set of 12th powers of all elements algebraically disjoint from f.
/// Returned as sorted element indices (duplicates collapsed).
inline std::vector<uint32_t> compute_S(const FiniteGroup& G, const Perm& f) {
  if (!G.contains(f)) throw group_error("element not in group");
  std::vector<uint32_t> out;
  for (const Perm& g : G.elements()) {
    if (is_algebraically_disjoint(G, g, f)) out.push_back(G.index_of(g.power(12)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Finite intersections of the centralizers C(S_f), ordered by inclusion.
/// Nodes are subgroups realized as sorted element-index sets; each carries one
/// witnessing tuple of f-indices.
struct RubinPoset {
  struct Node {
    std::vector<uint32_t> elems;    // sorted element indices
    std::vector<uint32_t> witness;  // one f-tuple realizing the node
  };
  std::vector<Node> nodes;                        // sorted by (size, lexicographic)
  std::vector<std::pair<uint32_t, uint32_t>> hasse;  // (lower, upper) covering pairs

  bool leq(uint32_t a, uint32_t b) const {
    return std::includes(nodes[b].elems.begin(), nodes[b].elems.end(),
                         nodes[a].elems.begin(), nodes[a].elems.end());
  }

  std::optional<uint32_t> least_node() const {
    for (uint32_t i = 0; i < nodes.size(); ++i) {
      bool least = true;
      for (uint32_t j = 0; j < nodes.size(); ++j)
        if (!leq(i, j)) {
          least = false;
          break;
        }
      if (least) return i;
    }
    return std::nullopt;
  }
};

namespace detail {

inline std::vector<uint32_t> sorted_intersection(const std::vector<uint32_t>& a,
                                                 const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

struct RubinPosetOptions {
  bool include_full_group = false;  // add G itself (the empty intersection) as a node
  unsigned threads = 1;
};

/// Materializes every C(S_f), closes under pairwise intersection to a fixed
/// point, deduplicates, and computes the inclusion order with covering edges.
/// Termination: the subgroup lattice of a finite group is finite.
inline RubinPoset rubin_poset(const FiniteGroup& G, const RubinPosetOptions& opts = {}) {
  std::vector<RubinPoset::Node> nodes;
  auto add_node = [&](std::vector<uint32_t> elems, std::vector<uint32_t> witness) {
    for (const auto& n : nodes)
      if (n.elems == elems) return false;
    nodes.push_back({std::move(elems), std::move(witness)});
    return true;
  };

  const uint32_t n = static_cast<uint32_t>(G.order());
  std::vector<std::vector<uint32_t>> base(n);
  unsigned nthreads = std::max(1u, opts.threads);
  if (nthreads <= 1 || n < 4) {
    for (uint32_t fi = 0; fi < n; ++fi)
      base[fi] = G.centralizer_of_set(compute_S(G, G.element(fi)));
  } else {
    std::vector<std::thread> pool;
    std::atomic<uint32_t> next{0};
    for (unsigned t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (uint32_t fi = next.fetch_add(1); fi < n; fi = next.fetch_add(1))
          base[fi] = G.centralizer_of_set(compute_S(G, G.element(fi)));
      });
    for (auto& th : pool) th.join();
  }
  // Deterministic merge order: canonical f order.
  for (uint32_t fi = 0; fi < n; ++fi) add_node(std::move(base[fi]), {fi});

  if (opts.include_full_group) {
    std::vector<uint32_t> all(n);
    for (uint32_t i = 0; i < n; ++i) all[i] = i;
    add_node(std::move(all), {});
  }

  // Close under pairwise intersection.
  bool changed = true;
  while (changed) {
    changed = false;
    size_t cur = nodes.size();
    for (size_t i = 0; i < cur; ++i) {
      for (size_t j = i + 1; j < cur; ++j) {
        auto inter = detail::sorted_intersection(nodes[i].elems, nodes[j].elems);
        std::vector<uint32_t> wit = nodes[i].witness;
        wit.insert(wit.end(), nodes[j].witness.begin(), nodes[j].witness.end());
        if (add_node(std::move(inter), std::move(wit))) changed = true;
      }
    }
  }

  std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) {
    if (a.elems.size() != b.elems.size()) return a.elems.size() < b.elems.size();
    return a.elems < b.elems;
  });

  RubinPoset poset;
  poset.nodes = std::move(nodes);

  // Covering pairs: a < b with nothing strictly between.
  const size_t m = poset.nodes.size();
  for (uint32_t a = 0; a < m; ++a) {
    for (uint32_t b = 0; b < m; ++b) {
      if (a == b || poset.nodes[a].elems == poset.nodes[b].elems) continue;
      if (!poset.leq(a, b)) continue;
      bool covered = true;
      for (uint32_t c = 0; c < m && covered; ++c) {
        if (c == a || c == b) continue;
        if (poset.leq(a, c) && poset.leq(c, b) && poset.nodes[c].elems != poset.nodes[a].elems &&
            poset.nodes[c].elems != poset.nodes[b].elems)
          covered = false;
      }
      if (covered) poset.hasse.emplace_back(a, b);
    }
  }
  return poset;
}

/// Finite direct-product analog of mutual disjointness of support-disjoint
/// elements: in G1 x G2 every pair ((x,1),(1,y)) with x,y non-trivial should be
/// mutually algebraically disjoint. Factors should be centerless; the report
/// records it rather than assuming it.
struct ProductCheckReport {
  bool factor1_centerless = false;
  bool factor2_centerless = false;
  size_t pairs_checked = 0;
  struct Failure {
    Perm left, right;
    bool left_from_right;  // direction that failed
  };
  std::vector<Failure> failures;
  bool all_disjoint() const { return failures.empty(); }
};

inline ProductCheckReport product_disjointness_check(const FiniteGroup& g1,
                                                     const FiniteGroup& g2,
                                                     size_t cap = FiniteGroup::kDefaultClosureCap) {
  ProductCheckReport report;
  report.factor1_centerless = g1.is_centerless();
  report.factor2_centerless = g2.is_centerless();
  FiniteGroup prod = FiniteGroup::direct_product(g1, g2, cap);
  for (const Perm& x : g1.elements()) {
    if (x.is_identity()) continue;
    Perm px = FiniteGroup::embed_left(x, g2.degree());
    for (const Perm& y : g2.elements()) {
      if (y.is_identity()) continue;
      Perm py = FiniteGroup::embed_right(y, g1.degree());
      ++report.pairs_checked;
      if (!is_algebraically_disjoint(prod, px, py))
        report.failures.push_back({px, py, true});
      if (!is_algebraically_disjoint(prod, py, px))
        report.failures.push_back({px, py, false});
    }
  }
  return report;
}

}  // namespace rubin
