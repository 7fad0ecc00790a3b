#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "rubin/perm.hpp"

namespace rubin {

/// Fully enumerated permutation group. Elements are kept in a canonical order
/// (lexicographic on image sequences), so element indices are stable and runs
/// are reproducible. Immutable after construction; safe for concurrent reads.
class FiniteGroup {
 public:
  static constexpr size_t kDefaultClosureCap = 20000;

  /// BFS closure of the generators. Throws if generator degrees disagree or
  /// the closure exceeds `cap` (the group is too large for brute force).
  static FiniteGroup generate(uint32_t degree, std::vector<Perm> generators,
                              size_t cap = kDefaultClosureCap) {
    for (const Perm& g : generators)
      if (g.degree() != degree) throw group_error("generator degree mismatch");

    std::unordered_map<Perm, uint32_t, PermHash> seen;
    std::deque<Perm> queue;
    Perm id = Perm::identity(degree);
    seen.emplace(id, 0);
    queue.push_back(id);
    while (!queue.empty()) {
      Perm cur = std::move(queue.front());
      queue.pop_front();
      for (const Perm& g : generators) {
        Perm nxt = cur * g;
        if (seen.emplace(nxt, 0).second) {
          if (seen.size() > cap)
            throw group_error("closure cap exceeded (" + std::to_string(cap) +
                              "): group too large for brute force");
          queue.push_back(std::move(nxt));
        }
      }
    }

    std::vector<Perm> elems;
    elems.reserve(seen.size());
    for (const auto& [p, _] : seen) elems.push_back(p);
    std::sort(elems.begin(), elems.end());
    return FiniteGroup(degree, std::move(elems), std::move(generators));
  }

  uint32_t degree() const { return degree_; }
  size_t order() const { return elements_.size(); }
  const std::vector<Perm>& elements() const { return elements_; }
  const std::vector<Perm>& generators() const { return generators_; }
  const Perm& element(uint32_t idx) const { return elements_.at(idx); }

  bool contains(const Perm& p) const { return index_.count(p) != 0; }

  uint32_t index_of(const Perm& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) throw group_error("element not in group");
    return it->second;
  }

  uint32_t identity_index() const { return index_of(Perm::identity(degree_)); }

  uint32_t multiply(uint32_t a, uint32_t b) const {
    return index_of(element(a) * element(b));
  }

  uint32_t invert(uint32_t a) const { return index_of(element(a).inverse()); }

  bool is_abelian() const {
    for (size_t i = 0; i < elements_.size(); ++i)
      for (size_t j = i + 1; j < elements_.size(); ++j)
        if (!(elements_[i] * elements_[j] == elements_[j] * elements_[i])) return false;
    return true;
  }

  /// Indices of elements commuting with g (g must belong to the group).
  std::vector<uint32_t> centralizer(const Perm& g) const {
    if (!contains(g)) throw group_error("element not in group");
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < elements_.size(); ++i)
      if (elements_[i] * g == g * elements_[i]) out.push_back(i);
    return out;
  }

  /// Indices of elements commuting with every member of S (subset of the group).
  std::vector<uint32_t> centralizer_of_set(const std::vector<uint32_t>& subset) const {
    for (uint32_t s : subset)
      if (s >= elements_.size()) throw group_error("subset index out of range");
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < elements_.size(); ++i) {
      bool ok = true;
      for (uint32_t s : subset) {
        if (!(elements_[i] * elements_[s] == elements_[s] * elements_[i])) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(i);
    }
    return out;
  }

  std::vector<uint32_t> center() const {
    std::vector<uint32_t> all(elements_.size());
    for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    return centralizer_of_set(all);
  }

  bool is_centerless() const { return center().size() == 1; }

  /// Partition of element indices under conjugacy; classes ordered by their
  /// minimal element, members ascending.
  std::vector<std::vector<uint32_t>> conjugacy_classes() const {
    std::vector<bool> done(elements_.size(), false);
    std::vector<std::vector<uint32_t>> classes;
    for (uint32_t i = 0; i < elements_.size(); ++i) {
      if (done[i]) continue;
      std::vector<uint32_t> cls;
      for (const Perm& h : elements_) {
        uint32_t j = index_of(h.inverse() * elements_[i] * h);
        if (!done[j]) {
          done[j] = true;
          cls.push_back(j);
        }
      }
      std::sort(cls.begin(), cls.end());
      classes.push_back(std::move(cls));
    }
    return classes;
  }

  /// G1 x G2 acting on the disjoint union of the two domains.
  static FiniteGroup direct_product(const FiniteGroup& g1, const FiniteGroup& g2,
                                    size_t cap = kDefaultClosureCap) {
    uint32_t deg = g1.degree() + g2.degree();
    std::vector<Perm> gens;
    for (const Perm& a : g1.generators()) {
      std::vector<uint32_t> im(deg);
      for (uint32_t i = 0; i < g1.degree(); ++i) im[i] = a(i);
      for (uint32_t i = 0; i < g2.degree(); ++i) im[g1.degree() + i] = g1.degree() + i;
      gens.emplace_back(std::move(im));
    }
    for (const Perm& b : g2.generators()) {
      std::vector<uint32_t> im(deg);
      for (uint32_t i = 0; i < g1.degree(); ++i) im[i] = i;
      for (uint32_t i = 0; i < g2.degree(); ++i) im[g1.degree() + i] = g1.degree() + b(i);
      gens.emplace_back(std::move(im));
    }
    return generate(deg, std::move(gens), cap);
  }

  /// Embeds an element of the left/right factor into the product domain.
  static Perm embed_left(const Perm& a, uint32_t right_degree) {
    std::vector<uint32_t> im(a.degree() + right_degree);
    for (uint32_t i = 0; i < a.degree(); ++i) im[i] = a(i);
    for (uint32_t i = 0; i < right_degree; ++i) im[a.degree() + i] = a.degree() + i;
    return Perm(std::move(im));
  }

  static Perm embed_right(const Perm& b, uint32_t left_degree) {
    std::vector<uint32_t> im(left_degree + b.degree());
    for (uint32_t i = 0; i < left_degree; ++i) im[i] = i;
    for (uint32_t i = 0; i < b.degree(); ++i) im[left_degree + i] = left_degree + b(i);
    return Perm(std::move(im));
  }

 private:
  FiniteGroup(uint32_t degree, std::vector<Perm> elems, std::vector<Perm> gens)
      : degree_(degree), elements_(std::move(elems)), generators_(std::move(gens)) {
    index_.reserve(elements_.size());
    for (uint32_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
  }

  uint32_t degree_ = 0;
  std::vector<Perm> elements_;
  std::vector<Perm> generators_;
  std::unordered_map<Perm, uint32_t, PermHash> index_;
};

/// Named example groups used throughout the test suite and the CLI.
/// Points are 0-based.
inline FiniteGroup preset_group(const std::string& name) {
  auto cyc = [](uint32_t deg, std::vector<std::vector<uint32_t>> cycles) {
    return Perm::from_cycles(deg, std::move(cycles));
  };
  if (name == "S3") return FiniteGroup::generate(3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})});
  if (name == "S4")
    return FiniteGroup::generate(4, {cyc(4, {{0, 1}}), cyc(4, {{0, 1, 2, 3}})});
  if (name == "A4")
    return FiniteGroup::generate(4, {cyc(4, {{0, 1, 2}}), cyc(4, {{0, 1}, {2, 3}})});
  if (name == "D4")
    return FiniteGroup::generate(4, {cyc(4, {{0, 1, 2, 3}}), cyc(4, {{0, 2}})});
  if (name == "C5xC5")
    return FiniteGroup::generate(10, {cyc(10, {{0, 1, 2, 3, 4}}), cyc(10, {{5, 6, 7, 8, 9}})});
  if (name == "C12") return FiniteGroup::generate(12, {cyc(12, {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}})});
  if (name == "C2") return FiniteGroup::generate(2, {cyc(2, {{0, 1}})});
  if (name == "C3") return FiniteGroup::generate(3, {cyc(3, {{0, 1, 2}})});
  if (name == "C5") return FiniteGroup::generate(5, {cyc(5, {{0, 1, 2, 3, 4}})});
  if (name == "Q8")
    return FiniteGroup::generate(
        8, {cyc(8, {{0, 1, 2, 3}, {4, 5, 6, 7}}), cyc(8, {{0, 4, 2, 6}, {1, 7, 3, 5}})});
  if (name == "trivial") return FiniteGroup::generate(1, {});
  throw group_error("unknown preset group: " + name);
}

}  // namespace rubin
