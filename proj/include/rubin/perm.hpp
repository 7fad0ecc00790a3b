#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rubin {

struct group_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Permutation of {0,...,n-1}, stored as the image sequence: images[i] = image of i.
/// Products compose right-to-left: (a*b)(x) = a(b(x)).
class Perm {
 public:
  Perm() = default;

  explicit Perm(std::vector<uint32_t> images) : images_(std::move(images)) {
    check_bijection();
  }

  static Perm identity(uint32_t degree) {
    std::vector<uint32_t> im(degree);
    std::iota(im.begin(), im.end(), 0u);
    return Perm(std::move(im));
  }

  /// Builds a permutation of the given degree from disjoint cycles, e.g. {{0,1},{2,3}}.
  static Perm from_cycles(uint32_t degree, const std::vector<std::vector<uint32_t>>& cycles) {
    std::vector<uint32_t> im(degree);
    std::iota(im.begin(), im.end(), 0u);
    std::vector<bool> seen(degree, false);
    for (const auto& cyc : cycles) {
      for (size_t i = 0; i < cyc.size(); ++i) {
        uint32_t from = cyc[i];
        uint32_t to = cyc[(i + 1) % cyc.size()];
        if (from >= degree || to >= degree)
          throw group_error("cycle point out of range for degree " + std::to_string(degree));
        if (seen[from]) throw group_error("cycles are not disjoint");
        seen[from] = true;
        im[from] = to;
      }
    }
    return Perm(std::move(im));
  }

  uint32_t degree() const { return static_cast<uint32_t>(images_.size()); }

  uint32_t operator()(uint32_t point) const { return images_[point]; }

  Perm operator*(const Perm& rhs) const {
    if (degree() != rhs.degree()) throw group_error("degree mismatch in permutation product");
    std::vector<uint32_t> im(images_.size());
    for (size_t i = 0; i < im.size(); ++i) im[i] = images_[rhs.images_[i]];
    return Perm(std::move(im), unchecked{});
  }

  Perm inverse() const {
    std::vector<uint32_t> im(images_.size());
    for (size_t i = 0; i < im.size(); ++i) im[images_[i]] = static_cast<uint32_t>(i);
    return Perm(std::move(im), unchecked{});
  }

  Perm power(int64_t k) const {
    Perm base = k >= 0 ? *this : inverse();
    uint64_t e = k >= 0 ? static_cast<uint64_t>(k) : static_cast<uint64_t>(-(k + 1)) + 1;
    Perm acc = identity(degree());
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  bool is_identity() const {
    for (size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  /// Points moved by the permutation.
  std::vector<uint32_t> support() const {
    std::vector<uint32_t> pts;
    for (size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) pts.push_back(static_cast<uint32_t>(i));
    return pts;
  }

  const std::vector<uint32_t>& images() const { return images_; }

  /// Disjoint cycle notation with 0-based points; "()" for the identity.
  std::string to_cycle_string() const {
    std::string out;
    std::vector<bool> seen(images_.size(), false);
    for (uint32_t start = 0; start < images_.size(); ++start) {
      if (seen[start] || images_[start] == start) continue;
      out += '(';
      uint32_t p = start;
      bool first = true;
      while (!seen[p]) {
        seen[p] = true;
        if (!first) out += ' ';
        out += std::to_string(p);
        first = false;
        p = images_[p];
      }
      out += ')';
    }
    if (out.empty()) out = "()";
    return out;
  }

  friend bool operator==(const Perm& a, const Perm& b) { return a.images_ == b.images_; }
  friend auto operator<=>(const Perm& a, const Perm& b) { return a.images_ <=> b.images_; }

 private:
  struct unchecked {};
  Perm(std::vector<uint32_t> images, unchecked) : images_(std::move(images)) {}

  void check_bijection() const {
    std::vector<bool> seen(images_.size(), false);
    for (uint32_t v : images_) {
      if (v >= images_.size() || seen[v]) throw group_error("image sequence is not a bijection");
      seen[v] = true;
    }
  }

  std::vector<uint32_t> images_;
};

/// [a,b] = a^{-1} b^{-1} a b.
inline Perm commutator(const Perm& a, const Perm& b) {
  if (a.degree() != b.degree()) throw group_error("degree mismatch in commutator");
  return a.inverse() * b.inverse() * a * b;
}

inline Perm conjugate(const Perm& x, const Perm& by) {
  return by.inverse() * x * by;
}

struct PermHash {
  size_t operator()(const Perm& p) const {
    size_t h = 0xcbf29ce484222325ull;
    for (uint32_t v : p.images()) {
      h ^= v;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

}  // namespace rubin
