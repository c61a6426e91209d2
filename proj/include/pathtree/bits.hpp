#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace pathtree {

// Fixed-size dynamic bitset sized at construction. Just the operations the
// path algorithms need; all two-operand ops assume equal sizes.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int n) : n_(n), w_((static_cast<std::size_t>(n) + 63) >> 6, 0) {}

  int size() const { return n_; }

  void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

  bool any() const {
    for (std::uint64_t w : w_)
      if (w) return true;
    return false;
  }

  int count() const {
    int c = 0;
    for (std::uint64_t w : w_) c += std::popcount(w);
    return c;
  }

  // Index of the lowest set bit, -1 when empty.
  int lowest() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return static_cast<int>(i * 64 + std::countr_zero(w_[i]));
    return -1;
  }

  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  // o is a subset of this.
  bool contains(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (o.w_[i] & ~w_[i]) return false;
    return true;
  }

  Bits& operator|=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  Bits& operator&=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }

  Bits and_not(const Bits& o) const {
    Bits r(*this);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] &= ~o.w_[i];
    return r;
  }

  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Union-find whose reset costs O(1): entries are lazily reinitialised when
// first touched in a new epoch. Lets tight loops run thousands of small
// cycle checks without reallocating.
class EpochDsu {
 public:
  explicit EpochDsu(int n) : parent_(n, 0), stamp_(n, 0) {}

  void begin() { ++epoch_; }

  int find(int v) {
    int r = touch(v);
    while (parent_[r] != r) r = parent_[r];
    // path halving
    while (parent_[v] != r) {
      int next = parent_[v];
      parent_[v] = r;
      v = next;
    }
    return r;
  }

  // Returns false when a and b were already connected (adding the edge would
  // close a cycle).
  bool unite(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent_[ra] = rb;
    return true;
  }

 private:
  int touch(int v) {
    if (stamp_[v] != epoch_) {
      stamp_[v] = epoch_;
      parent_[v] = v;
    }
    return v;
  }

  std::vector<int> parent_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

}  // namespace pathtree
