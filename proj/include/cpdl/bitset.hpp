#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <vector>

namespace cpdl {

// Fixed-width dynamic bitset used for state sets and relation rows.
// All binary operations require equal widths.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int n) : n_(n), w_((n + 63) / 64, 0) {}

  static Bits all(int n) {
    Bits b(n);
    for (auto& w : b.w_) w = ~0ull;
    b.trim();
    return b;
  }

  int size() const { return n_; }

  bool test(int i) const {
    assert(i >= 0 && i < n_);
    return (w_[i >> 6] >> (i & 63)) & 1;
  }
  void set(int i) {
    assert(i >= 0 && i < n_);
    w_[i >> 6] |= 1ull << (i & 63);
  }
  void reset(int i) {
    assert(i >= 0 && i < n_);
    w_[i >> 6] &= ~(1ull << (i & 63));
  }

  Bits& operator|=(const Bits& o) {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  Bits& operator&=(const Bits& o) {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  Bits& subtract(const Bits& o) {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }

  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

  Bits complement() const {
    Bits r(n_);
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] = ~w_[k];
    r.trim();
    return r;
  }

  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  int count() const {
    int c = 0;
    for (auto w : w_) c += __builtin_popcountll(w);
    return c;
  }

  bool intersects(const Bits& o) const {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }

  bool subset_of(const Bits& o) const {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }

  bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const Bits& o) const { return !(*this == o); }

  // -1 when empty
  int first() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return static_cast<int>(k * 64 + __builtin_ctzll(w_[k]));
    return -1;
  }

  template <class F>
  void for_each(F f) const {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      std::uint64_t w = w_[k];
      while (w) {
        f(static_cast<int>(k * 64 + __builtin_ctzll(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<int> members() const {
    std::vector<int> v;
    for_each([&](int i) { v.push_back(i); });
    return v;
  }

  // Canonical set order: walk states upward, a set lacking the first
  // differing state sorts before one containing it. The empty set is least.
  static int lex_compare(const Bits& a, const Bits& b) {
    assert(a.n_ == b.n_);
    for (std::size_t k = 0; k < a.w_.size(); ++k) {
      std::uint64_t d = a.w_[k] ^ b.w_[k];
      if (d) {
        int bit = __builtin_ctzll(d);
        return (a.w_[k] >> bit) & 1 ? 1 : -1;
      }
    }
    return 0;
  }

  std::size_t hash() const {
    std::size_t h = std::hash<int>()(n_);
    for (auto w : w_) h = h * 1099511628211ull + std::hash<std::uint64_t>()(w);
    return h;
  }

 private:
  void trim() {
    if (n_ & 63) w_.back() &= (~0ull) >> (64 - (n_ & 63));
  }

  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return b.hash(); }
};

}  // namespace cpdl
