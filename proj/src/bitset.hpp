#pragma once

#include <cstdint>
#include <vector>

namespace synchro {

// Fixed-width bitset sized at runtime. Used for node reachability closures
// and for run sets during knowledge evaluation.
class DynBitset {
 public:
  DynBitset() = default;
  explicit DynBitset(std::size_t bits)
      : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const { return bits_; }

  void set(std::size_t i) { words_[i >> 6] |= (1ULL << (i & 63)); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(1ULL << (i & 63)); }
  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }

  void set_all() {
    for (auto& w : words_) w = ~0ULL;
    trim();
  }

  DynBitset& operator|=(const DynBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  DynBitset& operator&=(const DynBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  // true when every set bit of `sub` is also set here
  bool contains(const DynBitset& sub) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (sub.words_[i] & ~words_[i]) return false;
    return true;
  }

  friend bool operator==(const DynBitset&, const DynBitset&) = default;

 private:
  void trim() {
    if (bits_ % 64 != 0 && !words_.empty())
      words_.back() &= (1ULL << (bits_ % 64)) - 1;
  }

  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace synchro
