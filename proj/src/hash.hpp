#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>

namespace synchro {

// 128-bit content hash used as the canonical identity of local states and
// payloads. Runs are compared across an entire bundle through these values,
// so the hash must be deterministic across executions and platforms.
struct Hash128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend bool operator==(const Hash128&, const Hash128&) = default;
  friend auto operator<=>(const Hash128& a, const Hash128& b) {
    return std::tie(a.hi, a.lo) <=> std::tie(b.hi, b.lo);
  }

  std::string hex() const;
};

class Hasher {
 public:
  Hasher() = default;

  void u64(std::uint64_t v) {
    a_ = mix(a_ ^ (v * 0x9e3779b97f4a7c15ULL));
    b_ = mix(b_ + v + 0x6a09e667f3bcc909ULL);
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u64(s.size());
    std::uint64_t acc = 0;
    int n = 0;
    for (unsigned char c : s) {
      acc = (acc << 8) | c;
      if (++n == 8) {
        u64(acc);
        acc = 0;
        n = 0;
      }
    }
    if (n > 0) u64(acc | (static_cast<std::uint64_t>(n) << 56));
  }
  void hash(const Hash128& h) {
    u64(h.hi);
    u64(h.lo);
  }

  Hash128 digest() const { return Hash128{mix(a_ ^ b_), mix(b_ ^ (a_ >> 1))}; }

 private:
  // 64-bit finalizer from MurmurHash3.
  static std::uint64_t mix(std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    k *= 0xc4ceb9fe1a85ec53ULL;
    k ^= k >> 33;
    return k;
  }

  std::uint64_t a_ = 0x243f6a8885a308d3ULL;
  std::uint64_t b_ = 0x13198a2e03707344ULL;
};

inline std::string Hash128::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s(32, '0');
  for (int i = 0; i < 16; ++i) s[15 - i] = digits[(hi >> (4 * i)) & 0xf];
  for (int i = 0; i < 16; ++i) s[31 - i] = digits[(lo >> (4 * i)) & 0xf];
  return s;
}

}  // namespace synchro
