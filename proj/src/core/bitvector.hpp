#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "core/error.hpp"

namespace cswp {

inline constexpr unsigned kMaxWidth = 64;

/// All-ones mask for a width in [1, 64].
constexpr uint64_t width_mask(unsigned width) {
  return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
}

/// A fixed-width machine word. The value is always reduced modulo 2^width.
class BitVector {
 public:
  constexpr BitVector() = default;
  constexpr BitVector(uint64_t value, unsigned width)
      : value_(value & width_mask(width)), width_(width) {}

  constexpr uint64_t value() const { return value_; }
  constexpr unsigned width() const { return width_; }

  friend constexpr bool operator==(const BitVector&, const BitVector&) = default;

 private:
  uint64_t value_ = 0;
  unsigned width_ = 1;
};

inline unsigned hamming_weight(uint64_t v) { return static_cast<unsigned>(std::popcount(v)); }

/// Number of bit positions in which a and b differ.
inline unsigned hamming_distance(BitVector a, BitVector b) {
  if (a.width() != b.width()) {
    throw Error(ErrorCode::InvalidArgument,
                "hamming_distance: width mismatch (" + std::to_string(a.width()) + " vs " +
                    std::to_string(b.width()) + ")");
  }
  return hamming_weight(a.value() ^ b.value());
}

std::string to_hex(uint64_t v);

}  // namespace cswp
