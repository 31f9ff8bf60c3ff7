#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/bitvector.hpp"
#include "core/program.hpp"

namespace cswp::analysis {

enum class BitState { Zero, One, Unknown };

/// Three-valued abstraction of a width-bit word: each bit is known zero,
/// known one, or unknown. Stored as disjoint known-zero / known-one masks.
class KnownBits {
 public:
  explicit KnownBits(unsigned width) : width_(width) {}

  static KnownBits unknown(unsigned width) { return KnownBits(width); }
  static KnownBits constant(uint64_t value, unsigned width);
  static KnownBits from_masks(uint64_t zeros, uint64_t ones, unsigned width);

  unsigned width() const { return width_; }
  uint64_t zeros() const { return zeros_; }
  uint64_t ones() const { return ones_; }
  uint64_t known() const { return zeros_ | ones_; }

  BitState bit(unsigned i) const;
  void set(unsigned i, BitState s);

  bool is_constant() const { return known() == width_mask(width_); }
  bool contains(uint64_t value) const {
    return (value & ~width_mask(width_)) == 0 && (value & zeros_) == 0 && (value & ones_) == ones_;
  }

  /// Least upper bound: keeps only bits known and equal in both.
  KnownBits join(const KnownBits& other) const;

  // MSB first, '0' / '1' / '?'.
  std::string to_string() const;

  friend bool operator==(const KnownBits&, const KnownBits&) = default;

 private:
  uint64_t zeros_ = 0;
  uint64_t ones_ = 0;
  unsigned width_;
};

/// Abstract semantics of one instruction. For load and store the single
/// input is the abstract value read from memory or the source respectively.
KnownBits knownbits_transfer(Mnemonic op, std::span<const KnownBits> inputs);

/// Abstract output of every instruction, free inputs taken as unknown within
/// their domain and memory starting at zero.
std::vector<KnownBits> abstract_execute(const Program& program);

/// Bit positions, summed over adjacent output pairs, that are not known to be
/// equal. Sound upper bound on the worst-case switching.
uint64_t knownbits_upper_bound(const Program& program);

/// (n-1) * width: every bit flipping on every transition.
uint64_t coarse_upper_bound(const Program& program);

}  // namespace cswp::analysis
