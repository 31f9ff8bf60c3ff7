#include "analysis/known_bits.hpp"

#include "core/error.hpp"

namespace cswp::analysis {

namespace {

BitState xor3(BitState a, BitState b, BitState c) {
  if (a == BitState::Unknown || b == BitState::Unknown || c == BitState::Unknown) return BitState::Unknown;
  const int ones = (a == BitState::One) + (b == BitState::One) + (c == BitState::One);
  return (ones & 1) != 0 ? BitState::One : BitState::Zero;
}

BitState majority(BitState a, BitState b, BitState c) {
  const int ones = (a == BitState::One) + (b == BitState::One) + (c == BitState::One);
  const int zeros = (a == BitState::Zero) + (b == BitState::Zero) + (c == BitState::Zero);
  if (ones >= 2) return BitState::One;
  if (zeros >= 2) return BitState::Zero;
  return BitState::Unknown;
}

KnownBits complement(const KnownBits& k) { return KnownBits::from_masks(k.ones(), k.zeros(), k.width()); }

// Ripple-carry adder evaluated in three-valued logic.
KnownBits ripple_add(const KnownBits& a, const KnownBits& b, BitState carry) {
  KnownBits out(a.width());
  for (unsigned i = 0; i < a.width(); ++i) {
    const BitState x = a.bit(i);
    const BitState y = b.bit(i);
    out.set(i, xor3(x, y, carry));
    carry = majority(x, y, carry);
  }
  return out;
}

KnownBits shift(const KnownBits& a, const KnownBits& amount, bool left) {
  const unsigned w = a.width();
  if (!amount.is_constant()) return KnownBits::unknown(w);
  const unsigned s = static_cast<unsigned>(amount.ones() % w);
  const uint64_t mask = width_mask(w);
  if (left) {
    const uint64_t vacated = s == 0 ? 0 : width_mask(s);
    return KnownBits::from_masks(((a.zeros() << s) | vacated) & mask, (a.ones() << s) & mask, w);
  }
  const uint64_t vacated = s == 0 ? 0 : (mask << (w - s)) & mask;
  return KnownBits::from_masks((a.zeros() >> s) | vacated, a.ones() >> s, w);
}

}  // namespace

KnownBits KnownBits::constant(uint64_t value, unsigned width) {
  const uint64_t mask = width_mask(width);
  return from_masks(~value & mask, value & mask, width);
}

KnownBits KnownBits::from_masks(uint64_t zeros, uint64_t ones, unsigned width) {
  if ((zeros & ones) != 0) {
    throw Error(ErrorCode::InvalidArgument, "known-bits masks overlap (empty concretization)");
  }
  KnownBits k(width);
  const uint64_t mask = width_mask(width);
  k.zeros_ = zeros & mask;
  k.ones_ = ones & mask;
  return k;
}

BitState KnownBits::bit(unsigned i) const {
  const uint64_t m = uint64_t{1} << i;
  if (zeros_ & m) return BitState::Zero;
  if (ones_ & m) return BitState::One;
  return BitState::Unknown;
}

void KnownBits::set(unsigned i, BitState s) {
  const uint64_t m = uint64_t{1} << i;
  zeros_ &= ~m;
  ones_ &= ~m;
  if (s == BitState::Zero) zeros_ |= m;
  if (s == BitState::One) ones_ |= m;
}

KnownBits KnownBits::join(const KnownBits& other) const {
  return from_masks(zeros_ & other.zeros_, ones_ & other.ones_, width_);
}

std::string KnownBits::to_string() const {
  std::string out;
  for (unsigned i = width_; i-- > 0;) {
    const BitState s = bit(i);
    out.push_back(s == BitState::Zero ? '0' : s == BitState::One ? '1' : '?');
  }
  return out;
}

KnownBits knownbits_transfer(Mnemonic op, std::span<const KnownBits> in) {
  if (in.size() != arity(op)) {
    throw Error(ErrorCode::InvalidArgument, std::string(mnemonic_name(op)) + " expects " +
                                                std::to_string(arity(op)) + " abstract input(s), got " +
                                                std::to_string(in.size()));
  }
  const unsigned w = in[0].width();
  for (const auto& k : in) {
    if (k.width() != w) throw Error(ErrorCode::InvalidArgument, "abstract inputs differ in width");
  }

  switch (op) {
    case Mnemonic::Mov:
    case Mnemonic::Load:
    case Mnemonic::Store:
      return in[0];
    case Mnemonic::Not:
      return complement(in[0]);
    case Mnemonic::And:
      return KnownBits::from_masks(in[0].zeros() | in[1].zeros(), in[0].ones() & in[1].ones(), w);
    case Mnemonic::Or:
      return KnownBits::from_masks(in[0].zeros() & in[1].zeros(), in[0].ones() | in[1].ones(), w);
    case Mnemonic::Xor: {
      const auto& a = in[0];
      const auto& b = in[1];
      return KnownBits::from_masks((a.zeros() & b.zeros()) | (a.ones() & b.ones()),
                                   (a.zeros() & b.ones()) | (a.ones() & b.zeros()), w);
    }
    case Mnemonic::Add:
      return ripple_add(in[0], in[1], BitState::Zero);
    case Mnemonic::Sub:
      // a - b = a + ~b + 1
      return ripple_add(in[0], complement(in[1]), BitState::One);
    case Mnemonic::Shl:
      return shift(in[0], in[1], true);
    case Mnemonic::Shr:
      return shift(in[0], in[1], false);
    case Mnemonic::Ite:
      if (in[0].ones() != 0) return in[1];
      if (in[0].is_constant()) return in[2];
      return in[1].join(in[2]);
    case Mnemonic::Eqz:
      if (in[0].ones() != 0) return KnownBits::constant(0, w);
      if (in[0].is_constant()) return KnownBits::constant(1, w);
      return KnownBits::from_masks(width_mask(w) & ~uint64_t{1}, 0, w);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mnemonic");
}

std::vector<KnownBits> abstract_execute(const Program& program) {
  require_valid(program);
  const unsigned w = program.width;
  // Addresses are fixed and the program is straight-line, so every store is a
  // definite (strong) update.
  std::vector<KnownBits> memory(program.mem_size, KnownBits::constant(0, w));
  std::vector<KnownBits> outputs;
  outputs.reserve(program.instructions.size());

  for (const Instruction& insn : program.instructions) {
    std::vector<KnownBits> ins;
    ins.reserve(insn.inputs.size());
    for (const Source& src : insn.inputs) {
      if (const auto* f = std::get_if<FreeSource>(&src)) {
        const auto& decl = program.free_inputs[*program.free_index(f->name)];
        ins.push_back(decl.domain == Domain::Binary01
                          ? KnownBits::from_masks(width_mask(w) & ~uint64_t{1}, 0, w)
                          : KnownBits::unknown(w));
      } else if (const auto* c = std::get_if<ConstSource>(&src)) {
        ins.push_back(KnownBits::constant(c->value, w));
      } else if (const auto* m = std::get_if<MemSource>(&src)) {
        ins.push_back(memory[m->addr]);
      } else {
        ins.push_back(outputs[std::get<OutputSource>(src).index]);
      }
    }
    outputs.push_back(knownbits_transfer(insn.op, ins));
    if (insn.mem_dest) memory[*insn.mem_dest] = outputs.back();
  }
  return outputs;
}

uint64_t knownbits_upper_bound(const Program& program) {
  const auto outs = abstract_execute(program);
  const uint64_t mask = width_mask(program.width);
  uint64_t bound = 0;
  for (std::size_t i = 0; i + 1 < outs.size(); ++i) {
    const auto& a = outs[i];
    const auto& b = outs[i + 1];
    const uint64_t same = (a.zeros() & b.zeros()) | (a.ones() & b.ones());
    bound += hamming_weight(~same & mask);
  }
  return bound;
}

uint64_t coarse_upper_bound(const Program& program) {
  const uint64_t n = program.instructions.size();
  return n == 0 ? 0 : (n - 1) * program.width;
}

}  // namespace cswp::analysis
