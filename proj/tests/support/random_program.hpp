#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "core/bitvector.hpp"
#include "core/program.hpp"

namespace cswp::testkit {

struct RandomProgramOptions {
  unsigned max_len = 8;
  unsigned max_width = 4;
  unsigned max_full = 2;
  unsigned max_binary = 1;
  uint64_t mem_size = 4;
};

inline uint64_t pick(std::mt19937_64& rng, uint64_t lo, uint64_t hi) {
  return std::uniform_int_distribution<uint64_t>(lo, hi)(rng);
}

inline Program random_program(std::mt19937_64& rng, const RandomProgramOptions& opt = {}) {
  Program p;
  p.width = static_cast<unsigned>(pick(rng, 1, opt.max_width));
  p.mem_size = opt.mem_size;
  const auto full = pick(rng, 0, opt.max_full);
  const auto binary = pick(rng, 0, opt.max_binary);
  for (uint64_t i = 0; i < full + binary; ++i) {
    p.free_inputs.push_back({std::to_string(i), i < full ? Domain::Full : Domain::Binary01});
  }
  const auto n = pick(rng, 1, opt.max_len);
  constexpr Mnemonic kOps[] = {Mnemonic::Mov, Mnemonic::Add, Mnemonic::Sub, Mnemonic::And, Mnemonic::Or,
                               Mnemonic::Xor, Mnemonic::Not, Mnemonic::Shl, Mnemonic::Shr, Mnemonic::Load,
                               Mnemonic::Store, Mnemonic::Ite, Mnemonic::Eqz};
  for (uint64_t i = 0; i < n; ++i) {
    Instruction ins;
    ins.op = kOps[pick(rng, 0, std::size(kOps) - 1)];
    for (unsigned k = 0; k < arity(ins.op); ++k) {
      if (ins.op == Mnemonic::Load) {
        ins.inputs.push_back(MemSource{pick(rng, 0, p.mem_size - 1)});
        continue;
      }
      for (;;) {
        const auto kind = pick(rng, 0, 3);
        if (kind == 0 && !p.free_inputs.empty()) {
          ins.inputs.push_back(FreeSource{p.free_inputs[pick(rng, 0, p.free_inputs.size() - 1)].name});
        } else if (kind == 1) {
          ins.inputs.push_back(ConstSource{pick(rng, 0, width_mask(p.width))});
        } else if (kind == 2) {
          ins.inputs.push_back(MemSource{pick(rng, 0, p.mem_size - 1)});
        } else if (kind == 3 && i > 0) {
          ins.inputs.push_back(OutputSource{static_cast<std::size_t>(pick(rng, 0, i - 1))});
        } else {
          continue;
        }
        break;
      }
    }
    if (ins.op == Mnemonic::Store || pick(rng, 0, 4) == 0) ins.mem_dest = pick(rng, 0, p.mem_size - 1);
    p.instructions.push_back(std::move(ins));
  }
  return p;
}

inline std::vector<uint64_t> random_assignment(std::mt19937_64& rng, const Program& p) {
  std::vector<uint64_t> a;
  for (const auto& f : p.free_inputs) a.push_back(pick(rng, 0, f.domain == Domain::Binary01 ? 1 : width_mask(p.width)));
  return a;
}

}  // namespace cswp::testkit
