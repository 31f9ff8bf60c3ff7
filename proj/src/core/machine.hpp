#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "core/bitvector.hpp"
#include "core/program.hpp"

namespace cswp {

// Free-input values in declaration order.
using Assignment = std::vector<uint64_t>;
using NamedAssignment = std::map<std::string, uint64_t, std::less<>>;

/// Orders a name -> value map by declaration; rejects missing and unknown names.
Assignment bind_assignment(const Program& program, const NamedAssignment& named);

/// Throws Error(Domain) if a value falls outside its input's domain.
void check_assignment(const Program& program, std::span<const uint64_t> values);

/// Mnemonic semantics over already-resolved operand values, modulo 2^width.
uint64_t apply_op(Mnemonic op, std::span<const uint64_t> operands, unsigned width);

struct ExecutionTrace {
  std::vector<BitVector> outputs;
  std::vector<BitVector> final_memory;
  // Resolved input operand values per instruction.
  std::vector<std::vector<BitVector>> operands;
};

struct SwitchingReport {
  std::vector<unsigned> transitions;
  uint64_t total = 0;
};

ExecutionTrace execute(const Program& program, std::span<const uint64_t> assignment);
ExecutionTrace execute(const Program& program, const NamedAssignment& assignment);

SwitchingReport switching_of(const ExecutionTrace& trace);
SwitchingReport evaluate_switching(const Program& program, std::span<const uint64_t> assignment);
SwitchingReport evaluate_switching(const Program& program, const NamedAssignment& assignment);

/// Reusable evaluator for hot loops: validates once, then runs without
/// per-call checks or allocation. Not thread-safe; use one per worker.
class Machine {
 public:
  explicit Machine(const Program& program);

  // Assignment must already satisfy check_assignment.
  uint64_t total_switching(std::span<const uint64_t> assignment);

  // Output of each instruction from the most recent run.
  std::span<const uint64_t> outputs() const { return outputs_; }

 private:
  void run(std::span<const uint64_t> assignment);

  enum class Kind : uint8_t { Free, Const, Mem, Output };
  struct Operand {
    Kind kind;
    uint64_t payload;
  };
  struct Step {
    Mnemonic op;
    std::size_t count;
    std::array<Operand, 3> inputs;
    bool writes_memory;
    uint64_t dest;
  };

  unsigned width_;
  std::vector<Step> steps_;
  std::vector<uint64_t> outputs_;
  std::vector<uint64_t> memory_;
  std::vector<uint64_t> written_;
};

}  // namespace cswp
