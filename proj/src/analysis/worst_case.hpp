#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/machine.hpp"
#include "core/program.hpp"
#include "reductions/formula.hpp"

namespace cswp::analysis {

inline constexpr uint64_t kDefaultBudget = uint64_t{1} << 24;

struct WorstCaseResult {
  uint64_t max_switching = 0;
  // Lexicographically smallest maximising assignment (declaration order).
  Assignment witness;
  uint64_t explored = 0;
};

/// Number of assignments in the program's input space, or nullopt if it
/// does not fit in 64 bits.
std::optional<uint64_t> enumeration_size(const Program& program);

/// Exact worst case by exhaustive enumeration. The space is cut into
/// `workers` contiguous slices evaluated concurrently; the merge (max value,
/// then earliest slice) makes the result independent of the split.
/// Throws Error(BudgetExceeded) when the space is larger than `budget`.
WorstCaseResult brute_force_worst_case(const Program& program, uint64_t budget = kDefaultBudget,
                                       unsigned workers = 1);

struct MaxSatResult {
  std::size_t best_count = 0;
  std::vector<bool> assignment;
};

/// Exhaustive MAXSAT; ties go to the lexicographically smallest assignment
/// (x1 first, false < true).
MaxSatResult maxsat_oracle(const reductions::MaxSat2Instance& instance, uint64_t budget = kDefaultBudget);

/// Lexicographically smallest model, or nullopt if unsatisfiable.
std::optional<std::vector<bool>> sat_oracle(const reductions::SatInstance& instance,
                                            uint64_t budget = kDefaultBudget);

/// key=value lines: max, witness.free<name>, coarse, knownbits, explored.
std::string render_worst_case_report(const Program& program, const WorstCaseResult& result, uint64_t coarse,
                                     uint64_t knownbits);

}  // namespace cswp::analysis
