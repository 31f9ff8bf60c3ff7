#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/machine.hpp"
#include "core/program.hpp"
#include "core/program_builder.hpp"
#include "reductions/formula.hpp"

namespace cswp::reductions {

/// Program built from a MAXSAT2 instance. For every full assignment,
/// total switching == k_var*num_vars + k_clause*num_clauses + k_sat*satisfied.
struct ReducedProgram {
  Program program;
  uint32_t num_vars = 0;
  std::size_t num_clauses = 0;
  uint64_t k_var = 0;
  uint64_t k_clause = 0;
  uint64_t k_sat = 0;

  // x_i -> 2(i-1), !x_i -> 2(i-1)+1
  static uint64_t lit_to_addr(const Literal& lit) { return 2 * uint64_t{lit.var - 1} + (lit.negated ? 1 : 0); }

  uint64_t constant_switching() const { return k_var * num_vars + k_clause * num_clauses; }
  uint64_t predicted_switching(std::size_t satisfied) const { return constant_switching() + k_sat * satisfied; }
};

/// Program built from a SAT instance: a decision phase computing a
/// satisfiability-gated bit pattern, then a switching phase alternating it
/// with zero.
struct GapProgram {
  Program program;
  uint32_t num_vars = 0;
  std::size_t decision_len = 0;
  std::size_t switching_len = 0;
  // Switching contributed by the transitions inside the switching phase when
  // the pattern is all ones: width * (switching_len - 1).
  uint64_t gap_bits = 0;
  uint64_t var_base_addr = 0;

  // Indices into SwitchingReport::transitions covering the switching phase.
  std::pair<std::size_t, std::size_t> switching_transition_range() const {
    return {decision_len, decision_len + switching_len - 1};
  }
};

/// Positive rational scaling factor for the switching phase length.
struct Ratio {
  uint64_t num = 1;
  uint64_t den = 1;
};

/// "2", "3/2" or "1.5".
Ratio parse_ratio(std::string_view text);

ReducedProgram reduce_maxsat2(const MaxSat2Instance& instance, unsigned width);

GapProgram reduce_sat_gap(const SatInstance& instance, unsigned width, Ratio factor = {});

/// Emits clause evaluation over variables stored at
/// var_base_addr .. var_base_addr+n-1 (each 0 or 1). The returned operand is
/// 1 iff every clause is satisfied.
Source emit_checksat(ProgramBuilder& builder, uint64_t var_base_addr, const SatInstance& instance);

Assignment embed_assignment(const Program& program, const std::vector<bool>& bools);
inline Assignment embed_assignment(const ReducedProgram& r, const std::vector<bool>& bools) {
  return embed_assignment(r.program, bools);
}
inline Assignment embed_assignment(const GapProgram& g, const std::vector<bool>& bools) {
  return embed_assignment(g.program, bools);
}

std::vector<bool> recover_assignment(const Program& program, std::span<const uint64_t> witness);
inline std::vector<bool> recover_assignment(const ReducedProgram& r, std::span<const uint64_t> witness) {
  return recover_assignment(r.program, witness);
}
inline std::vector<bool> recover_assignment(const GapProgram& g, std::span<const uint64_t> witness) {
  return recover_assignment(g.program, witness);
}

struct CheckSatVerification {
  uint64_t assignments = 0;
  uint64_t mismatches = 0;
  uint64_t satisfying = 0;
  std::size_t instructions = 0;
};

/// Runs the emitted clause evaluator on every assignment (n <= 20) and
/// compares against direct clause evaluation.
CheckSatVerification verify_checksat(const SatInstance& instance, unsigned width);

enum class ReductionKind { MaxSat2, SatGap };

/// Self-description carried as comment lines in a program file.
struct ReductionMeta {
  ReductionKind kind = ReductionKind::MaxSat2;
  uint32_t num_vars = 0;
  std::size_t num_clauses = 0;
  uint64_t k_var = 0;
  uint64_t k_clause = 0;
  uint64_t k_sat = 0;
  std::size_t decision_len = 0;
  std::size_t switching_len = 0;
  uint64_t gap_bits = 0;
  std::vector<std::pair<Literal, uint64_t>> lit_addrs;

  friend bool operator==(const ReductionMeta&, const ReductionMeta&) = default;
};

ReductionMeta meta_of(const ReducedProgram& r);
ReductionMeta meta_of(const GapProgram& g);

std::string format_meta(const ReductionMeta& meta);
// nullopt when the text carries no "# meta" line.
std::optional<ReductionMeta> parse_meta(std::string_view text);

std::string serialize_with_meta(const Program& program, const ReductionMeta& meta);

/// recovered.x<i>=0|1 for a worst-case witness, plus satisfied=<count> for
/// MAXSAT2 reductions.
std::string render_recovery(const ReductionMeta& meta, const Program& program, std::span<const uint64_t> witness,
                            uint64_t max_switching);

}  // namespace cswp::reductions
