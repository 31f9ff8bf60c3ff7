#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cswp::reductions {

struct Literal {
  uint32_t var = 1;  // 1-based
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// Clauses of at most two literals.
struct MaxSat2Instance {
  uint32_t num_vars = 0;
  std::vector<Clause> clauses;
};

/// General CNF; every clause non-empty.
struct SatInstance {
  uint32_t num_vars = 0;
  std::vector<Clause> clauses;
};

void validate(const MaxSat2Instance& inst);
void validate(const SatInstance& inst);

bool literal_value(const Literal& lit, const std::vector<bool>& assignment);
bool clause_satisfied(const Clause& clause, const std::vector<bool>& assignment);
std::size_t count_satisfied(std::span<const Clause> clauses, const std::vector<bool>& assignment);

/// "x1", "-x2", "!x3", "~x4" or a bare signed integer.
Literal parse_literal(std::string_view token);
/// Literals separated by commas and/or whitespace, e.g. "x1, -x2".
Clause parse_clause(std::string_view text);

struct Cnf {
  uint32_t num_vars = 0;
  std::vector<Clause> clauses;
};

/// DIMACS CNF ("p cnf <vars> <clauses>" then 0-terminated clauses).
Cnf parse_dimacs(std::string_view text);

std::string format_literal(const Literal& lit);

}  // namespace cswp::reductions
