#include "reductions/formula.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "core/error.hpp"

namespace cswp::reductions {

namespace {

void check_clauses(uint32_t num_vars, const std::vector<Clause>& clauses, std::size_t max_len) {
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    const Clause& clause = clauses[c];
    const auto where = "clause " + std::to_string(c + 1);
    if (clause.empty()) throw Error(ErrorCode::InvalidArgument, where + " is empty");
    if (clause.size() > max_len) {
      throw Error(ErrorCode::InvalidArgument,
                  where + " has " + std::to_string(clause.size()) + " literals (at most " +
                      std::to_string(max_len) + " allowed)");
    }
    for (const Literal& lit : clause) {
      if (lit.var < 1 || lit.var > num_vars) {
        throw Error(ErrorCode::InvalidArgument,
                    where + " references x" + std::to_string(lit.var) + " but only " +
                        std::to_string(num_vars) + " variable(s) exist");
      }
    }
  }
}

}  // namespace

void validate(const MaxSat2Instance& inst) { check_clauses(inst.num_vars, inst.clauses, 2); }

void validate(const SatInstance& inst) {
  check_clauses(inst.num_vars, inst.clauses, static_cast<std::size_t>(-1));
}

bool literal_value(const Literal& lit, const std::vector<bool>& assignment) {
  return assignment[lit.var - 1] != lit.negated;
}

bool clause_satisfied(const Clause& clause, const std::vector<bool>& assignment) {
  return std::any_of(clause.begin(), clause.end(),
                     [&](const Literal& l) { return literal_value(l, assignment); });
}

std::size_t count_satisfied(std::span<const Clause> clauses, const std::vector<bool>& assignment) {
  return static_cast<std::size_t>(std::count_if(
      clauses.begin(), clauses.end(), [&](const Clause& c) { return clause_satisfied(c, assignment); }));
}

Literal parse_literal(std::string_view token) {
  Literal lit;
  auto s = token;
  if (!s.empty() && (s.front() == '-' || s.front() == '!' || s.front() == '~')) {
    lit.negated = true;
    s.remove_prefix(1);
  }
  if (!s.empty() && (s.front() == 'x' || s.front() == 'X')) s.remove_prefix(1);
  uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v == 0) {
    throw Error(ErrorCode::InvalidArgument, "invalid literal '" + std::string(token) + "'");
  }
  lit.var = v;
  return lit;
}

Clause parse_clause(std::string_view text) {
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  Clause clause;
  for (std::string tok; in >> tok;) clause.push_back(parse_literal(tok));
  if (clause.empty()) throw Error(ErrorCode::InvalidArgument, "empty clause '" + std::string(text) + "'");
  return clause;
}

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  bool have_header = false;
  Clause current;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok == "%") continue;
    if (tok == "p") {
      std::string fmt;
      std::size_t nclauses = 0;
      if (!(ls >> fmt >> cnf.num_vars >> nclauses) || fmt != "cnf") {
        throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": malformed DIMACS header");
      }
      have_header = true;
      continue;
    }
    if (!have_header) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": clause before 'p cnf' header");
    }
    do {
      int64_t v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": bad literal '" + tok + "'");
      }
      if (v == 0) {
        if (!current.empty()) cnf.clauses.push_back(std::move(current));
        current.clear();
      } else {
        const int64_t var = v < 0 ? -v : v;
        if (var > int64_t{cnf.num_vars}) {
          throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": variable " + std::to_string(var) +
                                            " exceeds declared count " + std::to_string(cnf.num_vars));
        }
        current.push_back({static_cast<uint32_t>(var), v < 0});
      }
    } while (ls >> tok);
  }
  if (!current.empty()) cnf.clauses.push_back(std::move(current));
  if (!have_header) throw Error(ErrorCode::Parse, "missing DIMACS 'p cnf' header");
  return cnf;
}

std::string format_literal(const Literal& lit) {
  return (lit.negated ? "!x" : "x") + std::to_string(lit.var);
}

}  // namespace cswp::reductions
