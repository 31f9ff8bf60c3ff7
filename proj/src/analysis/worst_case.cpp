#include "analysis/worst_case.hpp"

#include <algorithm>
#include <thread>

#include "core/bitvector.hpp"
#include "core/error.hpp"

namespace cswp::analysis {

namespace {

uint64_t domain_size(const FreeInput& in, unsigned width) {
  if (in.domain == Domain::Binary01) return 2;
  return width >= 64 ? 0 : uint64_t{1} << width;  // 0 marks 2^64
}

struct SliceBest {
  uint64_t max = 0;
  uint64_t index = 0;
  bool found = false;
};

// Mixed-radix decode with the last input varying fastest, so index order is
// lexicographic order over the assignment tuple.
void decode(uint64_t index, const std::vector<uint64_t>& radix, Assignment& out) {
  for (std::size_t k = radix.size(); k-- > 0;) {
    out[k] = index % radix[k];
    index /= radix[k];
  }
}

SliceBest scan(const Program& program, const std::vector<uint64_t>& radix, uint64_t lo, uint64_t hi) {
  SliceBest best;
  if (lo >= hi) return best;
  Machine machine(program);
  Assignment a(radix.size());
  decode(lo, radix, a);
  for (uint64_t idx = lo; idx < hi; ++idx) {
    const uint64_t s = machine.total_switching(a);
    if (!best.found || s > best.max) best = {s, idx, true};
    for (std::size_t k = radix.size(); k-- > 0;) {
      if (++a[k] < radix[k]) break;
      a[k] = 0;
    }
  }
  return best;
}

std::vector<bool> bools_of(uint64_t index, uint32_t n) {
  std::vector<bool> out(n);
  for (uint32_t i = 0; i < n; ++i) out[i] = ((index >> (n - 1 - i)) & 1) != 0;
  return out;
}

void check_vars_budget(uint32_t n, uint64_t budget) {
  if (n >= 64 || (uint64_t{1} << n) > budget) {
    throw Error(ErrorCode::BudgetExceeded, "enumeration requires 2^" + std::to_string(n) +
                                               " assignments, budget is " + std::to_string(budget));
  }
}

}  // namespace

std::optional<uint64_t> enumeration_size(const Program& program) {
  uint64_t total = 1;
  for (const auto& in : program.free_inputs) {
    const uint64_t d = domain_size(in, program.width);
    if (d == 0 || total > UINT64_MAX / d) return std::nullopt;
    total *= d;
  }
  return total;
}

WorstCaseResult brute_force_worst_case(const Program& program, uint64_t budget, unsigned workers) {
  require_valid(program);
  const auto size = enumeration_size(program);
  if (!size || *size > budget) {
    unsigned bits = 0;
    for (const auto& in : program.free_inputs) bits += in.domain == Domain::Binary01 ? 1 : program.width;
    const std::string need = size ? std::to_string(*size) : "2^" + std::to_string(bits);
    throw Error(ErrorCode::BudgetExceeded,
                "exhaustive search needs " + need + " assignments, budget is " + std::to_string(budget));
  }

  std::vector<uint64_t> radix;
  for (const auto& in : program.free_inputs) radix.push_back(domain_size(in, program.width));

  const uint64_t total = *size;
  const uint64_t parts = std::clamp<uint64_t>(workers, 1, total);
  std::vector<SliceBest> results(parts);
  auto bounds = [&](uint64_t p) { return total / parts * p + std::min(p, total % parts); };

  if (parts == 1) {
    results[0] = scan(program, radix, 0, total);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(parts);
    for (uint64_t p = 0; p < parts; ++p) {
      threads.emplace_back([&, p] { results[p] = scan(program, radix, bounds(p), bounds(p + 1)); });
    }
  }

  SliceBest best;
  for (const auto& r : results) {
    if (r.found && (!best.found || r.max > best.max)) best = r;
  }
  WorstCaseResult out;
  out.max_switching = best.max;
  out.witness.resize(radix.size());
  decode(best.index, radix, out.witness);
  out.explored = total;
  return out;
}

MaxSatResult maxsat_oracle(const reductions::MaxSat2Instance& instance, uint64_t budget) {
  reductions::validate(instance);
  check_vars_budget(instance.num_vars, budget);
  const uint32_t n = instance.num_vars;
  MaxSatResult best;
  bool found = false;
  for (uint64_t idx = 0; idx < (uint64_t{1} << n); ++idx) {
    auto a = bools_of(idx, n);
    const auto count = reductions::count_satisfied(instance.clauses, a);
    if (!found || count > best.best_count) {
      best = {count, std::move(a)};
      found = true;
    }
  }
  return best;
}

std::optional<std::vector<bool>> sat_oracle(const reductions::SatInstance& instance, uint64_t budget) {
  reductions::validate(instance);
  check_vars_budget(instance.num_vars, budget);
  const uint32_t n = instance.num_vars;
  for (uint64_t idx = 0; idx < (uint64_t{1} << n); ++idx) {
    auto a = bools_of(idx, n);
    if (reductions::count_satisfied(instance.clauses, a) == instance.clauses.size()) {
      return a;
    }
  }
  return std::nullopt;
}

std::string render_worst_case_report(const Program& program, const WorstCaseResult& result, uint64_t coarse,
                                     uint64_t knownbits) {
  std::string out = "max=" + std::to_string(result.max_switching) + "\n";
  for (std::size_t i = 0; i < program.free_inputs.size(); ++i) {
    out += "witness.free" + program.free_inputs[i].name + "=" + to_hex(result.witness[i]) + "\n";
  }
  out += "coarse=" + std::to_string(coarse) + "\n";
  out += "knownbits=" + std::to_string(knownbits) + "\n";
  out += "explored=" + std::to_string(result.explored) + "\n";
  return out;
}

}  // namespace cswp::analysis
