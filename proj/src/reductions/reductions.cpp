#include "reductions/reductions.hpp"

#include <charconv>
#include <sstream>

#include "core/bitvector.hpp"
#include "core/error.hpp"
#include "core/text_format.hpp"

namespace cswp::reductions {

namespace {

constexpr std::size_t kMaxProgramLength = std::size_t{1} << 26;

void check_width(unsigned width) {
  if (width < 1 || width > kMaxWidth) {
    throw Error(ErrorCode::InvalidArgument, "width " + std::to_string(width) + " outside [1, 64]");
  }
}

Program build_maxsat2(const MaxSat2Instance& instance, unsigned width) {
  const Source zero = ConstSource{0};
  const Source one = ConstSource{1};
  ProgramBuilder b(width, 2 * uint64_t{instance.num_vars});

  // Zero the datapath so the first variable block starts from the same state
  // as every other block.
  b.emit(Mnemonic::Mov, {zero});

  for (uint32_t i = 0; i < instance.num_vars; ++i) {
    const auto free = b.add_free(std::to_string(i), Domain::Binary01);
    const auto out1 = b.emit(Mnemonic::Mov, {free});
    const auto out2 = b.emit(Mnemonic::Xor, {out1, one});
    b.emit(Mnemonic::Store, {out1}, ReducedProgram::lit_to_addr({i + 1, false}));
    b.emit(Mnemonic::Store, {out2}, ReducedProgram::lit_to_addr({i + 1, true}));
    b.emit(Mnemonic::Mov, {zero});
  }

  for (const Clause& clause : instance.clauses) {
    // A unit clause is encoded as the literal or'd with itself.
    const Literal& l1 = clause[0];
    const Literal& l2 = clause.size() > 1 ? clause[1] : clause[0];
    const auto lit1 = b.emit(Mnemonic::Load, {MemSource{ReducedProgram::lit_to_addr(l1)}});
    b.emit(Mnemonic::Xor, {lit1, one});
    b.emit(Mnemonic::Mov, {zero});
    const auto lit2 = b.emit(Mnemonic::Load, {MemSource{ReducedProgram::lit_to_addr(l2)}});
    b.emit(Mnemonic::Xor, {lit2, one});
    b.emit(Mnemonic::Mov, {zero});
    b.emit(Mnemonic::Or, {lit1, lit2});
    b.emit(Mnemonic::Mov, {zero});
  }
  return std::move(b).take();
}

struct BlockConstants {
  uint64_t k_var;
  uint64_t k_clause;
  uint64_t k_sat;
};

// Measures the per-block switching of the emitted gadgets by running them.
BlockConstants realized_constants(unsigned width) {
  const Program var_only = build_maxsat2({1, {}}, width);
  const uint64_t off = evaluate_switching(var_only, Assignment{0}).total;
  const uint64_t on = evaluate_switching(var_only, Assignment{1}).total;
  if (off != on) {
    throw std::logic_error("variable gadget switching depends on the input");
  }

  const Program one_clause = build_maxsat2({1, {{{1, true}}}}, width);
  const uint64_t unsat = evaluate_switching(one_clause, Assignment{1}).total;
  const uint64_t sat = evaluate_switching(one_clause, Assignment{0}).total;
  return {off, unsat - off, sat - unsat};
}

}  // namespace

Ratio parse_ratio(std::string_view text) {
  auto parse_u64 = [&](std::string_view s) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::InvalidArgument, "invalid factor '" + std::string(text) + "'");
    }
    return v;
  };
  Ratio r;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    r = {parse_u64(text.substr(0, slash)), parse_u64(text.substr(slash + 1))};
  } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 9) throw Error(ErrorCode::InvalidArgument, "factor '" + std::string(text) + "' too precise");
    uint64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    r = {parse_u64(text.substr(0, dot)) * den + (frac.empty() ? 0 : parse_u64(frac)), den};
  } else {
    r = {parse_u64(text), 1};
  }
  if (r.den == 0) throw Error(ErrorCode::InvalidArgument, "factor denominator is zero");
  return r;
}

ReducedProgram reduce_maxsat2(const MaxSat2Instance& instance, unsigned width) {
  validate(instance);
  check_width(width);
  const auto k = realized_constants(width);
  ReducedProgram out;
  out.program = build_maxsat2(instance, width);
  out.num_vars = instance.num_vars;
  out.num_clauses = instance.clauses.size();
  out.k_var = k.k_var;
  out.k_clause = k.k_clause;
  out.k_sat = k.k_sat;
  return out;
}

Source emit_checksat(ProgramBuilder& builder, uint64_t var_base_addr, const SatInstance& instance) {
  validate(instance);
  if (var_base_addr + instance.num_vars > builder.program().mem_size) {
    throw Error(ErrorCode::InvalidArgument, "variable block exceeds program memory");
  }
  if (instance.clauses.empty()) return ConstSource{1};

  std::optional<Source> all;
  for (const Clause& clause : instance.clauses) {
    std::optional<Source> any;
    for (const Literal& lit : clause) {
      Source v = builder.emit(Mnemonic::Load, {MemSource{var_base_addr + lit.var - 1}});
      if (lit.negated) v = builder.emit(Mnemonic::Xor, {v, ConstSource{1}});
      any = any ? Source{builder.emit(Mnemonic::Or, {*any, v})} : v;
    }
    all = all ? Source{builder.emit(Mnemonic::And, {*all, *any})} : *any;
  }
  return *all;
}

GapProgram reduce_sat_gap(const SatInstance& instance, unsigned width, Ratio factor) {
  validate(instance);
  check_width(width);
  if (factor.den == 0 || factor.num < factor.den) {
    throw Error(ErrorCode::InvalidArgument, "gap factor must be >= 1");
  }

  const uint64_t base_addr = 0;
  ProgramBuilder b(width, instance.num_vars);

  // Decision phase.
  for (uint32_t i = 0; i < instance.num_vars; ++i) {
    const auto free = b.add_free(std::to_string(i), Domain::Binary01);
    const auto out1 = b.emit(Mnemonic::Mov, {free});
    b.emit(Mnemonic::Store, {out1}, base_addr + i);
  }
  const Source result = emit_checksat(b, base_addr, instance);
  const auto bit_pattern =
      b.emit(Mnemonic::Ite, {result, ConstSource{width_mask(width)}, ConstSource{0}});
  const std::size_t decision_len = b.size();

  // Switching phase: ceil(factor * decision_len / 2) + 1 pattern/zero pairs.
  const unsigned __int128 scaled = static_cast<unsigned __int128>(factor.num) * decision_len;
  const unsigned __int128 halves = 2 * static_cast<unsigned __int128>(factor.den);
  const unsigned __int128 reps = (scaled + halves - 1) / halves + 1;
  if (reps > kMaxProgramLength / 2) {
    throw Error(ErrorCode::InvalidArgument, "gap factor yields a switching phase longer than " +
                                                std::to_string(kMaxProgramLength) + " instructions");
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(reps); ++i) {
    b.emit(Mnemonic::Mov, {bit_pattern});
    b.emit(Mnemonic::Mov, {ConstSource{0}});
  }

  GapProgram out;
  out.num_vars = instance.num_vars;
  out.decision_len = decision_len;
  out.switching_len = b.size() - decision_len;
  out.gap_bits = uint64_t{width} * (out.switching_len - 1);
  out.var_base_addr = base_addr;
  out.program = std::move(b).take();
  return out;
}

Assignment embed_assignment(const Program& program, const std::vector<bool>& bools) {
  if (bools.size() != program.free_inputs.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "expected " + std::to_string(program.free_inputs.size()) + " truth value(s), got " +
                    std::to_string(bools.size()));
  }
  Assignment out;
  out.reserve(bools.size());
  for (bool b : bools) out.push_back(b ? 1 : 0);
  return out;
}

std::vector<bool> recover_assignment(const Program& program, std::span<const uint64_t> witness) {
  if (witness.size() != program.free_inputs.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "expected " + std::to_string(program.free_inputs.size()) + " witness value(s), got " +
                    std::to_string(witness.size()));
  }
  std::vector<bool> out;
  out.reserve(witness.size());
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (witness[i] > 1) {
      throw Error(ErrorCode::Domain, "witness value " + to_hex(witness[i]) + " for free input '" +
                                         program.free_inputs[i].name + "' is not 0 or 1");
    }
    out.push_back(witness[i] == 1);
  }
  return out;
}

CheckSatVerification verify_checksat(const SatInstance& instance, unsigned width) {
  validate(instance);
  check_width(width);
  if (instance.num_vars > 20) {
    throw Error(ErrorCode::BudgetExceeded, "checksat verification enumerates 2^" +
                                               std::to_string(instance.num_vars) +
                                               " assignments; at most 2^20 supported");
  }
  ProgramBuilder b(width, instance.num_vars);
  for (uint32_t i = 0; i < instance.num_vars; ++i) {
    const auto free = b.add_free(std::to_string(i), Domain::Binary01);
    b.emit(Mnemonic::Store, {free}, i);
  }
  const std::size_t first = b.size();
  const Source result = emit_checksat(b, 0, instance);
  // Materialise constant results so they appear on the datapath.
  const auto out = b.emit(Mnemonic::Mov, {result});
  const std::size_t emitted = b.size() - first;

  const Program program = std::move(b).take();
  Machine machine(program);
  CheckSatVerification v;
  v.instructions = emitted;
  const uint64_t total = uint64_t{1} << instance.num_vars;
  Assignment values(instance.num_vars);
  std::vector<bool> bools(instance.num_vars);
  for (uint64_t idx = 0; idx < total; ++idx) {
    for (uint32_t i = 0; i < instance.num_vars; ++i) {
      const bool bit = ((idx >> (instance.num_vars - 1 - i)) & 1) != 0;
      values[i] = bit ? 1 : 0;
      bools[i] = bit;
    }
    machine.total_switching(values);
    const bool expected = count_satisfied(instance.clauses, bools) ==
                          instance.clauses.size();
    const bool got = machine.outputs()[out.index] != 0;
    if (expected) ++v.satisfying;
    if (expected != got) ++v.mismatches;
    ++v.assignments;
  }
  return v;
}

ReductionMeta meta_of(const ReducedProgram& r) {
  ReductionMeta m;
  m.kind = ReductionKind::MaxSat2;
  m.num_vars = r.num_vars;
  m.num_clauses = r.num_clauses;
  m.k_var = r.k_var;
  m.k_clause = r.k_clause;
  m.k_sat = r.k_sat;
  for (uint32_t v = 1; v <= r.num_vars; ++v) {
    for (bool neg : {false, true}) {
      const Literal lit{v, neg};
      m.lit_addrs.emplace_back(lit, ReducedProgram::lit_to_addr(lit));
    }
  }
  return m;
}

ReductionMeta meta_of(const GapProgram& g) {
  ReductionMeta m;
  m.kind = ReductionKind::SatGap;
  m.num_vars = g.num_vars;
  m.decision_len = g.decision_len;
  m.switching_len = g.switching_len;
  m.gap_bits = g.gap_bits;
  for (uint32_t v = 1; v <= g.num_vars; ++v) {
    m.lit_addrs.emplace_back(Literal{v, false}, g.var_base_addr + v - 1);
  }
  return m;
}

std::string format_meta(const ReductionMeta& m) {
  std::ostringstream out;
  out << "# meta k_var=" << m.k_var << " k_clause=" << m.k_clause << " decision_len=" << m.decision_len
      << " switching_len=" << m.switching_len
      << " kind=" << (m.kind == ReductionKind::MaxSat2 ? "maxsat2" : "sat-gap") << " vars=" << m.num_vars
      << " clauses=" << m.num_clauses << " k_sat=" << m.k_sat << " gap_bits=" << m.gap_bits << "\n";
  for (const auto& [lit, addr] : m.lit_addrs) {
    out << "# lit " << format_literal(lit) << " -> m[" << addr << "]\n";
  }
  return out.str();
}

std::optional<ReductionMeta> parse_meta(std::string_view text) {
  std::optional<ReductionMeta> meta;
  std::vector<std::pair<Literal, uint64_t>> lits;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    std::string hash, tag;
    if (!(ls >> hash >> tag) || hash != "#") continue;
    if (tag == "meta") {
      ReductionMeta m;
      for (std::string kv; ls >> kv;) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::Parse, "malformed meta entry '" + kv + "'");
        const auto key = kv.substr(0, eq);
        const auto value = kv.substr(eq + 1);
        if (key == "kind") {
          if (value == "maxsat2") {
            m.kind = ReductionKind::MaxSat2;
          } else if (value == "sat-gap") {
            m.kind = ReductionKind::SatGap;
          } else {
            throw Error(ErrorCode::Parse, "unknown reduction kind '" + value + "'");
          }
          continue;
        }
        uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
          throw Error(ErrorCode::Parse, "malformed meta value '" + kv + "'");
        }
        if (key == "k_var") m.k_var = v;
        else if (key == "k_clause") m.k_clause = v;
        else if (key == "decision_len") m.decision_len = v;
        else if (key == "switching_len") m.switching_len = v;
        else if (key == "vars") m.num_vars = static_cast<uint32_t>(v);
        else if (key == "clauses") m.num_clauses = v;
        else if (key == "k_sat") m.k_sat = v;
        else if (key == "gap_bits") m.gap_bits = v;
      }
      meta = m;
    } else if (tag == "lit") {
      std::string lit, arrow, dest;
      if (!(ls >> lit >> arrow >> dest) || arrow != "->" || dest.size() < 4 || !dest.starts_with("m[") ||
          dest.back() != ']') {
        throw Error(ErrorCode::Parse, "malformed lit line '" + line + "'");
      }
      const auto addr_text = std::string_view(dest).substr(2, dest.size() - 3);
      uint64_t addr = 0;
      auto [ptr, ec] = std::from_chars(addr_text.data(), addr_text.data() + addr_text.size(), addr);
      if (ec != std::errc{} || ptr != addr_text.data() + addr_text.size()) {
        throw Error(ErrorCode::Parse, "malformed lit address '" + dest + "'");
      }
      lits.emplace_back(parse_literal(lit), addr);
    }
  }
  if (meta) meta->lit_addrs = std::move(lits);
  return meta;
}

std::string serialize_with_meta(const Program& program, const ReductionMeta& meta) {
  return format_meta(meta) + serialize_program(program);
}

std::string render_recovery(const ReductionMeta& meta, const Program& program, std::span<const uint64_t> witness,
                            uint64_t max_switching) {
  const auto bools = recover_assignment(program, witness);
  std::string out;
  for (std::size_t i = 0; i < bools.size(); ++i) {
    out += "recovered.x" + std::to_string(i + 1) + "=" + (bools[i] ? "1" : "0") + "\n";
  }
  if (meta.kind == ReductionKind::MaxSat2 && meta.k_sat > 0) {
    const uint64_t constant = meta.k_var * meta.num_vars + meta.k_clause * meta.num_clauses;
    if (max_switching >= constant) {
      out += "satisfied=" + std::to_string((max_switching - constant) / meta.k_sat) + "\n";
    }
  }
  return out;
}

}  // namespace cswp::reductions
