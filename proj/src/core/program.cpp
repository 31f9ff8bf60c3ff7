#include "core/program.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "core/bitvector.hpp"
#include "core/error.hpp"

namespace cswp {

namespace {

struct MnemonicInfo {
  Mnemonic op;
  std::string_view name;
  std::size_t arity;
};

constexpr std::array<MnemonicInfo, 13> kMnemonics{{
    {Mnemonic::Mov, "mov", 1},
    {Mnemonic::Add, "add", 2},
    {Mnemonic::Sub, "sub", 2},
    {Mnemonic::And, "and", 2},
    {Mnemonic::Or, "or", 2},
    {Mnemonic::Xor, "xor", 2},
    {Mnemonic::Not, "not", 1},
    {Mnemonic::Shl, "shl", 2},
    {Mnemonic::Shr, "shr", 2},
    {Mnemonic::Load, "load", 1},
    {Mnemonic::Store, "store", 1},
    {Mnemonic::Ite, "ite", 3},
    {Mnemonic::Eqz, "eqz", 1},
}};

const MnemonicInfo& info(Mnemonic m) {
  return kMnemonics[static_cast<std::size_t>(m)];
}

bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

}  // namespace

std::string to_hex(uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  do {
    out.push_back(kDigits[v & 0xf]);
    v >>= 4;
  } while (v != 0);
  out += "x0";
  std::reverse(out.begin(), out.end());
  return out;
}

std::string_view mnemonic_name(Mnemonic m) { return info(m).name; }

std::optional<Mnemonic> mnemonic_from_name(std::string_view name) {
  for (const auto& mi : kMnemonics) {
    if (mi.name == name) return mi.op;
  }
  return std::nullopt;
}

std::size_t arity(Mnemonic m) { return info(m).arity; }

std::optional<std::size_t> Program::free_index(std::string_view name) const {
  for (std::size_t i = 0; i < free_inputs.size(); ++i) {
    if (free_inputs[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<Violation> validate_program(const Program& program) {
  std::vector<Violation> out;
  auto header = [&](std::string msg) { out.push_back({std::nullopt, std::move(msg)}); };

  const bool width_ok = program.width >= 1 && program.width <= kMaxWidth;
  if (!width_ok) header("width " + std::to_string(program.width) + " outside [1, 64]");
  if (program.mem_size > kMaxMemSize) {
    header("mem size " + std::to_string(program.mem_size) + " exceeds " +
           std::to_string(kMaxMemSize));
  }

  std::set<std::string, std::less<>> names;
  for (const auto& in : program.free_inputs) {
    if (!is_identifier(in.name)) header("free input name '" + in.name + "' is not an identifier");
    if (!names.insert(in.name).second) header("duplicate free input '" + in.name + "'");
  }

  const uint64_t mask = width_ok ? width_mask(program.width) : ~uint64_t{0};
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    const Instruction& insn = program.instructions[i];
    auto at = [&](std::string msg) { out.push_back({i, std::move(msg)}); };
    const auto name = std::string(mnemonic_name(insn.op));

    if (insn.inputs.size() != arity(insn.op)) {
      at("arity: " + name + " takes " + std::to_string(arity(insn.op)) + " input(s), got " +
         std::to_string(insn.inputs.size()));
    }
    if (insn.op == Mnemonic::Store && !insn.mem_dest) {
      at("destination: store requires a memory destination");
    }
    if (insn.op == Mnemonic::Load &&
        (insn.inputs.size() != 1 || !std::holds_alternative<MemSource>(insn.inputs[0]))) {
      at("load input must be a memory read");
    }
    if (insn.mem_dest && *insn.mem_dest >= program.mem_size) {
      at("destination address m[" + std::to_string(*insn.mem_dest) + "] out of range");
    }
    for (const Source& src : insn.inputs) {
      if (const auto* f = std::get_if<FreeSource>(&src)) {
        if (!names.contains(f->name)) at("undeclared free input 'free" + f->name + "'");
      } else if (const auto* c = std::get_if<ConstSource>(&src)) {
        if ((c->value & ~mask) != 0) at("constant " + to_hex(c->value) + " exceeds width");
      } else if (const auto* m = std::get_if<MemSource>(&src)) {
        if (m->addr >= program.mem_size) {
          at("memory read m[" + std::to_string(m->addr) + "] out of range");
        }
      } else if (const auto* o = std::get_if<OutputSource>(&src)) {
        if (o->index >= i) {
          at("forward reference to o" + std::to_string(o->index + 1) + " from o" +
             std::to_string(i + 1));
        }
      }
    }
  }
  return out;
}

std::string format_violation(const Violation& v) {
  if (v.instruction) return "o" + std::to_string(*v.instruction + 1) + ": " + v.message;
  return "header: " + v.message;
}

void require_valid(const Program& program) {
  const auto violations = validate_program(program);
  if (violations.empty()) return;
  std::string msg = "invalid program:";
  for (const auto& v : violations) msg += "\n  " + format_violation(v);
  throw Error(ErrorCode::InvalidProgram, msg);
}

}  // namespace cswp
