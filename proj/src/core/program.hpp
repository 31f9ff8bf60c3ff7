#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cswp {

enum class Mnemonic { Mov, Add, Sub, And, Or, Xor, Not, Shl, Shr, Load, Store, Ite, Eqz };

std::string_view mnemonic_name(Mnemonic m);
std::optional<Mnemonic> mnemonic_from_name(std::string_view name);
std::size_t arity(Mnemonic m);

enum class Domain { Binary01, Full };

struct FreeInput {
  std::string name;
  Domain domain = Domain::Full;

  friend bool operator==(const FreeInput&, const FreeInput&) = default;
};

struct FreeSource {
  std::string name;
  friend bool operator==(const FreeSource&, const FreeSource&) = default;
};

struct ConstSource {
  uint64_t value = 0;
  friend bool operator==(const ConstSource&, const ConstSource&) = default;
};

struct MemSource {
  uint64_t addr = 0;
  friend bool operator==(const MemSource&, const MemSource&) = default;
};

// Zero-based index of an earlier instruction; rendered as o<index+1>.
struct OutputSource {
  std::size_t index = 0;
  friend bool operator==(const OutputSource&, const OutputSource&) = default;
};

using Source = std::variant<FreeSource, ConstSource, MemSource, OutputSource>;

struct Instruction {
  Mnemonic op = Mnemonic::Mov;
  std::vector<Source> inputs;
  // Any instruction may also write its result to memory; store requires it.
  std::optional<uint64_t> mem_dest;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// A straight-line program over width-bit words.
struct Program {
  unsigned width = 8;
  uint64_t mem_size = 0;
  std::vector<FreeInput> free_inputs;
  std::vector<Instruction> instructions;

  std::optional<std::size_t> free_index(std::string_view name) const;

  friend bool operator==(const Program&, const Program&) = default;
};

inline constexpr uint64_t kMaxMemSize = uint64_t{1} << 20;

struct Violation {
  // Instruction index (zero-based), or nullopt for header-level problems.
  std::optional<std::size_t> instruction;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate_program(const Program& program);

std::string format_violation(const Violation& v);

// Throws Error(InvalidProgram) listing every violation.
void require_valid(const Program& program);

}  // namespace cswp
