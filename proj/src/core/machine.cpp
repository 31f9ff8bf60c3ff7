#include "core/machine.hpp"

#include <array>

#include "core/error.hpp"

namespace cswp {

Assignment bind_assignment(const Program& program, const NamedAssignment& named) {
  Assignment out(program.free_inputs.size());
  for (std::size_t i = 0; i < program.free_inputs.size(); ++i) {
    auto it = named.find(program.free_inputs[i].name);
    if (it == named.end()) {
      throw Error(ErrorCode::InvalidArgument,
                  "missing value for free input '" + program.free_inputs[i].name + "'");
    }
    out[i] = it->second;
  }
  for (const auto& [name, value] : named) {
    if (!program.free_index(name)) {
      throw Error(ErrorCode::InvalidArgument, "unknown free input '" + name + "'");
    }
  }
  return out;
}

void check_assignment(const Program& program, std::span<const uint64_t> values) {
  if (values.size() != program.free_inputs.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "assignment has " + std::to_string(values.size()) + " value(s), program declares " +
                    std::to_string(program.free_inputs.size()) + " free input(s)");
  }
  const uint64_t mask = width_mask(program.width);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& in = program.free_inputs[i];
    const bool ok = in.domain == Domain::Binary01 ? values[i] <= 1 : (values[i] & ~mask) == 0;
    if (!ok) {
      throw Error(ErrorCode::Domain, "value " + to_hex(values[i]) + " outside domain of free input '" +
                                         in.name + "'");
    }
  }
}

uint64_t apply_op(Mnemonic op, std::span<const uint64_t> v, unsigned width) {
  const uint64_t mask = width_mask(width);
  switch (op) {
    case Mnemonic::Mov:
    case Mnemonic::Load:
    case Mnemonic::Store:
      return v[0] & mask;
    case Mnemonic::Add:
      return (v[0] + v[1]) & mask;
    case Mnemonic::Sub:
      return (v[0] - v[1]) & mask;
    case Mnemonic::And:
      return v[0] & v[1] & mask;
    case Mnemonic::Or:
      return (v[0] | v[1]) & mask;
    case Mnemonic::Xor:
      return (v[0] ^ v[1]) & mask;
    case Mnemonic::Not:
      return ~v[0] & mask;
    case Mnemonic::Shl:
      return (v[0] << (v[1] % width)) & mask;
    case Mnemonic::Shr:
      return ((v[0] & mask) >> (v[1] % width)) & mask;
    case Mnemonic::Ite:
      return (v[0] != 0 ? v[1] : v[2]) & mask;
    case Mnemonic::Eqz:
      return (v[0] & mask) == 0 ? 1 : 0;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mnemonic");
}

namespace {

struct Resolver {
  const Program& program;
  std::span<const uint64_t> assignment;
  std::span<const uint64_t> outputs;
  std::span<const uint64_t> memory;

  uint64_t operator()(const FreeSource& f) const { return assignment[*program.free_index(f.name)]; }
  uint64_t operator()(const ConstSource& c) const { return c.value; }
  uint64_t operator()(const MemSource& m) const { return memory[m.addr]; }
  uint64_t operator()(const OutputSource& o) const { return outputs[o.index]; }
};

}  // namespace

ExecutionTrace execute(const Program& program, std::span<const uint64_t> assignment) {
  require_valid(program);
  check_assignment(program, assignment);

  const unsigned w = program.width;
  std::vector<uint64_t> outputs(program.instructions.size());
  std::vector<uint64_t> memory(program.mem_size, 0);
  ExecutionTrace trace;
  trace.operands.reserve(program.instructions.size());

  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    const Instruction& insn = program.instructions[i];
    Resolver resolve{program, assignment, outputs, memory};
    std::array<uint64_t, 3> vals{};
    std::vector<BitVector> ops;
    for (std::size_t k = 0; k < insn.inputs.size(); ++k) {
      vals[k] = std::visit(resolve, insn.inputs[k]);
      ops.emplace_back(vals[k], w);
    }
    outputs[i] = apply_op(insn.op, std::span(vals.data(), insn.inputs.size()), w);
    if (insn.mem_dest) memory[*insn.mem_dest] = outputs[i];
    trace.operands.push_back(std::move(ops));
  }

  trace.outputs.reserve(outputs.size());
  for (uint64_t o : outputs) trace.outputs.emplace_back(o, w);
  trace.final_memory.reserve(memory.size());
  for (uint64_t m : memory) trace.final_memory.emplace_back(m, w);
  return trace;
}

ExecutionTrace execute(const Program& program, const NamedAssignment& assignment) {
  return execute(program, bind_assignment(program, assignment));
}

SwitchingReport switching_of(const ExecutionTrace& trace) {
  SwitchingReport report;
  for (std::size_t i = 0; i + 1 < trace.outputs.size(); ++i) {
    const unsigned h = hamming_distance(trace.outputs[i], trace.outputs[i + 1]);
    report.transitions.push_back(h);
    report.total += h;
  }
  return report;
}

SwitchingReport evaluate_switching(const Program& program, std::span<const uint64_t> assignment) {
  return switching_of(execute(program, assignment));
}

SwitchingReport evaluate_switching(const Program& program, const NamedAssignment& assignment) {
  return switching_of(execute(program, assignment));
}

Machine::Machine(const Program& program)
    : width_(program.width),
      outputs_(program.instructions.size()),
      memory_(program.mem_size, 0) {
  require_valid(program);
  steps_.reserve(program.instructions.size());
  for (const Instruction& insn : program.instructions) {
    Step step{insn.op, insn.inputs.size(), {}, insn.mem_dest.has_value(), insn.mem_dest.value_or(0)};
    for (std::size_t k = 0; k < insn.inputs.size(); ++k) {
      const Source& src = insn.inputs[k];
      if (const auto* f = std::get_if<FreeSource>(&src)) {
        step.inputs[k] = {Kind::Free, *program.free_index(f->name)};
      } else if (const auto* c = std::get_if<ConstSource>(&src)) {
        step.inputs[k] = {Kind::Const, c->value};
      } else if (const auto* m = std::get_if<MemSource>(&src)) {
        step.inputs[k] = {Kind::Mem, m->addr};
      } else {
        step.inputs[k] = {Kind::Output, std::get<OutputSource>(src).index};
      }
    }
    steps_.push_back(step);
  }
}

void Machine::run(std::span<const uint64_t> assignment) {
  // Only cells written by the previous run need clearing.
  for (uint64_t addr : written_) memory_[addr] = 0;
  written_.clear();

  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const Step& step = steps_[i];
    std::array<uint64_t, 3> vals{};
    for (std::size_t k = 0; k < step.count; ++k) {
      const Operand& in = step.inputs[k];
      switch (in.kind) {
        case Kind::Free: vals[k] = assignment[in.payload]; break;
        case Kind::Const: vals[k] = in.payload; break;
        case Kind::Mem: vals[k] = memory_[in.payload]; break;
        case Kind::Output: vals[k] = outputs_[in.payload]; break;
      }
    }
    outputs_[i] = apply_op(step.op, std::span(vals.data(), step.count), width_);
    if (step.writes_memory) {
      memory_[step.dest] = outputs_[i];
      written_.push_back(step.dest);
    }
  }
}

uint64_t Machine::total_switching(std::span<const uint64_t> assignment) {
  run(assignment);
  uint64_t total = 0;
  for (std::size_t i = 0; i + 1 < outputs_.size(); ++i) {
    total += hamming_weight(outputs_[i] ^ outputs_[i + 1]);
  }
  return total;
}

}  // namespace cswp
