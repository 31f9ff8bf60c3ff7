#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/program.hpp"

namespace cswp {

// Appends instructions and hands back each one's output operand, in the
// style of an emitter that "prints" instructions as it goes.
class ProgramBuilder {
 public:
  ProgramBuilder(unsigned width, uint64_t mem_size) {
    program_.width = width;
    program_.mem_size = mem_size;
  }

  FreeSource add_free(std::string name, Domain domain) {
    program_.free_inputs.push_back({name, domain});
    return FreeSource{std::move(name)};
  }

  OutputSource emit(Mnemonic op, std::vector<Source> inputs,
                    std::optional<uint64_t> mem_dest = std::nullopt) {
    program_.instructions.push_back({op, std::move(inputs), mem_dest});
    return OutputSource{program_.instructions.size() - 1};
  }

  std::size_t size() const { return program_.instructions.size(); }
  const Program& program() const { return program_; }
  Program take() && { return std::move(program_); }

 private:
  Program program_;
};

}  // namespace cswp
