#pragma once

#include <string>
#include <string_view>

#include "core/program.hpp"

namespace cswp {

/// Parses the line-based program format. Syntax and arity problems throw
/// Error(Parse) with a 1-based line number; the remaining semantic checks are
/// left to validate_program.
Program parse_program(std::string_view text);

/// Canonical rendering: header (width, mem, free...) then one line per
/// instruction. parse_program(serialize_program(p)) == p.
std::string serialize_program(const Program& program);

std::string format_source(const Source& src);

// Drops a trailing comment. '#' starts a comment unless it opens a #0x constant.
std::string_view strip_comment(std::string_view line);

}  // namespace cswp
