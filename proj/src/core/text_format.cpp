#include "core/text_format.hpp"

#include <charconv>
#include <vector>

#include "core/bitvector.hpp"
#include "core/error.hpp"

namespace cswp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) words.push_back(s.substr(start, i - start));
  }
  return words;
}

class LineParser {
 public:
  explicit LineParser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Parse, "line " + std::to_string(line_) + ": " + msg);
  }

  uint64_t number(std::string_view s, int base, std::string_view what) const {
    uint64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v, base);
    if (s.empty() || ec != std::errc{} || ptr != end) {
      fail("invalid " + std::string(what) + " '" + std::string(s) + "'");
    }
    return v;
  }

  uint64_t address(std::string_view s) const {
    if (s.size() < 3 || !s.starts_with("m[") || !s.ends_with("]")) {
      fail("expected m[<addr>], got '" + std::string(s) + "'");
    }
    return number(s.substr(2, s.size() - 3), 10, "address");
  }

  Source source(std::string_view s) const {
    if (s.starts_with("free")) {
      auto name = s.substr(4);
      if (name.empty()) fail("free source without a name");
      return FreeSource{std::string(name)};
    }
    if (s.starts_with("#0x") || s.starts_with("#0X")) return ConstSource{number(s.substr(3), 16, "constant")};
    if (s.starts_with("m[")) return MemSource{address(s)};
    if (s.starts_with("o")) {
      const uint64_t j = number(s.substr(1), 10, "output reference");
      if (j == 0) fail("output references are 1-based");
      return OutputSource{static_cast<std::size_t>(j - 1)};
    }
    fail("unrecognised source '" + std::string(s) + "'");
  }

 private:
  std::size_t line_;
};

}  // namespace

std::string_view strip_comment(std::string_view line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] != '#') continue;
    const auto rest = line.substr(i + 1);
    if (rest.starts_with("0x") || rest.starts_with("0X")) continue;
    return line.substr(0, i);
  }
  return line;
}

Program parse_program(std::string_view text) {
  Program program;
  bool have_width = false;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    LineParser p(line_no);
    const auto words = split_words(line);
    const auto head = words.front();
    const bool in_body = !program.instructions.empty();

    if (head == "width" || head == "mem" || head == "free") {
      if (in_body) p.fail("header line after the first instruction");
      if (head == "width") {
        if (words.size() != 2) p.fail("expected 'width <w>'");
        if (have_width) p.fail("duplicate width");
        program.width = static_cast<unsigned>(p.number(words[1], 10, "width"));
        have_width = true;
      } else if (head == "mem") {
        if (words.size() != 2) p.fail("expected 'mem <size>'");
        program.mem_size = p.number(words[1], 10, "memory size");
      } else {
        if (words.size() != 3) p.fail("expected 'free <name> <01|full>'");
        Domain domain;
        if (words[2] == "01") {
          domain = Domain::Binary01;
        } else if (words[2] == "full") {
          domain = Domain::Full;
        } else {
          p.fail("unknown domain '" + std::string(words[2]) + "'");
        }
        program.free_inputs.push_back({std::string(words[1]), domain});
      }
      continue;
    }

    if (!head.starts_with("o") || !head.ends_with(":")) {
      p.fail("expected a header or 'o<i>:' instruction line, got '" + std::string(head) + "'");
    }
    if (!have_width) p.fail("instruction before 'width' header");
    const uint64_t index = p.number(head.substr(1, head.size() - 2), 10, "instruction index");
    if (index != program.instructions.size() + 1) {
      p.fail("instruction index o" + std::to_string(index) + " out of sequence (expected o" +
             std::to_string(program.instructions.size() + 1) + ")");
    }

    auto body = trim(line.substr(head.size()));
    Instruction insn;
    if (const auto arrow = body.find("->"); arrow != std::string_view::npos) {
      insn.mem_dest = p.address(trim(body.substr(arrow + 2)));
      body = trim(body.substr(0, arrow));
    }
    const auto space = body.find_first_of(" \t");
    const auto mnemonic = body.substr(0, space);
    const auto op = mnemonic_from_name(mnemonic);
    if (!op) p.fail("unknown mnemonic '" + std::string(mnemonic) + "'");
    insn.op = *op;

    auto args = space == std::string_view::npos ? std::string_view{} : trim(body.substr(space));
    while (!args.empty()) {
      const auto comma = args.find(',');
      const auto tok = trim(args.substr(0, comma));
      if (tok.empty()) p.fail("empty operand");
      insn.inputs.push_back(p.source(tok));
      if (comma == std::string_view::npos) break;
      args = args.substr(comma + 1);
      if (trim(args).empty()) p.fail("trailing comma");
    }
    if (insn.inputs.size() != arity(insn.op)) {
      p.fail("arity: " + std::string(mnemonic) + " takes " + std::to_string(arity(insn.op)) +
             " operand(s), got " + std::to_string(insn.inputs.size()));
    }
    program.instructions.push_back(std::move(insn));
  }

  if (!have_width) throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": missing 'width' header");
  return program;
}

std::string format_source(const Source& src) {
  if (const auto* f = std::get_if<FreeSource>(&src)) return "free" + f->name;
  if (const auto* c = std::get_if<ConstSource>(&src)) return "#" + to_hex(c->value);
  if (const auto* m = std::get_if<MemSource>(&src)) return "m[" + std::to_string(m->addr) + "]";
  return "o" + std::to_string(std::get<OutputSource>(src).index + 1);
}

std::string serialize_program(const Program& program) {
  std::string out;
  out += "width " + std::to_string(program.width) + "\n";
  out += "mem " + std::to_string(program.mem_size) + "\n";
  for (const auto& in : program.free_inputs) {
    out += "free " + in.name + (in.domain == Domain::Binary01 ? " 01\n" : " full\n");
  }
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    const Instruction& insn = program.instructions[i];
    out += "o" + std::to_string(i + 1) + ": " + std::string(mnemonic_name(insn.op));
    for (std::size_t k = 0; k < insn.inputs.size(); ++k) {
      out += (k == 0 ? " " : ", ") + format_source(insn.inputs[k]);
    }
    if (insn.mem_dest) out += " -> m[" + std::to_string(*insn.mem_dest) + "]";
    out += "\n";
  }
  return out;
}

}  // namespace cswp
