// cswp command-line front end. Everything goes through the public C API.

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cswp/cswp.h"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

// Thrown to unwind to main with an exit code; the message is already printed.
struct Exit {
  int code;
};

[[noreturn]] void usage_error(const std::string& msg) {
  std::cerr << "cswp: " << msg << "\n";
  throw Exit{kExitUsage};
}

void check(cswp_status st) {
  if (st == CSWP_OK) return;
  std::cerr << "cswp: " << cswp_status_name(st) << ": " << cswp_last_error() << "\n";
  throw Exit{kExitDomain};
}

struct StringDeleter {
  void operator()(char* s) const { cswp_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
using ProgramPtr = std::unique_ptr<cswp_program, HandleDeleter<cswp_program, cswp_program_free>>;
using FormulaPtr = std::unique_ptr<cswp_formula, HandleDeleter<cswp_formula, cswp_formula_free>>;
using GridPtr = std::unique_ptr<cswp_grid, HandleDeleter<cswp_grid, cswp_grid_free>>;
using WorstCasePtr = std::unique_ptr<cswp_worst_case, HandleDeleter<cswp_worst_case, cswp_worst_case_free>>;

std::string take(char* s) {
  CString owned(s);
  return owned ? std::string(owned.get()) : std::string();
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) usage_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_readable(const std::string& path) {
  if (path != "-" && !std::filesystem::is_regular_file(path)) usage_error("cannot read '" + path + "'");
}

// Writes to stdout, or atomically replaces `path` (temp file + rename).
void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) usage_error("cannot write '" + path + "'");
    out << text;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      usage_error("failed writing '" + path + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    usage_error("cannot replace '" + path + "': " + ec.message());
  }
}

// key=value lines -> "key,value" CSV when requested.
std::string as_format(const std::string& report, const std::string& format) {
  if (format != "csv") return report;
  std::string out = "key,value\n";
  std::istringstream in(report);
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out += line.substr(0, eq) + "," + line.substr(eq + 1) + "\n";
  }
  return out;
}

uint64_t parse_value(const std::string& text) {
  std::string_view s = text;
  int base = 10;
  if (s.starts_with("0x") || s.starts_with("0X")) {
    s.remove_prefix(2);
    base = 16;
  }
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) usage_error("invalid value '" + text + "'");
  return v;
}

ProgramPtr load_program(const std::string& path) {
  const std::string text = read_input(path);
  cswp_program* raw = nullptr;
  check(cswp_program_parse(text.c_str(), &raw));
  ProgramPtr program(raw);
  char* violations = nullptr;
  const cswp_status st = cswp_program_validate(program.get(), &violations);
  take(violations);
  check(st);
  return program;
}

struct BoundInputs {
  std::vector<std::string> names;
  std::vector<uint64_t> values;

  std::vector<const char*> name_ptrs() const {
    std::vector<const char*> out;
    for (const auto& n : names) out.push_back(n.c_str());
    return out;
  }
};

// "--input name=value"; name may carry the "free" prefix used in source text.
BoundInputs bind_inputs(const cswp_program* program, const std::vector<std::string>& args) {
  BoundInputs b;
  for (const auto& arg : args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) usage_error("expected --input name=value, got '" + arg + "'");
    std::string name = arg.substr(0, eq);
    if (name.starts_with("free")) {
      const std::string bare = name.substr(4);
      for (size_t i = 0; i < cswp_program_free_input_count(program); ++i) {
        if (bare == cswp_program_free_input_name(program, i)) {
          name = bare;
          break;
        }
      }
    }
    b.names.push_back(name);
    b.values.push_back(parse_value(arg.substr(eq + 1)));
  }
  return b;
}

struct FormulaArgs {
  uint32_t vars = 0;
  std::vector<std::string> clauses;
  std::string cnf;
};

void add_formula_options(CLI::App* cmd, FormulaArgs& f) {
  cmd->add_option("--vars", f.vars, "Number of Boolean variables");
  cmd->add_option("--clause", f.clauses, "Clause such as 'x1,!x2' (repeatable)");
  cmd->add_option("--cnf", f.cnf, "DIMACS CNF file")->check(CLI::ExistingFile);
}

FormulaPtr build_formula(const FormulaArgs& args) {
  cswp_formula* raw = nullptr;
  if (!args.cnf.empty()) {
    if (!args.clauses.empty()) usage_error("--cnf and --clause are mutually exclusive");
    check(cswp_formula_parse_dimacs(read_input(args.cnf).c_str(), &raw));
    return FormulaPtr(raw);
  }
  check(cswp_formula_create(args.vars, &raw));
  FormulaPtr f(raw);
  for (const auto& c : args.clauses) check(cswp_formula_add_clause_text(f.get(), c.c_str()));
  return f;
}

std::string serialize(const cswp_program* program) {
  char* text = nullptr;
  check(cswp_program_serialize(program, &text));
  return take(text);
}

GridPtr load_grid(const std::string& path) {
  cswp_grid* raw = nullptr;
  check(cswp_grid_parse_csv(read_input(path).c_str(), &raw));
  return GridPtr(raw);
}

std::vector<double> read_powers(const std::string& path) {
  const std::string text = read_input(path);
  if (text.starts_with("op_a,")) {
    GridPtr grid = load_grid(path);
    std::vector<double> out;
    for (size_t i = 0; i < cswp_grid_size(grid.get()); ++i) out.push_back(cswp_grid_power(grid.get(), i));
    return out;
  }
  std::vector<double> out;
  std::istringstream in(text);
  for (std::string tok; in >> tok;) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) usage_error("invalid power value '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

cswp_energy_model load_model(const std::string& spec) {
  cswp_energy_model model{};
  if (std::filesystem::is_regular_file(spec)) {
    check(cswp_energy_model_parse(read_input(spec).c_str(), &model));
  } else {
    check(cswp_energy_model_preset(spec.c_str(), &model));
  }
  return model;
}

int run(int argc, char** argv) {
  CLI::App app{"Worst-case circuit switching analysis for straight-line programs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cswp_version()));

  std::string out_path;
  std::string format = "text";
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", out_path, "Write output to a file instead of stdout");
    cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "csv"}));
  };

  std::string program_path;
  std::vector<std::string> inputs;

  auto* run_cmd = app.add_subcommand("run", "Execute a program and report its switching");
  run_cmd->add_option("program", program_path, "Program file ('-' for stdin)")->required();
  run_cmd->add_option("--input", inputs, "Free input value, name=value (repeatable)");
  common(run_cmd);

  uint64_t budget = CSWP_DEFAULT_BUDGET;
  unsigned threads = 0;
  auto* solve_cmd = app.add_subcommand("solve", "Exact worst-case switching by exhaustive search");
  solve_cmd->add_option("program", program_path, "Program file ('-' for stdin)")->required();
  solve_cmd->add_option("--budget", budget, "Maximum number of assignments to enumerate");
  solve_cmd->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  common(solve_cmd);

  std::string method = "knownbits";
  auto* bound_cmd = app.add_subcommand("bound", "Sound upper bound on worst-case switching");
  bound_cmd->add_option("program", program_path, "Program file ('-' for stdin)")->required();
  bound_cmd->add_option("--method", method, "Bound method")->check(CLI::IsMember({"coarse", "knownbits"}));
  common(bound_cmd);

  FormulaArgs formula;
  unsigned width = 8;
  auto* maxsat_cmd = app.add_subcommand("reduce-maxsat", "Build the MAXSAT2 switching program");
  add_formula_options(maxsat_cmd, formula);
  maxsat_cmd->add_option("--width", width, "Program width in bits");
  common(maxsat_cmd);

  std::string factor = "1";
  auto* gap_cmd = app.add_subcommand("reduce-sat-gap", "Build the SAT switching-gap program");
  add_formula_options(gap_cmd, formula);
  gap_cmd->add_option("--width", width, "Program width in bits");
  gap_cmd->add_option("--factor", factor, "Switching phase scale factor (>= 1, e.g. 2 or 3/2)");
  common(gap_cmd);

  auto* checksat_cmd = app.add_subcommand("checksat-verify", "Check the emitted clause evaluator exhaustively");
  add_formula_options(checksat_cmd, formula);
  checksat_cmd->add_option("--width", width, "Program width in bits");
  common(checksat_cmd);

  std::string grid_path;
  auto* fit_cmd = app.add_subcommand("fit", "Least-squares Hamming power model fit");
  fit_cmd->add_option("grid", grid_path, "Measurement CSV ('-' for stdin)")->required();
  common(fit_cmd);

  std::string op = "add";
  unsigned grid_width = 8;
  double sigma = 0.0;
  uint64_t seed = 0;
  double base = 50.0;
  double c_in = 1.3;
  double c_out = 4.4;
  auto* grid_cmd = app.add_subcommand("gen-grid", "Generate a synthetic measurement grid");
  grid_cmd->add_option("--op", op, "Two-operand mnemonic");
  grid_cmd->add_option("--width", grid_width, "Operand width in bits (<= 8)");
  grid_cmd->add_option("--sigma", sigma, "Gaussian noise sigma in mW");
  grid_cmd->add_option("--seed", seed, "Noise seed");
  grid_cmd->add_option("--base", base, "Base power in mW");
  grid_cmd->add_option("--c-in", c_in, "mW per input bit set");
  grid_cmd->add_option("--c-out", c_out, "mW per output bit set");
  common(grid_cmd);

  std::string stage = "raw";
  auto* heat_cmd = app.add_subcommand("heatmap", "Dense power matrix for external plotting");
  heat_cmd->add_option("grid", grid_path, "Measurement CSV ('-' for stdin)")->required();
  heat_cmd->add_option("--stage", stage, "Decomposition stage")
      ->check(CLI::IsMember({"raw", "minus-out", "minus-in", "residual"}));
  common(heat_cmd);

  std::string model_spec = "xs1l-paper";
  bool with_input = false;
  auto* energy_cmd = app.add_subcommand("energy", "Estimate the energy of one execution");
  energy_cmd->add_option("program", program_path, "Program file ('-' for stdin)")->required();
  energy_cmd->add_option("--model", model_spec, "Preset name or model file");
  energy_cmd->add_option("--input", inputs, "Free input value, name=value (repeatable)");
  energy_cmd->add_flag("--with-input-term", with_input, "Add the input-operand Hamming term");
  common(energy_cmd);

  double tdual = 0;
  std::string powers_path;
  std::vector<double> powers;
  auto* power_cmd = app.add_subcommand("summarize-power", "Dynamic power range against idle power");
  power_cmd->add_option("--tdual", tdual, "Dual-core idle power in mW")->required();
  power_cmd->add_option("powers", powers_path, "Measurement CSV or whitespace-separated powers");
  power_cmd->add_option("--power", powers, "Test power in mW (repeatable)");
  common(power_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (!program_path.empty()) check_readable(program_path);
  if (!grid_path.empty()) check_readable(grid_path);
  if (!powers_path.empty()) check_readable(powers_path);

  if (*run_cmd) {
    ProgramPtr program = load_program(program_path);
    const auto bound = bind_inputs(program.get(), inputs);
    const auto names = bound.name_ptrs();
    char* report = nullptr;
    check(cswp_run(program.get(), names.data(), bound.values.data(), names.size(), &report));
    emit(as_format(take(report), format), out_path);
  } else if (*solve_cmd) {
    ProgramPtr program = load_program(program_path);
    cswp_worst_case* raw = nullptr;
    check(cswp_solve(program.get(), budget, threads, &raw));
    WorstCasePtr wc(raw);
    char* report = nullptr;
    check(cswp_worst_case_report(program.get(), wc.get(), &report));
    emit(as_format(take(report), format), out_path);
  } else if (*bound_cmd) {
    ProgramPtr program = load_program(program_path);
    uint64_t value = 0;
    check(cswp_bound(program.get(), method == "coarse" ? CSWP_BOUND_COARSE : CSWP_BOUND_KNOWNBITS, &value));
    emit(as_format(method + "=" + std::to_string(value) + "\n", format), out_path);
  } else if (*maxsat_cmd) {
    FormulaPtr f = build_formula(formula);
    cswp_program* raw = nullptr;
    check(cswp_reduce_maxsat2(f.get(), width, &raw));
    emit(serialize(ProgramPtr(raw).get()), out_path);
  } else if (*gap_cmd) {
    FormulaPtr f = build_formula(formula);
    uint64_t num = 1;
    uint64_t den = 1;
    check(cswp_parse_ratio(factor.c_str(), &num, &den));
    cswp_program* raw = nullptr;
    check(cswp_reduce_sat_gap(f.get(), width, num, den, &raw));
    emit(serialize(ProgramPtr(raw).get()), out_path);
  } else if (*checksat_cmd) {
    FormulaPtr f = build_formula(formula);
    char* report = nullptr;
    const cswp_status st = cswp_checksat_verify(f.get(), width, &report);
    if (report != nullptr) emit(as_format(take(report), format), out_path);
    check(st);
  } else if (*fit_cmd) {
    GridPtr grid = load_grid(grid_path);
    char* report = nullptr;
    check(cswp_fit_report(grid.get(), &report));
    emit(as_format(take(report), format), out_path);
  } else if (*grid_cmd) {
    cswp_grid* raw = nullptr;
    check(cswp_grid_generate(op.c_str(), grid_width, base, c_in, c_out, sigma, seed, &raw));
    GridPtr grid(raw);
    char* csv = nullptr;
    check(cswp_grid_to_csv(grid.get(), &csv));
    emit(take(csv), out_path);
  } else if (*heat_cmd) {
    GridPtr grid = load_grid(grid_path);
    char* csv = nullptr;
    check(cswp_heatmap(grid.get(), stage.c_str(), &csv));
    emit(take(csv), out_path);
  } else if (*energy_cmd) {
    const cswp_energy_model model = load_model(model_spec);
    ProgramPtr program = load_program(program_path);
    const auto bound = bind_inputs(program.get(), inputs);
    const auto names = bound.name_ptrs();
    char* report = nullptr;
    check(cswp_trace_energy_report(program.get(), names.data(), bound.values.data(), names.size(), &model,
                                   with_input ? 1 : 0, &report));
    emit(as_format(take(report), format), out_path);
  } else if (*power_cmd) {
    if (!powers_path.empty()) {
      const auto more = read_powers(powers_path);
      powers.insert(powers.end(), more.begin(), more.end());
    }
    cswp_power_summary summary{};
    check(cswp_summarize_power(tdual, powers.data(), powers.size(), &summary));
    char* report = nullptr;
    check(cswp_power_summary_report(&summary, &report));
    emit(as_format(take(report), format), out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Exit& e) {
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "cswp: " << e.what() << "\n";
    return kExitDomain;
  }
}
