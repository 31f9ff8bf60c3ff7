#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <thread>
#include <utility>

#include "analysis/known_bits.hpp"
#include "analysis/worst_case.hpp"
#include "core/error.hpp"
#include "core/machine.hpp"
#include "core/text_format.hpp"
#include "cswp/cswp.h"
#include "energy/energy.hpp"
#include "reductions/formula.hpp"
#include "reductions/reductions.hpp"

struct cswp_program {
  cswp::Program program;
  std::optional<cswp::reductions::ReductionMeta> meta;
};

struct cswp_worst_case {
  cswp::analysis::WorstCaseResult result;
};

struct cswp_formula {
  uint32_t num_vars = 0;
  std::vector<cswp::reductions::Clause> clauses;
};

struct cswp_grid {
  std::vector<cswp::energy::Measurement> rows;
};

namespace {

thread_local std::string g_last_error;

cswp_status to_status(cswp::ErrorCode code) {
  using cswp::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return CSWP_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return CSWP_ERR_PARSE;
    case ErrorCode::InvalidProgram: return CSWP_ERR_INVALID_PROGRAM;
    case ErrorCode::Domain: return CSWP_ERR_DOMAIN;
    case ErrorCode::BudgetExceeded: return CSWP_ERR_BUDGET_EXCEEDED;
    case ErrorCode::RankDeficient: return CSWP_ERR_RANK_DEFICIENT;
  }
  return CSWP_ERR_INTERNAL;
}

cswp_status fail(cswp_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename Body>
cswp_status guarded(Body&& body) {
  try {
    body();
    return CSWP_OK;
  } catch (const cswp::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CSWP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CSWP_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw cswp::Error(cswp::ErrorCode::InvalidArgument, std::string("null argument: ") + what);
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cswp::Assignment bind(const cswp_program* p, const char* const* names, const uint64_t* values, size_t count) {
  require(count == 0 || (names != nullptr && values != nullptr), "names/values");
  cswp::NamedAssignment named;
  for (size_t i = 0; i < count; ++i) {
    require(names[i] != nullptr, "names[i]");
    if (!named.emplace(names[i], values[i]).second) {
      throw cswp::Error(cswp::ErrorCode::InvalidArgument, std::string("duplicate value for free input '") +
                                                              names[i] + "'");
    }
  }
  return cswp::bind_assignment(p->program, named);
}

template <typename Instance>
Instance instance_of(const cswp_formula* f) {
  Instance inst;
  inst.num_vars = f->num_vars;
  inst.clauses = f->clauses;
  return inst;
}

cswp_energy_model to_c(const cswp::energy::EnergyModel& m) {
  return {m.p_idle_single_mw, m.c_in_mw, m.c_out_mw, m.v_dd, m.f_hz};
}

cswp::energy::EnergyModel from_c(const cswp_energy_model& m) {
  return {m.p_idle_single_mw, m.c_in_mw, m.c_out_mw, m.v_dd, m.f_hz};
}

}  // namespace

extern "C" {

const char* cswp_version(void) { return "1.0.0"; }

const char* cswp_status_name(cswp_status status) {
  switch (status) {
    case CSWP_OK: return "ok";
    case CSWP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CSWP_ERR_PARSE: return "parse error";
    case CSWP_ERR_INVALID_PROGRAM: return "invalid program";
    case CSWP_ERR_DOMAIN: return "domain error";
    case CSWP_ERR_BUDGET_EXCEEDED: return "budget exceeded";
    case CSWP_ERR_RANK_DEFICIENT: return "rank deficient";
    case CSWP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cswp_last_error(void) { return g_last_error.c_str(); }

void cswp_string_free(char* s) { std::free(s); }

cswp_status cswp_program_parse(const char* text, cswp_program** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "text/out");
    auto handle = std::make_unique<cswp_program>();
    handle->program = cswp::parse_program(text);
    handle->meta = cswp::reductions::parse_meta(text);
    *out = handle.release();
  });
}

void cswp_program_free(cswp_program* program) { delete program; }

cswp_status cswp_program_validate(const cswp_program* program, char** violations) {
  bool valid = true;
  const cswp_status st = guarded([&] {
    require(program != nullptr, "program");
    const auto found = cswp::validate_program(program->program);
    std::string text;
    for (const auto& v : found) text += cswp::format_violation(v) + "\n";
    valid = found.empty();
    if (!valid) g_last_error = "invalid program:\n" + text;
    if (violations != nullptr) *violations = dup_string(text);
  });
  if (st != CSWP_OK) return st;
  return valid ? CSWP_OK : CSWP_ERR_INVALID_PROGRAM;
}

cswp_status cswp_program_serialize(const cswp_program* program, char** out) {
  return guarded([&] {
    require(program != nullptr && out != nullptr, "program/out");
    const std::string text = program->meta ? cswp::reductions::serialize_with_meta(program->program, *program->meta)
                                           : cswp::serialize_program(program->program);
    *out = dup_string(text);
  });
}

unsigned cswp_program_width(const cswp_program* program) { return program ? program->program.width : 0; }

size_t cswp_program_length(const cswp_program* program) {
  return program ? program->program.instructions.size() : 0;
}

size_t cswp_program_free_input_count(const cswp_program* program) {
  return program ? program->program.free_inputs.size() : 0;
}

const char* cswp_program_free_input_name(const cswp_program* program, size_t index) {
  if (program == nullptr || index >= program->program.free_inputs.size()) return nullptr;
  return program->program.free_inputs[index].name.c_str();
}

cswp_status cswp_run(const cswp_program* program, const char* const* names, const uint64_t* values, size_t count,
                     char** report) {
  return guarded([&] {
    require(program != nullptr && report != nullptr, "program/report");
    const auto trace = cswp::execute(program->program, bind(program, names, values, count));
    const auto sw = cswp::switching_of(trace);
    std::string text;
    for (size_t i = 0; i < trace.outputs.size(); ++i) {
      text += "o" + std::to_string(i + 1) + "=" + cswp::to_hex(trace.outputs[i].value()) + "\n";
    }
    for (size_t i = 0; i < sw.transitions.size(); ++i) {
      text += "transition." + std::to_string(i + 1) + "=" + std::to_string(sw.transitions[i]) + "\n";
    }
    text += "total=" + std::to_string(sw.total) + "\n";
    *report = dup_string(text);
  });
}

cswp_status cswp_evaluate_switching(const cswp_program* program, const char* const* names, const uint64_t* values,
                                    size_t count, uint64_t* total) {
  return guarded([&] {
    require(program != nullptr && total != nullptr, "program/total");
    *total = cswp::evaluate_switching(program->program, bind(program, names, values, count)).total;
  });
}

cswp_status cswp_solve(const cswp_program* program, uint64_t budget, unsigned workers, cswp_worst_case** out) {
  return guarded([&] {
    require(program != nullptr && out != nullptr, "program/out");
    if (budget == 0) budget = CSWP_DEFAULT_BUDGET;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    auto wc = std::make_unique<cswp_worst_case>();
    wc->result = cswp::analysis::brute_force_worst_case(program->program, budget, workers);
    *out = wc.release();
  });
}

uint64_t cswp_worst_case_max(const cswp_worst_case* wc) { return wc ? wc->result.max_switching : 0; }

uint64_t cswp_worst_case_explored(const cswp_worst_case* wc) { return wc ? wc->result.explored : 0; }

size_t cswp_worst_case_witness_count(const cswp_worst_case* wc) { return wc ? wc->result.witness.size() : 0; }

uint64_t cswp_worst_case_witness(const cswp_worst_case* wc, size_t index) {
  if (wc == nullptr || index >= wc->result.witness.size()) return 0;
  return wc->result.witness[index];
}

cswp_status cswp_worst_case_report(const cswp_program* program, const cswp_worst_case* wc, char** out) {
  return guarded([&] {
    require(program != nullptr && wc != nullptr && out != nullptr, "program/wc/out");
    const auto& p = program->program;
    if (wc->result.witness.size() != p.free_inputs.size()) {
      throw cswp::Error(cswp::ErrorCode::InvalidArgument, "worst case does not belong to this program");
    }
    std::string text = cswp::analysis::render_worst_case_report(
        p, wc->result, cswp::analysis::coarse_upper_bound(p), cswp::analysis::knownbits_upper_bound(p));
    if (program->meta) {
      text += cswp::reductions::render_recovery(*program->meta, p, wc->result.witness, wc->result.max_switching);
    }
    *out = dup_string(text);
  });
}

void cswp_worst_case_free(cswp_worst_case* wc) { delete wc; }

cswp_status cswp_bound(const cswp_program* program, cswp_bound_method method, uint64_t* out) {
  return guarded([&] {
    require(program != nullptr && out != nullptr, "program/out");
    cswp::require_valid(program->program);
    switch (method) {
      case CSWP_BOUND_COARSE: *out = cswp::analysis::coarse_upper_bound(program->program); return;
      case CSWP_BOUND_KNOWNBITS: *out = cswp::analysis::knownbits_upper_bound(program->program); return;
    }
    throw cswp::Error(cswp::ErrorCode::InvalidArgument, "unknown bound method");
  });
}

cswp_status cswp_formula_create(uint32_t num_vars, cswp_formula** out) {
  return guarded([&] {
    require(out != nullptr, "out");
    auto f = std::make_unique<cswp_formula>();
    f->num_vars = num_vars;
    *out = f.release();
  });
}

cswp_status cswp_formula_add_clause(cswp_formula* formula, const int32_t* literals, size_t count) {
  return guarded([&] {
    require(formula != nullptr && (count == 0 || literals != nullptr), "formula/literals");
    cswp::reductions::Clause clause;
    for (size_t i = 0; i < count; ++i) {
      const int32_t v = literals[i];
      if (v == 0 || v == INT32_MIN) throw cswp::Error(cswp::ErrorCode::InvalidArgument, "literal 0 is not allowed");
      clause.push_back({static_cast<uint32_t>(v < 0 ? -v : v), v < 0});
    }
    if (clause.empty()) throw cswp::Error(cswp::ErrorCode::InvalidArgument, "empty clause");
    for (const auto& lit : clause) {
      if (lit.var > formula->num_vars) {
        throw cswp::Error(cswp::ErrorCode::InvalidArgument,
                          "literal x" + std::to_string(lit.var) + " exceeds " + std::to_string(formula->num_vars) +
                              " variable(s)");
      }
    }
    formula->clauses.push_back(std::move(clause));
  });
}

cswp_status cswp_formula_add_clause_text(cswp_formula* formula, const char* text) {
  return guarded([&] {
    require(formula != nullptr && text != nullptr, "formula/text");
    auto clause = cswp::reductions::parse_clause(text);
    for (const auto& lit : clause) {
      if (lit.var > formula->num_vars) {
        throw cswp::Error(cswp::ErrorCode::InvalidArgument,
                          "literal x" + std::to_string(lit.var) + " exceeds " + std::to_string(formula->num_vars) +
                              " variable(s)");
      }
    }
    formula->clauses.push_back(std::move(clause));
  });
}

cswp_status cswp_formula_parse_dimacs(const char* text, cswp_formula** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "text/out");
    auto cnf = cswp::reductions::parse_dimacs(text);
    cswp::reductions::validate(cswp::reductions::SatInstance{cnf.num_vars, cnf.clauses});
    auto f = std::make_unique<cswp_formula>();
    f->num_vars = cnf.num_vars;
    f->clauses = std::move(cnf.clauses);
    *out = f.release();
  });
}

uint32_t cswp_formula_num_vars(const cswp_formula* formula) { return formula ? formula->num_vars : 0; }

size_t cswp_formula_num_clauses(const cswp_formula* formula) { return formula ? formula->clauses.size() : 0; }

void cswp_formula_free(cswp_formula* formula) { delete formula; }

cswp_status cswp_maxsat_oracle(const cswp_formula* formula, uint64_t budget, size_t* best_count, int* assignment) {
  return guarded([&] {
    require(formula != nullptr && best_count != nullptr, "formula/best_count");
    if (budget == 0) budget = CSWP_DEFAULT_BUDGET;
    const auto r = cswp::analysis::maxsat_oracle(instance_of<cswp::reductions::MaxSat2Instance>(formula), budget);
    *best_count = r.best_count;
    if (assignment != nullptr) {
      for (size_t i = 0; i < r.assignment.size(); ++i) assignment[i] = r.assignment[i] ? 1 : 0;
    }
  });
}

cswp_status cswp_sat_oracle(const cswp_formula* formula, uint64_t budget, int* satisfiable, int* model) {
  return guarded([&] {
    require(formula != nullptr && satisfiable != nullptr, "formula/satisfiable");
    if (budget == 0) budget = CSWP_DEFAULT_BUDGET;
    const auto r = cswp::analysis::sat_oracle(instance_of<cswp::reductions::SatInstance>(formula), budget);
    *satisfiable = r ? 1 : 0;
    if (r && model != nullptr) {
      for (size_t i = 0; i < r->size(); ++i) model[i] = (*r)[i] ? 1 : 0;
    }
  });
}

cswp_status cswp_reduce_maxsat2(const cswp_formula* formula, unsigned width, cswp_program** out) {
  return guarded([&] {
    require(formula != nullptr && out != nullptr, "formula/out");
    auto reduced =
        cswp::reductions::reduce_maxsat2(instance_of<cswp::reductions::MaxSat2Instance>(formula), width);
    auto handle = std::make_unique<cswp_program>();
    handle->meta = cswp::reductions::meta_of(reduced);
    handle->program = std::move(reduced.program);
    *out = handle.release();
  });
}

cswp_status cswp_reduce_sat_gap(const cswp_formula* formula, unsigned width, uint64_t factor_num,
                                uint64_t factor_den, cswp_program** out) {
  return guarded([&] {
    require(formula != nullptr && out != nullptr, "formula/out");
    auto gap = cswp::reductions::reduce_sat_gap(instance_of<cswp::reductions::SatInstance>(formula), width,
                                                {factor_num, factor_den});
    auto handle = std::make_unique<cswp_program>();
    handle->meta = cswp::reductions::meta_of(gap);
    handle->meta->num_clauses = formula->clauses.size();
    handle->program = std::move(gap.program);
    *out = handle.release();
  });
}

cswp_status cswp_parse_ratio(const char* text, uint64_t* num, uint64_t* den) {
  return guarded([&] {
    require(text != nullptr && num != nullptr && den != nullptr, "text/num/den");
    const auto r = cswp::reductions::parse_ratio(text);
    *num = r.num;
    *den = r.den;
  });
}

cswp_status cswp_program_reduction_info(const cswp_program* program, cswp_reduction_info* out) {
  return guarded([&] {
    require(program != nullptr && out != nullptr, "program/out");
    if (!program->meta) {
      throw cswp::Error(cswp::ErrorCode::InvalidArgument, "program carries no reduction metadata");
    }
    const auto& m = *program->meta;
    *out = {m.kind == cswp::reductions::ReductionKind::MaxSat2 ? CSWP_REDUCTION_MAXSAT2 : CSWP_REDUCTION_SAT_GAP,
            m.num_vars,
            m.num_clauses,
            m.k_var,
            m.k_clause,
            m.k_sat,
            m.decision_len,
            m.switching_len,
            m.gap_bits};
  });
}

cswp_status cswp_embed_assignment(const cswp_program* program, const int* bools, size_t count, uint64_t* values) {
  return guarded([&] {
    require(program != nullptr && values != nullptr && (count == 0 || bools != nullptr), "program/bools/values");
    std::vector<bool> b(bools, bools + count);
    const auto embedded = cswp::reductions::embed_assignment(program->program, b);
    std::copy(embedded.begin(), embedded.end(), values);
  });
}

cswp_status cswp_recover_assignment(const cswp_program* program, const uint64_t* witness, size_t count,
                                    int* bools) {
  return guarded([&] {
    require(program != nullptr && bools != nullptr && (count == 0 || witness != nullptr), "program/witness/bools");
    const auto recovered =
        cswp::reductions::recover_assignment(program->program, std::span<const uint64_t>(witness, count));
    for (size_t i = 0; i < recovered.size(); ++i) bools[i] = recovered[i] ? 1 : 0;
  });
}

cswp_status cswp_checksat_verify(const cswp_formula* formula, unsigned width, char** report) {
  uint64_t mismatches = 0;
  const cswp_status st = guarded([&] {
    require(formula != nullptr && report != nullptr, "formula/report");
    const auto v =
        cswp::reductions::verify_checksat(instance_of<cswp::reductions::SatInstance>(formula), width);
    mismatches = v.mismatches;
    std::string text = "vars=" + std::to_string(formula->num_vars) + "\n";
    text += "clauses=" + std::to_string(formula->clauses.size()) + "\n";
    text += "instructions=" + std::to_string(v.instructions) + "\n";
    text += "assignments=" + std::to_string(v.assignments) + "\n";
    text += "satisfying=" + std::to_string(v.satisfying) + "\n";
    text += "mismatches=" + std::to_string(v.mismatches) + "\n";
    text += std::string("satisfiable=") + (v.satisfying > 0 ? "1" : "0") + "\n";
    *report = dup_string(text);
  });
  if (st != CSWP_OK) return st;
  if (mismatches != 0) return fail(CSWP_ERR_INTERNAL, "emitted clause evaluator disagrees with direct evaluation");
  return CSWP_OK;
}

cswp_status cswp_energy_model_preset(const char* name, cswp_energy_model* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "name/out");
    *out = to_c(cswp::energy::preset_model(name));
  });
}

cswp_status cswp_energy_model_parse(const char* text, cswp_energy_model* out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "text/out");
    *out = to_c(cswp::energy::parse_model(text));
  });
}

double cswp_predict_power(const cswp_energy_model* model, double base_mw, double h_in, double h_out) {
  if (model == nullptr) return base_mw;
  return cswp::energy::predict_power(from_c(*model), base_mw, h_in, h_out);
}

cswp_status cswp_trace_energy(const cswp_program* program, const char* const* names, const uint64_t* values,
                              size_t count, const cswp_energy_model* model, int include_input_term,
                              double* energy_nj) {
  return guarded([&] {
    require(program != nullptr && model != nullptr && energy_nj != nullptr, "program/model/energy_nj");
    *energy_nj = cswp::energy::trace_energy_nj(program->program, bind(program, names, values, count), from_c(*model),
                                               include_input_term != 0);
  });
}

cswp_status cswp_trace_energy_report(const cswp_program* program, const char* const* names, const uint64_t* values,
                                     size_t count, const cswp_energy_model* model, int include_input_term,
                                     char** report) {
  return guarded([&] {
    require(program != nullptr && model != nullptr && report != nullptr, "program/model/report");
    const auto trace = cswp::execute(program->program, bind(program, names, values, count));
    const double nj = cswp::energy::trace_energy_nj(trace, from_c(*model), include_input_term != 0);
    std::string text = "cycles=" + std::to_string(trace.outputs.size()) + "\n";
    text += "total_switching=" + std::to_string(cswp::switching_of(trace).total) + "\n";
    text += "energy_nj=" + cswp::energy::format_fixed(nj, 6) + "\n";
    *report = dup_string(text);
  });
}

cswp_status cswp_dynamic_power(double alpha, double c_sw_farads, double v_dd, double f_hz, double* watts) {
  return guarded([&] {
    require(watts != nullptr, "watts");
    *watts = cswp::energy::dynamic_power(alpha, c_sw_farads, v_dd, f_hz);
  });
}

cswp_status cswp_summarize_power(double p_tdual_mw, const double* powers_mw, size_t count, cswp_power_summary* out) {
  return guarded([&] {
    require(out != nullptr && (count == 0 || powers_mw != nullptr), "powers/out");
    const auto s = cswp::energy::summarize_power(p_tdual_mw, std::span<const double>(powers_mw, count));
    *out = {s.p_tdual, s.p_tsingle, s.p_dmin, s.p_dmax, s.p_drng, s.pct_min, s.pct_max};
  });
}

cswp_status cswp_power_summary_report(const cswp_power_summary* summary, char** out) {
  return guarded([&] {
    require(summary != nullptr && out != nullptr, "summary/out");
    const cswp::energy::PowerSummary s{summary->p_tdual_mw, summary->p_tsingle_mw, summary->p_dmin_mw,
                                       summary->p_dmax_mw,  summary->p_drng_mw,    summary->pct_min,
                                       summary->pct_max};
    *out = dup_string(cswp::energy::render_power_summary(s));
  });
}

cswp_status cswp_grid_generate(const char* mnemonic, unsigned width, double base_mw, double c_in_mw,
                               double c_out_mw, double sigma_mw, uint64_t seed, cswp_grid** out) {
  return guarded([&] {
    require(mnemonic != nullptr && out != nullptr, "mnemonic/out");
    const auto op = cswp::mnemonic_from_name(mnemonic);
    if (!op) throw cswp::Error(cswp::ErrorCode::InvalidArgument, std::string("unknown mnemonic '") + mnemonic + "'");
    cswp::energy::EnergyModel model;
    model.c_in_mw = c_in_mw;
    model.c_out_mw = c_out_mw;
    auto g = std::make_unique<cswp_grid>();
    g->rows = cswp::energy::gen_synthetic_grid(*op, width, model, base_mw, sigma_mw, seed);
    *out = g.release();
  });
}

cswp_status cswp_grid_parse_csv(const char* csv, cswp_grid** out) {
  return guarded([&] {
    require(csv != nullptr && out != nullptr, "csv/out");
    auto g = std::make_unique<cswp_grid>();
    g->rows = cswp::energy::parse_grid_csv(csv);
    *out = g.release();
  });
}

cswp_status cswp_grid_to_csv(const cswp_grid* grid, char** out) {
  return guarded([&] {
    require(grid != nullptr && out != nullptr, "grid/out");
    *out = dup_string(cswp::energy::format_grid_csv(grid->rows));
  });
}

size_t cswp_grid_size(const cswp_grid* grid) { return grid ? grid->rows.size() : 0; }

double cswp_grid_power(const cswp_grid* grid, size_t index) {
  if (grid == nullptr || index >= grid->rows.size()) return 0.0;
  return grid->rows[index].power_mw;
}

void cswp_grid_free(cswp_grid* grid) { delete grid; }

cswp_status cswp_fit(const cswp_grid* grid, cswp_fit_result* out) {
  return guarded([&] {
    require(grid != nullptr && out != nullptr, "grid/out");
    const auto fit = cswp::energy::fit_hamming_model(grid->rows);
    *out = {fit.base_mw, fit.c_in_mw, fit.c_out_mw, fit.mean_abs_error_mw};
  });
}

cswp_status cswp_fit_report(const cswp_grid* grid, char** out) {
  return guarded([&] {
    require(grid != nullptr && out != nullptr, "grid/out");
    *out = dup_string(cswp::energy::render_fit_report(cswp::energy::fit_hamming_model(grid->rows)));
  });
}

cswp_status cswp_heatmap(const cswp_grid* grid, const char* stage, char** out) {
  return guarded([&] {
    require(grid != nullptr && stage != nullptr && out != nullptr, "grid/stage/out");
    const auto which = cswp::energy::heatmap_stage_from_name(stage);
    const auto fit = cswp::energy::fit_hamming_model(grid->rows);
    *out = dup_string(cswp::energy::render_heatmap_csv(grid->rows, fit, which));
  });
}

}  // extern "C"
