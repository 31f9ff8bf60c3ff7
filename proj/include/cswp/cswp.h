/*
 * cswp: worst-case output-datapath switching for straight-line bit-vector
 * programs, the MAXSAT2 and SAT-gap program reductions, and a Hamming-weight
 * instruction power model.
 *
 * Conventions:
 *  - Every fallible call returns cswp_status; CSWP_OK is zero. On failure
 *    cswp_last_error() describes the problem (thread-local, valid until the
 *    next failing call on the same thread).
 *  - Objects are opaque handles created by *_create / *_parse / producers
 *    and released with the matching *_free. Handles are immutable after
 *    construction (except cswp_formula while clauses are being added) and
 *    may be shared between threads for read-only calls.
 *  - Strings returned through char** are heap allocated by the library and
 *    released with cswp_string_free.
 *  - Assignments are passed as parallel arrays of free-input names and
 *    values; every declared free input must appear exactly once.
 */
#ifndef CSWP_CSWP_H
#define CSWP_CSWP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CSWP_BUILDING_LIBRARY)
#    define CSWP_API __declspec(dllexport)
#  else
#    define CSWP_API __declspec(dllimport)
#  endif
#else
#  define CSWP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cswp_status {
  CSWP_OK = 0,
  CSWP_ERR_INVALID_ARGUMENT = 1,
  CSWP_ERR_PARSE = 2,
  CSWP_ERR_INVALID_PROGRAM = 3,
  CSWP_ERR_DOMAIN = 4,
  CSWP_ERR_BUDGET_EXCEEDED = 5,
  CSWP_ERR_RANK_DEFICIENT = 6,
  CSWP_ERR_INTERNAL = 7
} cswp_status;

CSWP_API const char* cswp_version(void);
CSWP_API const char* cswp_status_name(cswp_status status);
CSWP_API const char* cswp_last_error(void);
CSWP_API void cswp_string_free(char* s);

/* ---- programs ---------------------------------------------------------- */

typedef struct cswp_program cswp_program;

/* Parses the line-based program format. Reduction metadata comment lines
 * ("# meta ...", "# lit ...") are retained on the handle. Semantic checks
 * are done by cswp_program_validate and by every consumer. */
CSWP_API cswp_status cswp_program_parse(const char* text, cswp_program** out);
CSWP_API void cswp_program_free(cswp_program* program);

/* CSWP_OK if valid, otherwise CSWP_ERR_INVALID_PROGRAM. When violations is
 * non-NULL it receives one violation per line (empty when valid). */
CSWP_API cswp_status cswp_program_validate(const cswp_program* program, char** violations);

/* Canonical text, preceded by metadata comment lines when present. */
CSWP_API cswp_status cswp_program_serialize(const cswp_program* program, char** out);

CSWP_API unsigned cswp_program_width(const cswp_program* program);
CSWP_API size_t cswp_program_length(const cswp_program* program);
CSWP_API size_t cswp_program_free_input_count(const cswp_program* program);
/* NULL if index is out of range. Owned by the program handle. */
CSWP_API const char* cswp_program_free_input_name(const cswp_program* program, size_t index);

/* ---- execution --------------------------------------------------------- */

/* Report lines: o<i>=0x.., transition.<i>=<h>, total=<sum>. */
CSWP_API cswp_status cswp_run(const cswp_program* program, const char* const* names, const uint64_t* values,
                              size_t count, char** report);

CSWP_API cswp_status cswp_evaluate_switching(const cswp_program* program, const char* const* names,
                                             const uint64_t* values, size_t count, uint64_t* total);

/* ---- worst case and bounds -------------------------------------------- */

typedef struct cswp_worst_case cswp_worst_case;

/* Default enumeration budget used when budget is 0. */
#define CSWP_DEFAULT_BUDGET ((uint64_t)1 << 24)

/* Exhaustive search. workers == 0 picks the hardware concurrency. The result
 * does not depend on the number of workers. */
CSWP_API cswp_status cswp_solve(const cswp_program* program, uint64_t budget, unsigned workers,
                                cswp_worst_case** out);
CSWP_API uint64_t cswp_worst_case_max(const cswp_worst_case* wc);
CSWP_API uint64_t cswp_worst_case_explored(const cswp_worst_case* wc);
CSWP_API size_t cswp_worst_case_witness_count(const cswp_worst_case* wc);
CSWP_API uint64_t cswp_worst_case_witness(const cswp_worst_case* wc, size_t index);
/* key=value report (max, witness.free<name>, coarse, knownbits, explored),
 * followed by recovered.x<i> lines when the program carries reduction
 * metadata. */
CSWP_API cswp_status cswp_worst_case_report(const cswp_program* program, const cswp_worst_case* wc, char** out);
CSWP_API void cswp_worst_case_free(cswp_worst_case* wc);

typedef enum cswp_bound_method { CSWP_BOUND_COARSE = 0, CSWP_BOUND_KNOWNBITS = 1 } cswp_bound_method;

CSWP_API cswp_status cswp_bound(const cswp_program* program, cswp_bound_method method, uint64_t* out);

/* ---- Boolean formulas and oracles -------------------------------------- */

typedef struct cswp_formula cswp_formula;

CSWP_API cswp_status cswp_formula_create(uint32_t num_vars, cswp_formula** out);
/* DIMACS-style signed literals: 3 is x3, -3 is !x3. */
CSWP_API cswp_status cswp_formula_add_clause(cswp_formula* formula, const int32_t* literals, size_t count);
/* Text form, e.g. "x1, !x2" or "1 -2". */
CSWP_API cswp_status cswp_formula_add_clause_text(cswp_formula* formula, const char* text);
CSWP_API cswp_status cswp_formula_parse_dimacs(const char* text, cswp_formula** out);
CSWP_API uint32_t cswp_formula_num_vars(const cswp_formula* formula);
CSWP_API size_t cswp_formula_num_clauses(const cswp_formula* formula);
CSWP_API void cswp_formula_free(cswp_formula* formula);

/* Exhaustive MAXSAT over clauses of at most two literals. assignment, if
 * non-NULL, receives num_vars 0/1 entries (lexicographically smallest
 * optimum). */
CSWP_API cswp_status cswp_maxsat_oracle(const cswp_formula* formula, uint64_t budget, size_t* best_count,
                                        int* assignment);
/* model, if non-NULL, receives num_vars entries when satisfiable. */
CSWP_API cswp_status cswp_sat_oracle(const cswp_formula* formula, uint64_t budget, int* satisfiable, int* model);

/* ---- reductions -------------------------------------------------------- */

typedef enum cswp_reduction_kind { CSWP_REDUCTION_MAXSAT2 = 0, CSWP_REDUCTION_SAT_GAP = 1 } cswp_reduction_kind;

typedef struct cswp_reduction_info {
  cswp_reduction_kind kind;
  uint32_t num_vars;
  size_t num_clauses;
  uint64_t k_var;
  uint64_t k_clause;
  uint64_t k_sat;
  size_t decision_len;
  size_t switching_len;
  uint64_t gap_bits;
} cswp_reduction_info;

CSWP_API cswp_status cswp_reduce_maxsat2(const cswp_formula* formula, unsigned width, cswp_program** out);
CSWP_API cswp_status cswp_reduce_sat_gap(const cswp_formula* formula, unsigned width, uint64_t factor_num,
                                         uint64_t factor_den, cswp_program** out);
/* "2", "3/2" or "1.5". */
CSWP_API cswp_status cswp_parse_ratio(const char* text, uint64_t* num, uint64_t* den);

/* CSWP_ERR_INVALID_ARGUMENT when the program carries no reduction metadata. */
CSWP_API cswp_status cswp_program_reduction_info(const cswp_program* program, cswp_reduction_info* out);

/* bools[i] (0/1) -> values[i] for free input i; count must equal the number
 * of free inputs. */
CSWP_API cswp_status cswp_embed_assignment(const cswp_program* program, const int* bools, size_t count,
                                           uint64_t* values);
CSWP_API cswp_status cswp_recover_assignment(const cswp_program* program, const uint64_t* witness, size_t count,
                                             int* bools);

/* Runs the emitted clause evaluator on every assignment and compares it with
 * direct evaluation. Report: vars, clauses, instructions, assignments,
 * satisfying, mismatches, satisfiable. Returns CSWP_ERR_INTERNAL if any
 * mismatch is found (the report is still produced). */
CSWP_API cswp_status cswp_checksat_verify(const cswp_formula* formula, unsigned width, char** report);

/* ---- energy model ------------------------------------------------------ */

typedef struct cswp_energy_model {
  double p_idle_single_mw;
  double c_in_mw;
  double c_out_mw;
  double v_dd;
  double f_hz;
} cswp_energy_model;

/* "xs1l-paper". */
CSWP_API cswp_status cswp_energy_model_preset(const char* name, cswp_energy_model* out);
/* key=value lines: p_idle_mw, c_in_mw, c_out_mw, v_dd, f_hz. */
CSWP_API cswp_status cswp_energy_model_parse(const char* text, cswp_energy_model* out);

CSWP_API double cswp_predict_power(const cswp_energy_model* model, double base_mw, double h_in, double h_out);

CSWP_API cswp_status cswp_trace_energy(const cswp_program* program, const char* const* names, const uint64_t* values,
                                       size_t count, const cswp_energy_model* model, int include_input_term,
                                       double* energy_nj);
/* Report lines: cycles, total_switching, energy_nj. */
CSWP_API cswp_status cswp_trace_energy_report(const cswp_program* program, const char* const* names,
                                              const uint64_t* values, size_t count, const cswp_energy_model* model,
                                              int include_input_term, char** report);

/* alpha * c_sw * v_dd^2 * f in watts; CSWP_ERR_DOMAIN unless 0 <= alpha <= 1. */
CSWP_API cswp_status cswp_dynamic_power(double alpha, double c_sw_farads, double v_dd, double f_hz, double* watts);

typedef struct cswp_power_summary {
  double p_tdual_mw;
  double p_tsingle_mw;
  double p_dmin_mw;
  double p_dmax_mw;
  double p_drng_mw;
  double pct_min;
  double pct_max;
} cswp_power_summary;

CSWP_API cswp_status cswp_summarize_power(double p_tdual_mw, const double* powers_mw, size_t count,
                                          cswp_power_summary* out);
CSWP_API cswp_status cswp_power_summary_report(const cswp_power_summary* summary, char** out);

typedef struct cswp_grid cswp_grid;

/* Full operand grid for a two-operand mnemonic at width <= 8. */
CSWP_API cswp_status cswp_grid_generate(const char* mnemonic, unsigned width, double base_mw, double c_in_mw,
                                        double c_out_mw, double sigma_mw, uint64_t seed, cswp_grid** out);
/* Header op_a,op_b,h_in,h_out,power_mw; hex operands. */
CSWP_API cswp_status cswp_grid_parse_csv(const char* csv, cswp_grid** out);
CSWP_API cswp_status cswp_grid_to_csv(const cswp_grid* grid, char** out);
CSWP_API size_t cswp_grid_size(const cswp_grid* grid);
CSWP_API double cswp_grid_power(const cswp_grid* grid, size_t index);
CSWP_API void cswp_grid_free(cswp_grid* grid);

typedef struct cswp_fit_result {
  double base_mw;
  double c_in_mw;
  double c_out_mw;
  double mae_mw;
} cswp_fit_result;

CSWP_API cswp_status cswp_fit(const cswp_grid* grid, cswp_fit_result* out);
/* base_mw, c_in_mw, c_out_mw, mae_mw with three decimals. */
CSWP_API cswp_status cswp_fit_report(const cswp_grid* grid, char** out);
/* stage: "raw", "minus-out", "minus-in" or "residual". */
CSWP_API cswp_status cswp_heatmap(const cswp_grid* grid, const char* stage, char** out);

#ifdef __cplusplus
}
#endif

#endif /* CSWP_CSWP_H */
