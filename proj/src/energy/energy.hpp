#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/machine.hpp"
#include "core/program.hpp"

namespace cswp::energy {

/// Per-instruction power model: a constant idle term for one core plus
/// linear Hamming terms for input operands and results.
struct EnergyModel {
  double p_idle_single_mw = 0.0;
  double c_in_mw = 0.0;   // mW per input Hamming unit
  double c_out_mw = 0.0;  // mW per output Hamming unit
  double v_dd = 1.0;      // V
  double f_hz = 500e6;

  friend bool operator==(const EnergyModel&, const EnergyModel&) = default;
};

void validate(const EnergyModel& model);

/// Named presets. "xs1l-paper": 164 mW idle, 1.3 mW per input bit, 4.4 mW
/// per output bit, 1.0 V, 500 MHz (published XS1-L figures; not ground
/// truth for any other device).
EnergyModel preset_model(std::string_view name);

/// key=value lines: p_idle_mw, c_in_mw, c_out_mw, v_dd, f_hz. Unset keys keep
/// their defaults; '#' starts a comment.
EnergyModel parse_model(std::string_view text);

double predict_power(const EnergyModel& model, double base_mw, double h_in, double h_out);

/// Energy in nJ of one execution, one instruction per clock cycle: each
/// output transition costs (p_idle + c_out * h_out [+ c_in * h_in]) / f.
/// h_in is the summed Hamming distance between successive instructions'
/// operands at the same position (absent operands count as zero).
double trace_energy_nj(const ExecutionTrace& trace, const EnergyModel& model, bool include_input_term = false);
double trace_energy_nj(const Program& program, std::span<const uint64_t> assignment, const EnergyModel& model,
                       bool include_input_term = false);

/// alpha * c_sw * v_dd^2 * f, in W. Static (leakage) power is not modelled
/// beyond the constant idle term of EnergyModel.
double dynamic_power(double alpha, double c_sw_farads, double v_dd, double f_hz);

struct PowerSummary {
  double p_tdual = 0;
  double p_tsingle = 0;
  double p_dmin = 0;
  double p_dmax = 0;
  double p_drng = 0;
  double pct_min = 0;  // fractions of single-core power
  double pct_max = 0;
};

/// Splits measured test powers against dual-core idle power.
PowerSummary summarize_power(double p_tdual_mw, std::span<const double> test_powers_mw);
std::string render_power_summary(const PowerSummary& s);

struct Measurement {
  uint64_t op_a = 0;
  uint64_t op_b = 0;
  unsigned h_in = 0;
  unsigned h_out = 0;
  double power_mw = 0;

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

inline constexpr unsigned kMaxGridWidth = 8;

/// Every operand pair (a, b) in [0, 2^width)^2, row-major in a. Power is
/// base + c_in*H_i + c_out*H_o plus N(0, sigma) noise from a seeded mt19937_64.
std::vector<Measurement> gen_synthetic_grid(Mnemonic op, unsigned width, const EnergyModel& model, double base_mw,
                                            double noise_sigma_mw, uint64_t seed);

std::string format_grid_csv(std::span<const Measurement> grid);
std::vector<Measurement> parse_grid_csv(std::string_view csv);

struct FitResult {
  double base_mw = 0;
  double c_in_mw = 0;
  double c_out_mw = 0;
  double mean_abs_error_mw = 0;
  // power - base - c_in*h_in - c_out*h_out, aligned with the input rows.
  std::vector<double> residuals;
};

/// Ordinary least squares of power on [1, h_in, h_out].
FitResult fit_hamming_model(std::span<const Measurement> measurements);
std::string render_fit_report(const FitResult& fit);

enum class HeatmapStage { Raw, MinusOut, MinusIn, Residual };

HeatmapStage heatmap_stage_from_name(std::string_view name);

/// Dense matrix, rows = op_a, cols = op_b. Requires a complete square grid.
std::string render_heatmap_csv(std::span<const Measurement> grid, const FitResult& fit, HeatmapStage stage);

std::string format_fixed(double v, int decimals);

}  // namespace cswp::energy
